//! Nonlocal operators and reaction-diffusion models on the unit sphere.
//!
//! The core is generic over the scalar type through [`Real`]; the `*64`
//! aliases at the crate root fix it to `f64`.

// `!(x > 0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod models;
pub mod quadrature;
pub mod scalar;
pub mod sht;
pub mod specfun;
pub mod spectrum;
pub mod timestep;

pub use error::{Error, Result};
pub use scalar::Real;
pub use sht::{analysis, synthesis, synthesis_onto, GridValues, SphHarmCoeffs, SphereGrid};
pub use spectrum::{EvalMethod, Kernel, KernelParams, Spectrum};

pub type SphHarmCoeffs64 = SphHarmCoeffs<f64>;
pub type SphereGrid64 = SphereGrid<f64>;
pub type GridValues64 = GridValues<f64>;
pub type KernelParams64 = KernelParams<f64>;
pub type Spectrum64 = Spectrum<f64>;
