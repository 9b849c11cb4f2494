//! Nonlocal Brusselator
//!
//! ```text
//! u_t   = ε² L_δ u + ε²E − u + f u² v
//! τ v_t =    L_δ v + ε⁻²(u − u² v)
//! ```
//!
//! The linear parts are `ε² L_δ` for u and `L_δ / τ` for v. The `−u` term
//! stays in the nonlinearity unless `linear_decay` is set, in which case it
//! is added to the (still diagonal) linear part of u.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sht::{GridValues, SphHarmCoeffs, SphereGrid};
use crate::spectrum::{EvalMethod, Kernel, Spectrum};
use crate::timestep::{etdrk4_tables, DiagonalOperator, GridNonlinearity};

use super::{constant, ModelSystem, Pointwise};

#[derive(Debug, Clone, PartialEq)]
pub struct BrusselatorConfig<T> {
    pub e: T,
    pub epsilon: T,
    pub tau: T,
    pub f: T,
    pub kernel: Kernel<T>,
    pub degree: usize,
    pub h: T,
    pub steps: usize,
    pub linear_decay: bool,
}

impl<T: Real> BrusselatorConfig<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(e: T, epsilon: T, tau: T, f: T, kernel: Kernel<T>, degree: usize, h: T, steps: usize) -> Result<Self> {
        let positive = [("E", e), ("epsilon", epsilon), ("tau", tau), ("time step", h)];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(f > T::zero() && f < T::one()) {
            return Err(Error::invalid(format!("f must lie in (0, 1), got {f}")));
        }
        if steps == 0 {
            return Err(Error::invalid("steps must be at least 1"));
        }
        Ok(BrusselatorConfig {
            e,
            epsilon,
            tau,
            f,
            kernel,
            degree,
            h,
            steps,
            linear_decay: false,
        })
    }

    pub fn with_linear_decay(mut self, on: bool) -> Self {
        self.linear_decay = on;
        self
    }

    /// `(u_e, v_e)` with `u_e = ε²E/(1−f) = 1/v_e`.
    pub fn equilibrium(&self) -> (T, T) {
        let ue = self.epsilon * self.epsilon * self.e / (T::one() - self.f);
        (ue, ue.recip())
    }

    /// Constant fields at the equilibrium, degree `self.degree`.
    pub fn equilibrium_initial(&self) -> Vec<SphHarmCoeffs<T>> {
        let (ue, ve) = self.equilibrium();
        vec![constant(self.degree, ue), constant(self.degree, ve)]
    }

    /// `(N_u, N_v)` at a single point.
    #[inline]
    pub fn pointwise(&self, u: T, v: T) -> (T, T) {
        let eps2 = self.epsilon * self.epsilon;
        let u2v = u * u * v;
        let decay = if self.linear_decay { T::zero() } else { u };
        let nu = eps2 * self.e - decay + self.f * u2v;
        let nv = (u - u2v) / (eps2 * self.tau);
        (nu, nv)
    }

    pub fn system(&self, method: EvalMethod) -> Result<ModelSystem<T>> {
        let spectrum = Spectrum::compute(self.degree, self.kernel, method)?;
        let mut op_u = DiagonalOperator::from_spectrum(&spectrum, self.epsilon * self.epsilon);
        if self.linear_decay {
            op_u = op_u.with_shift(-T::one());
        }
        let op_v = DiagonalOperator::from_spectrum(&spectrum, self.tau.recip());
        let tables = vec![etdrk4_tables(&op_u, self.h)?, etdrk4_tables(&op_v, self.h)?];
        let cfg = self.clone();
        let pointwise: Pointwise<T> = Box::new(move |i: &[T], o: &mut [T]| {
            let (nu, nv) = cfg.pointwise(i[0], i[1]);
            o[0] = nu;
            o[1] = nv;
        });
        let nonlinearity = GridNonlinearity::new(SphereGrid::new(self.degree)?, 2, pointwise);
        Ok(ModelSystem { spectrum, tables, nonlinearity })
    }
}

pub fn brusselator_nonlinearities<T: Real>(
    u: &GridValues<T>,
    v: &GridValues<T>,
    cfg: &BrusselatorConfig<T>,
) -> Result<(GridValues<T>, GridValues<T>)> {
    if u.nlat() != v.nlat() || u.nlon() != v.nlon() {
        return Err(Error::ShapeMismatch {
            expected_rows: u.nlat(),
            expected_cols: u.nlon(),
            rows: v.nlat(),
            cols: v.nlon(),
        });
    }
    let (nu, nv): (Vec<T>, Vec<T>) = u
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(&a, &b)| cfg.pointwise(a, b))
        .unzip();
    Ok((
        GridValues::from_data(u.nlat(), u.nlon(), nu)?,
        GridValues::from_data(u.nlat(), u.nlon(), nv)?,
    ))
}
