//! Concrete problems built on the spectral machinery.

pub mod allen_cahn;
pub mod brusselator;
pub mod cesaro;
pub mod energy;
pub mod init;
pub mod poisson;

pub use allen_cahn::{allen_cahn_nonlinearity, cos10xy_initial, AllenCahnConfig};
pub use brusselator::{brusselator_nonlinearities, BrusselatorConfig};
pub use cesaro::{cesaro_apply, CesaroWeights};
pub use energy::{energy_grid, ginzburg_landau_energy};
pub use init::random_coeffs;
pub use poisson::{death_star, death_star_rhs, solve_poisson, PoissonProblem};

use crate::error::Result;
use crate::scalar::Real;
use crate::sht::{analysis, SphHarmCoeffs, SphereGrid};
use crate::spectrum::Spectrum;
use crate::timestep::{evolve, Etdrk4Tables, GridNonlinearity};

/// Boxed pointwise map used by the built-in models.
pub type Pointwise<T> = Box<dyn Fn(&[T], &mut [T]) + Send + Sync>;

/// A ready-to-run semi-discrete system: spectrum, one ETDRK4 table per
/// field and the pseudospectral nonlinearity.
pub struct ModelSystem<T> {
    pub spectrum: Spectrum<T>,
    pub tables: Vec<Etdrk4Tables<T>>,
    pub nonlinearity: GridNonlinearity<T, Pointwise<T>>,
}

impl<T: Real> ModelSystem<T> {
    pub fn grid(&self) -> &SphereGrid<T> {
        self.nonlinearity.grid()
    }

    pub fn evolve<O>(&self, initial: Vec<SphHarmCoeffs<T>>, steps: usize, stride: usize, observer: O) -> Result<Vec<SphHarmCoeffs<T>>>
    where
        O: FnMut(usize, T, &[SphHarmCoeffs<T>]) -> Result<()>,
    {
        evolve(initial, &self.tables, &self.nonlinearity, steps, stride, observer)
    }
}

/// Samples `f(x, y, z)` on the degree-`n` grid and projects it.
pub fn project<T: Real>(n: usize, f: impl Fn(T, T, T) -> T) -> Result<SphHarmCoeffs<T>> {
    let grid = SphereGrid::new(n)?;
    analysis(&grid.sample(f), &grid)
}

/// Coefficients of the constant field `c`.
pub fn constant<T: Real>(n: usize, c: T) -> SphHarmCoeffs<T> {
    let mut u = SphHarmCoeffs::zeros(n);
    u.set(0, 0, c * (T::lit(4.0) * T::PI()).sqrt());
    u
}
