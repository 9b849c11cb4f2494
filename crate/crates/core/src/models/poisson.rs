//! Nonlocal Poisson equation `L_δ u = f` with the mean condition.
//!
//! The operator is singular on constants. Replacing `λ(0)` by 1 makes it
//! invertible and pins `u_0^0 = f_0^0`, so `u` and `f` share their mean.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sht::SphHarmCoeffs;
use crate::spectrum::Spectrum;

#[derive(Debug, Clone)]
pub struct PoissonProblem<T> {
    rhs: SphHarmCoeffs<T>,
    spectrum: Spectrum<T>,
}

impl<T: Real> PoissonProblem<T> {
    pub fn new(rhs: SphHarmCoeffs<T>, spectrum: Spectrum<T>) -> Result<Self> {
        if rhs.degree() != spectrum.degree() {
            return Err(Error::DegreeMismatch {
                expected: spectrum.degree(),
                found: rhs.degree(),
            });
        }
        if spectrum.values[0] != T::zero() {
            return Err(Error::invalid(format!(
                "mean-mode eigenvalue must be 0, got {}",
                spectrum.values[0]
            )));
        }
        Ok(PoissonProblem { rhs, spectrum })
    }

    pub fn rhs(&self) -> &SphHarmCoeffs<T> {
        &self.rhs
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }
}

fn pinned_eigenvalues<T: Real>(spectrum: &Spectrum<T>) -> Vec<T> {
    let mut lambda = spectrum.values.clone();
    lambda[0] = T::one();
    lambda
}

pub fn solve_poisson<T: Real>(problem: &PoissonProblem<T>) -> Result<SphHarmCoeffs<T>> {
    let lambda = pinned_eigenvalues(&problem.spectrum);
    if let Some(ell) = lambda.iter().position(|&l| l == T::zero()) {
        return Err(Error::ZeroEigenvalue { ell });
    }
    let mut u = problem.rhs.clone();
    u.scale_by_degree(|ell| lambda[ell].recip());
    Ok(u)
}

/// Applies the pinned operator (`λ(0) → 1`) to `u`; the inverse of
/// [`solve_poisson`].
pub fn apply_pinned<T: Real>(u: &SphHarmCoeffs<T>, spectrum: &Spectrum<T>) -> Result<SphHarmCoeffs<T>> {
    if u.degree() != spectrum.degree() {
        return Err(Error::DegreeMismatch {
            expected: spectrum.degree(),
            found: u.degree(),
        });
    }
    let lambda = pinned_eigenvalues(spectrum);
    let mut out = u.clone();
    out.scale_by_degree(|ell| lambda[ell]);
    Ok(out)
}

/// `f(x,y,z) = −exp(−30((x−¼)² + (y−√11/4)² + (z−¼)²)) − exp(−50z²)`.
pub fn death_star<T: Real>(x: T, y: T, z: T) -> T {
    let q = T::lit(0.25);
    let yc = T::lit(11.0).sqrt() / T::lit(4.0);
    let r2 = (x - q).powi(2) + (y - yc).powi(2) + (z - q).powi(2);
    -(T::lit(-30.0) * r2).exp() - (T::lit(-50.0) * z * z).exp()
}

/// Death-star right-hand side projected at degree `n`.
pub fn death_star_rhs<T: Real>(n: usize) -> Result<SphHarmCoeffs<T>> {
    super::project(n, death_star)
}
