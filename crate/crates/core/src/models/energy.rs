//! Nonlocal Ginzburg–Landau free energy
//! `E(u) = ∫ −(ε²/2) u L_δ u + ¼(u² − 1)² dΩ`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sht::{synthesis_onto, SphHarmCoeffs, SphereGrid};
use crate::spectrum::Spectrum;

/// Grid of degree `2n`, on which the quartic term of a degree-`n` field is
/// integrated exactly.
pub fn energy_grid<T: Real>(n: usize) -> Result<SphereGrid<T>> {
    SphereGrid::new(2 * n)
}

/// The quadratic term uses orthonormality, `−(ε²/2) Σ λ(ℓ) (u_ℓ^m)²`; the
/// quartic term is integrated on `grid`, whose degree must be at least
/// that of `u` (use [`energy_grid`] for exact quadrature).
pub fn ginzburg_landau_energy<T: Real>(
    u: &SphHarmCoeffs<T>,
    spectrum: &Spectrum<T>,
    epsilon: T,
    grid: &SphereGrid<T>,
) -> Result<T> {
    if u.degree() != spectrum.degree() {
        return Err(Error::DegreeMismatch {
            expected: spectrum.degree(),
            found: u.degree(),
        });
    }
    let quadratic: T = u
        .modes()
        .map(|(ell, _, v)| spectrum.values[ell] * v * v)
        .sum();
    let values = synthesis_onto(u, grid)?;
    let quartic = grid.integrate(&values.map(|v| {
        let w = v * v - T::one();
        w * w
    }))?;
    Ok(-(epsilon * epsilon / T::lit(2.0)) * quadratic + quartic / T::lit(4.0))
}
