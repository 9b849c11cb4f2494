//! Reproducible random initial conditions.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sht::SphHarmCoeffs;

/// Fills every coefficient of degree `≤ degree_cap` with `scale · N(0, 1)`.
///
/// Draws come from ChaCha20 seeded with `seed_from_u64(seed)` and are
/// assigned in order of increasing ℓ, then m from `−ℓ` to `ℓ`, so the same
/// seed gives the same field on every platform.
pub fn random_coeffs<T: Real>(degree_cap: usize, n: usize, scale: T, seed: u64) -> Result<SphHarmCoeffs<T>> {
    if degree_cap > n {
        return Err(Error::invalid(format!("degree cap {degree_cap} exceeds degree {n}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut u = SphHarmCoeffs::zeros(n);
    for ell in 0..=degree_cap {
        let l = ell as i64;
        for m in -l..=l {
            let draw: f64 = rng.sample(StandardNormal);
            u.set(ell, m, scale * T::lit(draw));
        }
    }
    Ok(u)
}
