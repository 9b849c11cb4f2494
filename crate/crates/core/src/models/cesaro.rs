//! Cesàro `(C, κ)` means of a spherical harmonic expansion.
//!
//! The degree-ℓ block is scaled by `A_{n−ℓ}^κ / A_n^κ` with
//! `A_ℓ^κ = C(ℓ+κ, ℓ)`. For `κ ≥ 2` this removes the Gibbs overshoot at
//! jump discontinuities.

use crate::scalar::Real;
use crate::sht::SphHarmCoeffs;

#[derive(Debug, Clone, PartialEq)]
pub struct CesaroWeights<T> {
    kappa: usize,
    factors: Vec<T>,
}

impl<T: Real> CesaroWeights<T> {
    pub fn new(kappa: usize, n: usize) -> Self {
        // A_{j−1}/A_j = j/(j+κ) keeps every factor in (0, 1] without
        // forming the binomials themselves.
        let mut factors = Vec::with_capacity(n + 1);
        let mut f = T::one();
        for ell in 0..=n {
            factors.push(f);
            let j = n - ell;
            if j > 0 {
                f = f * T::from_usize_lossy(j) / T::from_usize_lossy(j + kappa);
            }
        }
        CesaroWeights { kappa, factors }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn degree(&self) -> usize {
        self.factors.len() - 1
    }

    pub fn factors(&self) -> &[T] {
        &self.factors
    }

    pub fn apply(&self, coeffs: &SphHarmCoeffs<T>) -> SphHarmCoeffs<T> {
        assert_eq!(coeffs.degree(), self.degree(), "Cesàro weights built for another degree");
        let mut out = coeffs.clone();
        out.scale_by_degree(|ell| self.factors[ell]);
        out
    }
}

pub fn cesaro_apply<T: Real>(coeffs: &SphHarmCoeffs<T>, kappa: usize) -> SphHarmCoeffs<T> {
    CesaroWeights::new(kappa, coeffs.degree()).apply(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> f64 {
        (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
    }

    #[test]
    fn small_example() {
        let w = CesaroWeights::<f64>::new(2, 2);
        assert_eq!(w.factors()[0], 1.0);
        assert!((w.factors()[1] - 0.5).abs() < 1e-16);
        assert!((w.factors()[2] - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn matches_binomials() {
        for kappa in 0..5u64 {
            let n = 40u64;
            let w = CesaroWeights::<f64>::new(kappa as usize, n as usize);
            for ell in 0..=n {
                let expected = binom(n - ell + kappa, n - ell) / binom(n + kappa, n);
                assert!((w.factors()[ell as usize] - expected).abs() < 1e-14 * expected.max(1e-300));
            }
            assert!(w.factors().windows(2).all(|p| p[1] <= p[0]));
        }
    }

    #[test]
    fn identity_and_mean() {
        let mut u = SphHarmCoeffs::<f64>::zeros(5);
        u.set(0, 0, 3.0);
        u.set(4, -2, 1.5);
        assert_eq!(cesaro_apply(&u, 0), u);
        let v = cesaro_apply(&u, 3);
        assert_eq!(v.get(0, 0), 3.0);
        assert!(v.get(4, -2) < 1.5);
    }
}
