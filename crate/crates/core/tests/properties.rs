//! Cross-module invariants and randomized properties.

use std::f64::consts::PI;

use nlsphere::models::poisson::apply_pinned;
use nlsphere::models::{cesaro_apply, solve_poisson, CesaroWeights, PoissonProblem};
use nlsphere::quadrature::{gauss_legendre, jacobi_moments};
use nlsphere::sht::{analysis, relative_error, synthesis};
use nlsphere::specfun::{legendre_m1_over_hav, legendre_rec, legendre_szego, SzegoTermCount};
use nlsphere::spectrum::eigenvalue;
use nlsphere::{EvalMethod, KernelParams, SphHarmCoeffs, SphereGrid, Spectrum};
use proptest::prelude::*;

#[test]
fn legendre_endpoints_and_bound() {
    for ell in 0..=2000usize {
        assert_eq!(legendre_rec(ell, 1.0_f64).unwrap(), 1.0);
        let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(legendre_rec(ell, -1.0_f64).unwrap(), sign);
    }
    for ell in [3usize, 17, 120, 999] {
        for k in 0..=400 {
            let t = -1.0 + 2.0 * k as f64 / 400.0;
            assert!(legendre_rec(ell, t).unwrap().abs() <= 1.0 + 1e-12);
        }
    }
}

/// Relative error is measured against `max(|P_l|, 1e-2·env)` with
/// `env = √(2/(π(l+½) sin θ))` the amplitude envelope, so points sitting on
/// a zero of `P_l` do not turn rounding in the reference into a failure.
#[test]
fn szego_agrees_with_recurrence_for_large_degree() {
    let mut worst: f64 = 0.0;
    for ell in [60usize, 61, 100, 257, 500, 1000] {
        for k in 0..=3000 {
            let theta = 1e-2 + (PI - 2e-2) * k as f64 / 3000.0;
            let r = legendre_rec(ell, theta.cos()).unwrap();
            let s = legendre_szego(ell, theta, SzegoTermCount::FULL).unwrap();
            let env = (2.0 / (PI * (ell as f64 + 0.5) * theta.sin())).sqrt().min(1.0);
            worst = worst.max((s - r).abs() / r.abs().max(1e-2 * env));
        }
    }
    assert!(worst <= 1e-8, "worst relative difference {worst:e}");
}

#[test]
fn ratio_reconstructs_legendre() {
    for ell in [1usize, 2, 5, 10, 40, 150] {
        for k in 0..=50 {
            let theta = 0.5 + (PI - 0.5) * k as f64 / 50.0;
            let hav = (theta / 2.0).sin().powi(2);
            let back = legendre_m1_over_hav(ell, theta).unwrap() * hav + 1.0;
            let r = legendre_rec(ell, theta.cos()).unwrap();
            assert!((back - r).abs() <= 1e-13, "l={ell} θ={theta}: {back} vs {r}");
        }
    }
}

/// `∫ f(x)(1−x)^α dx` over [−1, 1] via `1 − x = 2v^{1/(1+α)}`, which turns
/// the weight into a constant, followed by Gauss–Legendre on a mesh graded
/// geometrically toward `v = 0`.
fn graded_jacobi_integral(alpha: f64, f: impl Fn(f64) -> f64) -> f64 {
    let gl = gauss_legendre::<f64>(24).unwrap();
    let p = 1.0 / (1.0 + alpha);
    let g = |v: f64| f(1.0 - 2.0 * v.powf(p));
    let mut edges = vec![0.0];
    edges.extend((0..=60).rev().map(|k| 0.5_f64.powi(k)));
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        total += half * gl.integrate(|s| g(mid + half * s));
    }
    2.0_f64.powf(1.0 + alpha) * p * total
}

#[test]
fn jacobi_moments_match_numerical_integration() {
    let alpha = 0.3;
    let mu = jacobi_moments(alpha, 0.0, 20).unwrap();
    for (k, &m) in mu.iter().enumerate() {
        let oracle = graded_jacobi_integral(alpha, |x| (k as f64 * x.clamp(-1.0, 1.0).acos()).cos());
        let rel = ((m - oracle) / oracle).abs();
        assert!(rel <= 1e-10, "k={k}: {m} vs {oracle} (rel {rel:e})");
    }
}

/// Non-increasing λ(l) is observed structure, not a theorem: with a finite
/// horizon the spectrum saturates with small oscillations. Every increase
/// must therefore be reproduced by the pure-recurrence spectrum to count as
/// genuine (reported as a warning); an increase only one method sees fails.
#[test]
fn spectrum_is_monotone_in_degree() {
    let mut genuine = Vec::new();
    for alpha in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        for delta in [0.01, 0.1, 1.0, 2.0] {
            let params = KernelParams::<f64>::new(alpha, delta).unwrap();
            let hybrid = Spectrum::nonlocal(200, params, EvalMethod::default()).unwrap();
            let rec = Spectrum::nonlocal(200, params, EvalMethod::Recurrence).unwrap();
            for ell in 1..=200 {
                let rises = |v: &[f64]| v[ell] > v[ell - 1] + 1e-10 * v[ell - 1].abs().max(1.0);
                let (h, r) = (rises(&hybrid.values), rises(&rec.values));
                assert_eq!(h, r, "methods disagree on monotonicity at α={alpha} δ={delta} l={ell}");
                if h {
                    genuine.push((alpha, delta, ell));
                }
            }
        }
    }
    // the whole-sphere horizon gives λ = −2l exactly, which must be strictly decreasing
    assert!(genuine.iter().all(|&(a, d, _)| !(a == -0.5 && d == 2.0)));
    if !genuine.is_empty() {
        let cases: std::collections::BTreeSet<String> =
            genuine.iter().map(|(a, d, _)| format!("(α={a}, δ={d})")).collect();
        eprintln!("warning: λ(l) increases somewhere for {cases:?}");
    }
}

#[test]
fn local_limit_over_grid() {
    for alpha in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        for delta in [0.01, 0.1] {
            let params = KernelParams::<f64>::new(alpha, delta).unwrap();
            let spec = Spectrum::nonlocal(200, params, EvalMethod::default()).unwrap();
            for (ell, &v) in spec.values.iter().enumerate() {
                let l = ell as f64;
                let bound = l * (l + 1.0) * (l + 2.0).powi(2) * delta * delta / 16.0;
                assert!((v + l * (l + 1.0)).abs() <= bound + 1e-12 * l * l, "α={alpha} δ={delta} l={ell}");
            }
        }
    }
}

fn coeffs_strategy(max_degree: usize) -> impl Strategy<Value = SphHarmCoeffs<f64>> {
    (0..=max_degree).prop_flat_map(|n| {
        let len = (n + 1) * (n + 1);
        prop::collection::vec(-1.0f64..1.0, len).prop_map(move |vals| {
            let mut c = SphHarmCoeffs::zeros(n);
            let mut it = vals.into_iter();
            for ell in 0..=n {
                let l = ell as i64;
                for m in -l..=l {
                    c.set(ell, m, it.next().unwrap());
                }
            }
            c
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sht_roundtrip_property(c in coeffs_strategy(24)) {
        let grid = SphereGrid::new(c.degree()).unwrap();
        let back = analysis(&synthesis(&c, &grid).unwrap(), &grid).unwrap();
        let err = c.as_slice().iter().zip(back.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn poisson_residual_property(c in coeffs_strategy(30), alpha in -0.9f64..0.9, delta in 0.05f64..2.0) {
        let params = KernelParams::new(alpha, delta).unwrap();
        let spec = Spectrum::nonlocal(c.degree(), params, EvalMethod::default()).unwrap();
        let u = solve_poisson(&PoissonProblem::new(c.clone(), spec.clone()).unwrap()).unwrap();
        let back = apply_pinned(&u, &spec).unwrap();
        if c.norm() > 0.0 {
            prop_assert!(relative_error(&back, &c) < 1e-12);
        }
        prop_assert_eq!(u.get(0, 0), c.get(0, 0));
    }

    #[test]
    fn cesaro_factors_are_monotone(kappa in 0usize..6, n in 0usize..300) {
        let w = CesaroWeights::<f64>::new(kappa, n);
        prop_assert_eq!(w.factors()[0], 1.0);
        prop_assert!(w.factors().windows(2).all(|p| p[1] <= p[0] && p[1] > 0.0));
    }

    #[test]
    fn cesaro_preserves_mean(c in coeffs_strategy(20), kappa in 0usize..4) {
        prop_assert_eq!(cesaro_apply(&c, kappa).mean(), c.mean());
    }

    #[test]
    fn eigenvalues_within_bounds(ell in 0usize..300, alpha in -0.95f64..0.95, delta in 0.001f64..2.0) {
        let params = KernelParams::new(alpha, delta).unwrap();
        let v = eigenvalue(ell, &params, EvalMethod::default()).unwrap();
        let l = ell as f64;
        let slack = 1e-8 * l * (l + 1.0);
        prop_assert!(v <= slack && v >= -l * (l + 1.0) - slack, "l={} v={}", ell, v);
    }
}
