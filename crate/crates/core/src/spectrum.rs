//! Eigenvalues of the nonlocal Laplace–Beltrami operator.
//!
//! For the kernel `ρ_δ ∝ (1−t)^{α−1}` supported on `|x − y| ≤ δ`, every
//! spherical harmonic of degree ℓ is an eigenfunction with eigenvalue
//!
//! ```text
//! λ_δ(ℓ) = (1+α) 2^{2−α} / δ² · ∫_{−1}^{1} g_ℓ(x) (1−x)^α dx,
//! g_ℓ(x) = [P_ℓ(1 − δ²(1−x)/4) − 1] / (1 − x),
//! ```
//!
//! and `g_ℓ` is a polynomial of degree `ℓ − 1`. The integral is computed
//! with a Clenshaw–Curtis rule for the weight `(1−x)^α`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::cc_weights;
use crate::scalar::Real;
use crate::specfun::{legendre_pair, legendre_szego, SzegoTermCount, HAVERSINE_SERIES_LIMIT};

/// Smallest Clenshaw–Curtis rule used for any degree.
pub const MIN_NODES: usize = 8;

/// Degree at which [`EvalMethod::default`] switches from the recurrence to
/// the asymptotic expansion.
pub const DEFAULT_SWITCH_DEGREE: usize = 50;

/// Parameters `(α, δ)` of the weakly singular kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<T> {
    alpha: T,
    delta: T,
}

impl<T: Real> KernelParams<T> {
    pub fn new(alpha: T, delta: T) -> Result<Self> {
        if !(alpha > -T::one() && alpha < T::one()) {
            return Err(Error::invalid(format!("alpha must lie in (-1, 1), got {alpha}")));
        }
        if !(delta > T::zero() && delta <= T::lit(2.0)) {
            return Err(Error::invalid(format!("delta must lie in (0, 2], got {delta}")));
        }
        Ok(KernelParams { alpha, delta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Lower end `d = 1 − δ²/2` of the interaction range in `t = x·y`.
    pub fn d(&self) -> T {
        T::one() - self.delta * self.delta * T::lit(0.5)
    }

    /// `(1+α) 2^{2−α} / δ²`.
    pub fn prefactor(&self) -> T {
        (T::one() + self.alpha) * T::lit(2.0).powf(T::lit(2.0) - self.alpha)
            / (self.delta * self.delta)
    }
}

/// How the Legendre polynomial inside the integrand is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Recurrence,
    Asymptotic,
    /// Recurrence for `ℓ ≤ switch_degree`, asymptotics above.
    Hybrid { switch_degree: usize },
}

impl Default for EvalMethod {
    fn default() -> Self {
        EvalMethod::Hybrid {
            switch_degree: DEFAULT_SWITCH_DEGREE,
        }
    }
}

impl EvalMethod {
    fn uses_asymptotics(self, ell: usize) -> bool {
        match self {
            EvalMethod::Recurrence => false,
            EvalMethod::Asymptotic => true,
            EvalMethod::Hybrid { switch_degree } => ell > switch_degree,
        }
    }
}

/// Local Laplace–Beltrami operator or the nonlocal one with a given kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel<T> {
    Local,
    Nonlocal(KernelParams<T>),
}

/// Provenance of one spectrum entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrySource {
    /// The mean mode, set to exactly zero.
    Exact,
    /// Closed form `−ℓ(ℓ+1)`.
    Local,
    Recurrence,
    Asymptotic,
}

/// `λ(ℓ)` for `ℓ = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub kernel: Kernel<T>,
    pub method: EvalMethod,
    pub values: Vec<T>,
    pub sources: Vec<EntrySource>,
}

/// `−ℓ(ℓ+1)`.
pub fn local_eigenvalue<T: Real>(ell: usize) -> T {
    let l = T::from_usize_lossy(ell);
    -l * (l + T::one())
}

/// `P_ℓ(cos θ)` from `s = sin²(θ/2)` away from the `θ ≈ 0` region.
fn legendre_from_hav<T: Real>(ell: usize, s: T, asymptotic: bool) -> T {
    if !asymptotic {
        return legendre_pair(ell, T::one() - (s + s)).0;
    }
    let l = T::from_usize_lossy(ell);
    let c = T::one() - s;
    if l * (l + T::one()) * c <= T::lit(HAVERSINE_SERIES_LIMIT) {
        // θ ≈ π: P_ℓ(cos θ) = (−1)^ℓ P_ℓ(cos(π − θ))
        let sign = if ell.is_multiple_of(2) { T::one() } else { -T::one() };
        let p = T::one() + c * crate::specfun::m1_over_hav_from_hav(ell, c);
        return sign * p;
    }
    let theta = if s <= T::lit(0.5) {
        T::lit(2.0) * s.sqrt().asin()
    } else {
        T::PI() - T::lit(2.0) * c.sqrt().asin()
    };
    legendre_szego(ell, theta, SzegoTermCount::FULL).expect("angle strictly inside (0, π)")
}

/// `λ_δ(ℓ)` by singular-weight Clenshaw–Curtis quadrature with
/// `max(ℓ+1, 8)` nodes.
pub fn eigenvalue<T: Real>(ell: usize, params: &KernelParams<T>, method: EvalMethod) -> Result<T> {
    Ok(eigenvalue_with_nodes(ell, params, method, (ell + 1).max(MIN_NODES))?.0)
}

pub(crate) fn eigenvalue_with_nodes<T: Real>(
    ell: usize,
    params: &KernelParams<T>,
    method: EvalMethod,
    n_nodes: usize,
) -> Result<(T, EntrySource)> {
    let asymptotic = method.uses_asymptotics(ell);
    let source = if asymptotic {
        EntrySource::Asymptotic
    } else {
        EntrySource::Recurrence
    };
    if ell == 0 {
        return Ok((T::zero(), EntrySource::Exact));
    }
    let rule = cc_weights(params.alpha, T::zero(), n_nodes)?;
    let eighth = params.delta * params.delta * T::lit(0.125);
    let l = T::from_usize_lossy(ell);
    let near_zero = T::lit(HAVERSINE_SERIES_LIMIT) / (l * (l + T::one()));

    let mut sum = T::zero();
    for (k, &w) in rule.weights.iter().enumerate() {
        let omx = rule.one_minus_node(k);
        let s = eighth * omx;
        let g = if s <= near_zero {
            eighth * crate::specfun::m1_over_hav_from_hav(ell, s)
        } else {
            (legendre_from_hav(ell, s, asymptotic) - T::one()) / omx
        };
        sum += w * g;
    }
    Ok((params.prefactor() * sum, source))
}

impl<T: Real> Spectrum<T> {
    /// Eigenvalues `λ_δ(0..=n)`; degrees are computed in parallel.
    pub fn nonlocal(n: usize, params: KernelParams<T>, method: EvalMethod) -> Result<Self> {
        let entries: Vec<(T, EntrySource)> = (0..=n)
            .into_par_iter()
            .map(|ell| eigenvalue_with_nodes(ell, &params, method, (ell + 1).max(MIN_NODES)))
            .collect::<Result<_>>()?;
        let (values, sources) = entries.into_iter().unzip();
        Ok(Spectrum {
            kernel: Kernel::Nonlocal(params),
            method,
            values,
            sources,
        })
    }

    pub fn local(n: usize) -> Self {
        let mut sources = vec![EntrySource::Local; n + 1];
        sources[0] = EntrySource::Exact;
        Spectrum {
            kernel: Kernel::Local,
            method: EvalMethod::default(),
            values: (0..=n).map(local_eigenvalue).collect(),
            sources,
        }
    }

    pub fn compute(n: usize, kernel: Kernel<T>, method: EvalMethod) -> Result<Self> {
        match kernel {
            Kernel::Local => Ok(Self::local(n)),
            Kernel::Nonlocal(p) => Self::nonlocal(n, p, method),
        }
    }

    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    /// Writes `ell,lambda` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "ell,lambda")?;
        for (ell, v) in self.values.iter().enumerate() {
            writeln!(out, "{ell},{:.16e}", v.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Computes `λ_δ(0..=n)`.
pub fn spectrum<T: Real>(n: usize, params: KernelParams<T>, method: EvalMethod) -> Result<Spectrum<T>> {
    Spectrum::nonlocal(n, params, method)
}
