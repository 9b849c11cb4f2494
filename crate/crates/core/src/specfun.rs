//! Legendre, associated Legendre and cylindrical Bessel evaluation.
//!
//! Three routes to `P_ℓ(cos θ)` are provided: the forward three-term
//! recurrence (linear cost, accurate everywhere), the four-term Szegő
//! expansion in Bessel functions (constant cost, accurate for large ℓ), and
//! the terminating hypergeometric series in `sin²(θ/2)` which yields
//! `(P_ℓ(cos θ) − 1) / sin²(θ/2)` without cancellation near `θ = 0`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Above this value of `ℓ(ℓ+1)·sin²(θ/2)` the `sin²(θ/2)` series is abandoned
/// for the recurrence: the alternating terms grow like `I₀(2√y)` and their
/// cancellation would cost more digits than `P_ℓ − 1` itself does.
pub const HAVERSINE_SERIES_LIMIT: f64 = 1.0;

/// Number of terms retained in the Szegő expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SzegoTermCount(u8);

impl SzegoTermCount {
    /// All implemented coefficient functions `a₀..a₃`.
    pub const FULL: SzegoTermCount = SzegoTermCount(4);

    pub fn new(count: usize) -> Result<Self> {
        if (1..=4).contains(&count) {
            Ok(SzegoTermCount(count as u8))
        } else {
            Err(Error::invalid(format!(
                "Szegő term count must be in 1..=4, got {count}"
            )))
        }
    }

    pub fn count(self) -> usize {
        self.0 as usize
    }
}

impl Default for SzegoTermCount {
    fn default() -> Self {
        Self::FULL
    }
}

fn check_unit_interval<T: Real>(t: T) -> Result<()> {
    let slack = T::one() + T::lit(4.0) * T::epsilon();
    if t.abs() <= slack {
        Ok(())
    } else {
        Err(Error::domain(format!("argument {t} outside [-1, 1]")))
    }
}

/// Returns `(P_ℓ(t), P_{ℓ-1}(t))`; for `ℓ = 0` the second entry is 0.
pub(crate) fn legendre_pair<T: Real>(ell: usize, t: T) -> (T, T) {
    if ell == 0 {
        return (T::one(), T::zero());
    }
    let mut prev = T::one();
    let mut cur = t;
    let mut k = T::one();
    for _ in 1..ell {
        let next = ((k + k + T::one()) * t * cur - k * prev) / (k + T::one());
        prev = cur;
        cur = next;
        k += T::one();
    }
    (cur, prev)
}

/// `P_ℓ(t)` by the forward three-term recurrence.
pub fn legendre_rec<T: Real>(ell: usize, t: T) -> Result<T> {
    check_unit_interval(t)?;
    Ok(legendre_pair(ell, t).0)
}

/// Szegő coefficient functions `a₁(θ)..a₃(θ)` (`a₀ ≡ 1`).
fn szego_coefficients<T: Real>(theta: T) -> [T; 3] {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let th2 = theta * theta;
    let th3 = th2 * theta;
    let a1 = (theta * c - s) / (T::lit(8.0) * theta * s);
    let a2 = (T::lit(6.0) * theta * s * c - T::lit(15.0) * s2 + th2 * (T::lit(9.0) - s2))
        / (T::lit(128.0) * th2 * s2);
    let a3_num = ((th3 + T::lit(21.0) * theta) * s2 + T::lit(15.0) * th3) * c
        - ((T::lit(3.0) * th2 + T::lit(63.0)) * s2 - T::lit(27.0) * th2) * s;
    let a3 = T::lit(5.0) * a3_num / (T::lit(1024.0) * th3 * s2 * s);
    [a1, a2, a3]
}

/// `P_ℓ(cos θ)` by the truncated Szegő expansion
/// `√(θ/sin θ) Σ_ν a_ν(θ) J_ν((ℓ+½)θ) / (ℓ+½)^ν`.
///
/// Angles beyond `π/2` are folded with `P_ℓ(−x) = (−1)^ℓ P_ℓ(x)`, so the
/// expansion is only ever evaluated on `(0, π/2]`. Only `J₀` and `J₁` are
/// evaluated directly; `J₂` and `J₃` come from the forward recurrence.
pub fn legendre_szego<T: Real>(ell: usize, theta: T, terms: SzegoTermCount) -> Result<T> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::domain(format!("Szegő angle {theta} outside (0, π)")));
    }
    if ell == 0 {
        return Ok(T::one());
    }
    let (th, sign) = if theta > T::FRAC_PI_2() {
        let sign = if ell.is_multiple_of(2) { T::one() } else { -T::one() };
        (T::PI() - theta, sign)
    } else {
        (theta, T::one())
    };
    let nu = T::from_usize_lossy(ell) + T::lit(0.5);
    let z = nu * th;
    let mut j = [T::zero(); 4];
    j[0] = bessel_j0(z);
    j[1] = bessel_j1(z);
    let two_over_z = T::lit(2.0) / z;
    j[2] = two_over_z * j[1] - j[0];
    j[3] = T::lit(2.0) * two_over_z * j[2] - j[1];

    let a = szego_coefficients(th);
    let mut sum = j[0];
    let mut scale = T::one();
    for v in 1..terms.count() {
        scale /= nu;
        sum += a[v - 1] * j[v] * scale;
    }
    Ok(sign * (th / th.sin()).sqrt() * sum)
}

/// `(P_ℓ(cos θ) − 1) / sin²(θ/2)` to high relative accuracy.
///
/// Uses `P_ℓ(cos θ) = Σ_{k=0}^{ℓ} (−1)^k C(ℓ,k) C(ℓ+k,k) sin^{2k}(θ/2)`
/// with the `k = 0` term removed analytically. Where
/// `ℓ(ℓ+1) sin²(θ/2)` exceeds [`HAVERSINE_SERIES_LIMIT`], `P_ℓ` is far enough
/// from 1 that the recurrence is used instead. At `θ = 0` the limit
/// `−ℓ(ℓ+1)` is returned.
pub fn legendre_m1_over_hav<T: Real>(ell: usize, theta: T) -> Result<T> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return Err(Error::domain(format!("angle {theta} outside [0, π]")));
    }
    let hav = (theta * T::lit(0.5)).sin();
    Ok(m1_over_hav_from_hav(ell, hav * hav))
}

/// Same ratio as [`legendre_m1_over_hav`], parameterized by `s = sin²(θ/2)`.
pub(crate) fn m1_over_hav_from_hav<T: Real>(ell: usize, s: T) -> T {
    if ell == 0 {
        return T::zero();
    }
    let l = T::from_usize_lossy(ell);
    let first = -l * (l + T::one());
    if s == T::zero() {
        return first;
    }
    if -first * s > T::lit(HAVERSINE_SERIES_LIMIT) {
        let p = legendre_pair(ell, T::one() - (s + s)).0;
        return (p - T::one()) / s;
    }
    hav_series(ell, s)
}

/// `Σ_{k=1}^{ℓ} (−1)^k C(ℓ,k) C(ℓ+k,k) s^{k−1}` with early termination.
fn hav_series<T: Real>(ell: usize, s: T) -> T {
    let l = T::from_usize_lossy(ell);
    let mut term = -l * (l + T::one());
    let mut sum = term;
    let mut k = T::one();
    for _ in 2..=ell {
        k += T::one();
        let next = -term * (l - k + T::one()) * (l + k) * s / (k * k);
        let decreasing = next.abs() < term.abs();
        term = next;
        sum += term;
        if decreasing && term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

// J₀ and J₁ come from `libm` (the FreeBSD msun routines): rational minimax
// fits for z < 2 and the Hankel asymptotic form with fitted phase/amplitude
// corrections for z ≥ 2. Evaluated in f64 whatever the scalar type.
fn bessel_j0<T: Real>(z: T) -> T {
    T::lit(libm::j0(z.to_f64_lossy()))
}

fn bessel_j1<T: Real>(z: T) -> T {
    T::lit(libm::j1(z.to_f64_lossy()))
}

/// Cylindrical Bessel function `J_ν(z)` for `ν ∈ {0, 1, 2, 3}` and `z > 0`.
///
/// `J₂` and `J₃` are obtained from `J₀` and `J₁` by forward recurrence.
pub fn bessel_j<T: Real>(nu: usize, z: T) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::domain(format!("Bessel argument {z} must be positive")));
    }
    let j0 = bessel_j0(z);
    let j1 = bessel_j1(z);
    let two_over_z = T::lit(2.0) / z;
    match nu {
        0 => Ok(j0),
        1 => Ok(j1),
        2 => Ok(two_over_z * j1 - j0),
        3 => {
            let j2 = two_over_z * j1 - j0;
            Ok(T::lit(2.0) * two_over_z * j2 - j1)
        }
        _ => Err(Error::domain(format!("Bessel order {nu} not in 0..=3"))),
    }
}

/// Recurrence coefficients for the normalized associated Legendre functions
/// `P̃_ℓ^m`, orthonormal on `[−1, 1]` for fixed `m`.
///
/// `P̃_m^m(t) = √(m+½) √(Π_{k≤m} (2k−1)/(2k)) (1−t²)^{m/2}` is built one
/// factor at a time by [`AssocLegendre::next_diagonal`]; higher degrees follow
/// from `P̃_ℓ^m = a_ℓm (t P̃_{ℓ−1}^m − b_ℓm P̃_{ℓ−2}^m)`.
#[derive(Debug, Clone)]
pub struct AssocLegendre<T> {
    degree: usize,
    a: Vec<T>,
    b: Vec<T>,
    diag: Vec<T>,
}

#[inline]
fn tri(ell: usize, m: usize) -> usize {
    ell * (ell + 1) / 2 + m
}

impl<T: Real> AssocLegendre<T> {
    pub fn new(degree: usize) -> Self {
        let size = tri(degree + 1, 0);
        let mut a = vec![T::zero(); size];
        let mut b = vec![T::zero(); size];
        for ell in 1..=degree {
            for m in 0..ell {
                let l2 = (ell * ell) as f64;
                let m2 = (m * m) as f64;
                a[tri(ell, m)] = T::lit(((4.0 * l2 - 1.0) / (l2 - m2)).sqrt());
                if ell >= m + 2 {
                    let p2 = ((ell - 1) * (ell - 1)) as f64;
                    b[tri(ell, m)] = T::lit(((p2 - m2) / (4.0 * p2 - 1.0)).sqrt());
                }
            }
        }
        let diag = (0..=degree)
            .map(|m| {
                if m == 0 {
                    T::FRAC_1_SQRT_2()
                } else {
                    T::lit(((2 * m + 1) as f64 / (2 * m) as f64).sqrt())
                }
            })
            .collect();
        AssocLegendre { degree, a, b, diag }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `P̃_m^m` from `P̃_{m−1}^{m−1}` (pass anything for `m = 0`) and
    /// `sin θ = √(1 − t²)`.
    #[inline]
    pub fn next_diagonal(&self, m: usize, prev: T, sin_theta: T) -> T {
        if m == 0 {
            self.diag[0]
        } else {
            prev * self.diag[m] * sin_theta
        }
    }

    /// Calls `f(ℓ, P̃_ℓ^m(t))` for `ℓ = m..=top` given the diagonal value.
    #[inline]
    pub fn for_each_degree(&self, m: usize, top: usize, t: T, diagonal: T, mut f: impl FnMut(usize, T)) {
        debug_assert!(top <= self.degree);
        if m > top {
            return;
        }
        f(m, diagonal);
        if m == top {
            return;
        }
        let mut p0 = diagonal;
        let mut p1 = self.a[tri(m + 1, m)] * t * diagonal;
        f(m + 1, p1);
        for ell in m + 2..=top {
            let k = tri(ell, m);
            let p2 = self.a[k] * (t * p1 - self.b[k] * p0);
            f(ell, p2);
            p0 = p1;
            p1 = p2;
        }
    }
}

/// `P̃_ℓ^m(t)`, orthonormal on `[−1, 1]` for fixed `m`.
///
/// With the phase `i^{m+|m|}` folded in, `P̃_ℓ^{−m} = P̃_ℓ^{m}` and the
/// diagonal `P̃_m^m` is non-negative on `[−1, 1]`.
pub fn assoc_legendre_normalized<T: Real>(ell: usize, m: i64, t: T) -> Result<T> {
    let mm = m.unsigned_abs() as usize;
    if mm > ell {
        return Err(Error::domain(format!("order |{m}| exceeds degree {ell}")));
    }
    check_unit_interval(t)?;
    let t = t.max(-T::one()).min(T::one());
    let sin_theta = ((T::one() - t) * (T::one() + t)).sqrt();
    let rec = AssocLegendre::new(ell);
    let mut diag = T::zero();
    for k in 0..=mm {
        diag = rec.next_diagonal(k, diag, sin_theta);
    }
    let mut out = diag;
    rec.for_each_degree(mm, ell, t, diag, |l, v| {
        if l == ell {
            out = v;
        }
    });
    Ok(out)
}
