//! Clenshaw–Curtis rules for Jacobi weights and Gauss–Legendre rules.

use rustdct::DctPlanner;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::legendre_pair;

/// Clenshaw–Curtis rule for `∫ f(x) (1−x)^α (1+x)^β dx` on the
/// Chebyshev–Lobatto points `x_k = cos(kπ/N)`, exact for polynomials of
/// degree `≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CCRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> CCRule<T> {
    /// Polynomial degree of exactness `N` (one less than the node count).
    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `1 − x_k`, computed as `2 sin²(kπ/(2N))` to keep full relative
    /// accuracy next to `x = 1`.
    pub fn one_minus_node(&self, k: usize) -> T {
        let n = self.order();
        let s = (T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(2 * n)).sin();
        T::lit(2.0) * s * s
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre rule on `[−1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GLRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GLRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn check_jacobi_exponents<T: Real>(alpha: T, beta: T) -> Result<()> {
    if alpha > -T::one() && beta > -T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}"
        )))
    }
}

/// `2^{α+β+1} B(α+1, β+1)`, the total mass of the Jacobi weight.
fn jacobi_mass<T: Real>(alpha: T, beta: T) -> T {
    let two = T::lit(2.0);
    let scale = two.powf(alpha + beta + T::one());
    if beta == T::zero() {
        scale / (alpha + T::one())
    } else if alpha == T::zero() {
        scale / (beta + T::one())
    } else {
        let (a, b) = (alpha.to_f64_lossy() + 1.0, beta.to_f64_lossy() + 1.0);
        scale * T::lit(libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b))
    }
}

/// Modified Chebyshev moments `μ_k = ∫ T_k(x) (1−x)^α (1+x)^β dx`,
/// `k = 0..count`, by forward recurrence.
pub fn jacobi_moments<T: Real>(alpha: T, beta: T, count: usize) -> Result<Vec<T>> {
    check_jacobi_exponents(alpha, beta)?;
    let mut mu = Vec::with_capacity(count);
    if count == 0 {
        return Ok(mu);
    }
    let two = T::lit(2.0);
    let ab = alpha + beta;
    mu.push(jacobi_mass(alpha, beta));
    if count > 1 {
        mu.push((beta - alpha) / (ab + two) * mu[0]);
    }
    let mut ell = T::one();
    for k in 1..count.saturating_sub(1) {
        let next = -(two * (alpha - beta) * mu[k] + (ab - ell + two) * mu[k - 1]) / (ab + ell + two);
        mu.push(next);
        ell += T::one();
    }
    Ok(mu)
}

fn lobatto_nodes<T: Real>(n: usize) -> Vec<T> {
    // sin form keeps the rule exactly antisymmetric
    let denom = T::from_usize_lossy(2 * n);
    (0..=n)
        .map(|k| {
            let num = T::from_usize_lossy(n) - T::from_usize_lossy(2 * k);
            (T::PI() * num / denom).sin()
        })
        .collect()
}

fn check_node_count(n_nodes: usize) -> Result<()> {
    if n_nodes < 2 {
        Err(Error::invalid(format!(
            "Clenshaw–Curtis rule needs at least 2 nodes, got {n_nodes}"
        )))
    } else {
        Ok(())
    }
}

fn endpoint_scale<T: Real>(j: usize, n: usize) -> T {
    let nn = T::from_usize_lossy(n);
    if j == 0 || j == n {
        T::lit(0.5) / nn
    } else {
        T::one() / nn
    }
}

/// Clenshaw–Curtis weights for the Jacobi weight with `n_nodes = N+1`
/// points, evaluating the cosine sum with a type-I discrete cosine transform.
pub fn cc_weights<T: Real>(alpha: T, beta: T, n_nodes: usize) -> Result<CCRule<T>> {
    check_node_count(n_nodes)?;
    let n = n_nodes - 1;
    let mut buf = jacobi_moments(alpha, beta, n_nodes)?;
    let dct = DctPlanner::new().plan_dct1(n_nodes);
    // DCT-I gives ½(μ₀ + (−1)^j μ_N) + Σ_{k=1}^{N−1} μ_k cos(πjk/N)
    dct.process_dct1(&mut buf);
    let two = T::lit(2.0);
    let weights = buf
        .iter()
        .enumerate()
        .map(|(j, &v)| endpoint_scale::<T>(j, n) * two * v)
        .collect();
    Ok(CCRule {
        nodes: lobatto_nodes(n),
        weights,
        alpha,
        beta,
    })
}

/// Same rule as [`cc_weights`] with the cosine sum evaluated term by term.
pub fn cc_weights_direct<T: Real>(alpha: T, beta: T, n_nodes: usize) -> Result<CCRule<T>> {
    check_node_count(n_nodes)?;
    let n = n_nodes - 1;
    let mu = jacobi_moments(alpha, beta, n_nodes)?;
    let two = T::lit(2.0);
    let weights = (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { T::one() } else { -T::one() };
            let mut acc = mu[0] + sign * mu[n];
            for (k, &m) in mu.iter().enumerate().take(n).skip(1) {
                // reduce jk mod 2N before taking the cosine
                let r = (j * k) % (2 * n);
                let c = (T::PI() * T::from_usize_lossy(r) / T::from_usize_lossy(n)).cos();
                acc += two * m * c;
            }
            endpoint_scale::<T>(j, n) * acc
        })
        .collect();
    Ok(CCRule {
        nodes: lobatto_nodes(n),
        weights,
        alpha,
        beta,
    })
}

const NEWTON_MAX_STEPS: usize = 100;

/// Gauss–Legendre rule with `n_nodes` points by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre<T: Real>(n_nodes: usize) -> Result<GLRule<T>> {
    if n_nodes == 0 {
        return Err(Error::invalid("Gauss–Legendre rule needs at least one node"));
    }
    let n = n_nodes;
    let nf = n as f64;
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let tol = T::lit(2.0) * T::epsilon();
    let nt = T::from_usize_lossy(n);

    for i in 0..n.div_ceil(2) {
        // Tricomi's estimate of the (i+1)-th largest root
        let theta = std::f64::consts::PI * (4.0 * i as f64 + 3.0) / (4.0 * nf + 2.0);
        let guess = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut x = T::lit(guess);
        if n % 2 == 1 && i == n / 2 {
            x = T::zero();
        }
        let mut converged = false;
        let mut deriv = T::one();
        for _ in 0..NEWTON_MAX_STEPS {
            let (p, q) = legendre_pair(n, x);
            deriv = nt * (x * p - q) / (x * x - T::one());
            let dx = p / deriv;
            x -= dx;
            if dx.abs() <= tol {
                let (p, q) = legendre_pair(n, x);
                deriv = nt * (x * p - q) / (x * x - T::one());
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { index: i, n });
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * deriv * deriv);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    Ok(GLRule { nodes, weights })
}
