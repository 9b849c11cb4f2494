//! ETDRK4 (Cox–Matthews) for systems whose linear part is diagonal in the
//! spherical harmonic basis.
//!
//! One step of size `h` with `L` diagonal and `N` the nonlinearity:
//!
//! ```text
//! A  = e^{hL/2} U + S N(U)
//! B  = e^{hL/2} U + S N(A)
//! C  = e^{hL/2} A + S (2 N(B) − N(U))
//! U⁺ = e^{hL} U + f₁ N(U) + 2 f₂ (N(A) + N(B)) + f₃ N(C)
//! ```
//!
//! with `S = L⁻¹(e^{hL/2} − 1)` and `f₁, f₂, f₃` the usual cubic
//! coefficient functions. All products are per mode.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sht::{analysis, synthesis, GridValues, SphHarmCoeffs, SphereGrid};
use crate::spectrum::Spectrum;

/// Below this `|z|` the coefficient functions use their Taylor series.
pub const TAYLOR_THRESHOLD: f64 = 0.5;

/// Number of Taylor terms. The `j`-th term of each series is bounded by
/// `(j+1)² |z|^j / (j+3)!`, which at `|z| = 1/2` and `j = 20` is far below
/// double-precision rounding.
pub const TAYLOR_TERMS: usize = 20;

/// Linear operator `prefactor · λ(ℓ) + shift`, identical for every order `m`
/// of a given degree ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator<T> {
    eigenvalues: Vec<T>,
    prefactor: T,
    shift: T,
}

impl<T: Real> DiagonalOperator<T> {
    /// `eigenvalues[ℓ]` for ℓ = 0..=n.
    pub fn new(eigenvalues: Vec<T>, prefactor: T) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid("operator needs at least the degree-0 eigenvalue"));
        }
        Ok(DiagonalOperator {
            eigenvalues,
            prefactor,
            shift: T::zero(),
        })
    }

    pub fn from_spectrum(spectrum: &Spectrum<T>, prefactor: T) -> Self {
        DiagonalOperator {
            eigenvalues: spectrum.values.clone(),
            prefactor,
            shift: T::zero(),
        }
    }

    /// Adds `shift` to every entry, e.g. `−1` to move a `−u` reaction term
    /// into the linear part.
    pub fn with_shift(mut self, shift: T) -> Self {
        self.shift = shift;
        self
    }

    pub fn degree(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    pub fn shift(&self) -> T {
        self.shift
    }

    /// Entry multiplying every `u_ℓ^m`.
    pub fn entry(&self, ell: usize) -> T {
        self.prefactor * self.eigenvalues[ell] + self.shift
    }

    /// True when every entry is `≤ 0`.
    pub fn is_dissipative(&self) -> bool {
        (0..=self.degree()).all(|ell| self.entry(ell) <= T::zero())
    }

    pub fn apply(&self, u: &SphHarmCoeffs<T>) -> Result<SphHarmCoeffs<T>> {
        if u.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: u.degree(),
            });
        }
        let mut out = u.clone();
        out.scale_by_degree(|ell| self.entry(ell));
        Ok(out)
    }
}

/// ETDRK4 coefficients for a single diagonal entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoeffs<T> {
    /// `e^{z}`
    pub exp_full: T,
    /// `e^{z/2}`
    pub exp_half: T,
    /// `h (e^{z/2} − 1) / z`
    pub stage: T,
    pub f1: T,
    pub f2: T,
    pub f3: T,
}

impl<T: Real> ModeCoeffs<T> {
    /// Coefficients for `z = h λ`.
    pub fn new(lambda: T, h: T) -> Self {
        let z = h * lambda;
        let exp_full = z.exp();
        let exp_half = (z / T::lit(2.0)).exp();
        let stage = if z == T::zero() {
            h / T::lit(2.0)
        } else {
            h * (z / T::lit(2.0)).exp_m1() / z
        };
        let (f1, f2, f3) = if z.abs() < T::lit(TAYLOR_THRESHOLD) {
            phi_taylor(z)
        } else {
            phi_direct(z)
        };
        ModeCoeffs {
            exp_full,
            exp_half,
            stage,
            f1: f1 * h,
            f2: f2 * h,
            f3: f3 * h,
        }
    }
}

/// `f₁/h, f₂/h, f₃/h` from the closed forms.
pub fn phi_direct<T: Real>(z: T) -> (T, T, T) {
    let ez = z.exp();
    let z2 = z * z;
    let z3 = z2 * z;
    let (two, three, four) = (T::lit(2.0), T::lit(3.0), T::lit(4.0));
    let f1 = (-four - z + ez * (four - three * z + z2)) / z3;
    let f2 = (two + z + ez * (z - two)) / z3;
    let f3 = (-four - three * z - z2 + ez * (four - z)) / z3;
    (f1, f2, f3)
}

/// `f₁/h, f₂/h, f₃/h` from their Maclaurin series:
/// `Σ (j+1)² z^j/(j+3)!`, `Σ (j+1) z^j/(j+3)!`, `Σ (1−j) z^j/(j+3)!`.
pub fn phi_taylor<T: Real>(z: T) -> (T, T, T) {
    let (mut f1, mut f2, mut f3) = (T::zero(), T::zero(), T::zero());
    // Horner from the top term down; 1/(j+3)! carried as a running product.
    let mut inv_fact = [T::zero(); TAYLOR_TERMS];
    let mut acc = T::one() / T::lit(6.0);
    for (j, slot) in inv_fact.iter_mut().enumerate() {
        *slot = acc;
        acc /= T::from_usize_lossy(j + 4);
    }
    for j in (0..TAYLOR_TERMS).rev() {
        let jp1 = T::from_usize_lossy(j + 1);
        let c = inv_fact[j];
        f1 = f1 * z + jp1 * jp1 * c;
        f2 = f2 * z + jp1 * c;
        f3 = f3 * z + (T::one() - T::from_usize_lossy(j)) * c;
    }
    (f1, f2, f3)
}

/// Per-degree ETDRK4 coefficients for one field and step size `h`.
#[derive(Debug, Clone)]
pub struct Etdrk4Tables<T> {
    h: T,
    modes: Vec<ModeCoeffs<T>>,
    /// Degree of each slot in the coefficient layout, `None` for structural zeros.
    slots: Vec<Option<usize>>,
}

impl<T: Real> Etdrk4Tables<T> {
    pub fn h(&self) -> T {
        self.h
    }

    pub fn degree(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn at(&self, ell: usize) -> &ModeCoeffs<T> {
        &self.modes[ell]
    }

    /// True if some entry has `λ > 0`, i.e. the linear part amplifies.
    pub fn has_growth(&self) -> bool {
        self.modes.iter().any(|m| m.exp_full > T::one())
    }
}

pub fn etdrk4_tables<T: Real>(op: &DiagonalOperator<T>, h: T) -> Result<Etdrk4Tables<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::invalid(format!("time step must be positive, got {h}")));
    }
    let n = op.degree();
    let modes = (0..=n).map(|ell| ModeCoeffs::new(op.entry(ell), h)).collect();
    let layout = SphHarmCoeffs::<T>::zeros(n);
    let cols = layout.cols();
    let slots = (0..layout.rows() * cols)
        .map(|k| layout.degree_at(k / cols, k % cols))
        .collect();
    Ok(Etdrk4Tables { h, modes, slots })
}

/// Nonlinear term `N(U)` of a (possibly multi-field) system, in coefficient space.
pub trait Nonlinearity<T: Real> {
    fn evaluate(&self, state: &[SphHarmCoeffs<T>]) -> Result<Vec<SphHarmCoeffs<T>>>;
}

impl<T: Real, F> Nonlinearity<T> for F
where
    F: Fn(&[SphHarmCoeffs<T>]) -> Result<Vec<SphHarmCoeffs<T>>>,
{
    fn evaluate(&self, state: &[SphHarmCoeffs<T>]) -> Result<Vec<SphHarmCoeffs<T>>> {
        self(state)
    }
}

/// Pseudospectral nonlinearity: synthesize every field, apply a pointwise
/// map `(inputs, outputs)` at each grid node, and analyze the outputs.
pub struct GridNonlinearity<T, P> {
    grid: SphereGrid<T>,
    fields: usize,
    pointwise: P,
}

impl<T: Real, P> GridNonlinearity<T, P>
where
    P: Fn(&[T], &mut [T]) + Sync,
{
    pub fn new(grid: SphereGrid<T>, fields: usize, pointwise: P) -> Self {
        GridNonlinearity { grid, fields, pointwise }
    }

    pub fn grid(&self) -> &SphereGrid<T> {
        &self.grid
    }
}

impl<T: Real, P> Nonlinearity<T> for GridNonlinearity<T, P>
where
    P: Fn(&[T], &mut [T]) + Sync,
{
    fn evaluate(&self, state: &[SphHarmCoeffs<T>]) -> Result<Vec<SphHarmCoeffs<T>>> {
        if state.len() != self.fields {
            return Err(Error::invalid(format!(
                "expected {} fields, got {}",
                self.fields,
                state.len()
            )));
        }
        let values = state
            .iter()
            .map(|u| synthesis(u, &self.grid))
            .collect::<Result<Vec<_>>>()?;
        let points = self.grid.nlat() * self.grid.nlon();
        let k = self.fields;
        let mut out: Vec<T> = vec![T::zero(); points * k];
        out.par_chunks_mut(k)
            .enumerate()
            .for_each_init(
                || vec![T::zero(); k],
                |input, (p, o)| {
                    for (slot, v) in input.iter_mut().zip(&values) {
                        *slot = v.as_slice()[p];
                    }
                    (self.pointwise)(input, o);
                },
            );
        (0..k)
            .map(|f| {
                let data = out.iter().skip(f).step_by(k).copied().collect();
                let g = GridValues::from_data(self.grid.nlat(), self.grid.nlon(), data)?;
                analysis(&g, &self.grid)
            })
            .collect()
    }
}

fn combine<T: Real>(
    tables: &[Etdrk4Tables<T>],
    template: &[SphHarmCoeffs<T>],
    f: impl Fn(usize, usize, &ModeCoeffs<T>) -> T,
) -> Vec<SphHarmCoeffs<T>> {
    tables
        .iter()
        .zip(template)
        .enumerate()
        .map(|(field, (tab, u))| {
            let mut out = SphHarmCoeffs::zeros(u.degree());
            for (k, (slot, ell)) in out.as_mut_slice().iter_mut().zip(&tab.slots).enumerate() {
                if let Some(ell) = *ell {
                    *slot = f(field, k, &tab.modes[ell]);
                }
            }
            out
        })
        .collect()
}

fn check_shapes<T: Real>(state: &[SphHarmCoeffs<T>], tables: &[Etdrk4Tables<T>]) -> Result<()> {
    if state.len() != tables.len() || state.is_empty() {
        return Err(Error::invalid(format!(
            "{} fields but {} coefficient tables",
            state.len(),
            tables.len()
        )));
    }
    for (u, t) in state.iter().zip(tables) {
        if u.degree() != t.degree() {
            return Err(Error::DegreeMismatch {
                expected: t.degree(),
                found: u.degree(),
            });
        }
    }
    Ok(())
}

fn check_output<T: Real, N: Nonlinearity<T> + ?Sized>(
    nl: &N,
    state: &[SphHarmCoeffs<T>],
) -> Result<Vec<SphHarmCoeffs<T>>> {
    let out = nl.evaluate(state)?;
    if out.len() != state.len() || out.iter().zip(state).any(|(a, b)| a.degree() != b.degree()) {
        return Err(Error::invalid("nonlinearity returned fields of the wrong shape"));
    }
    Ok(out)
}

/// Advances every field by one step. `step` is the 1-based index used in a
/// [`Error::BlowUp`] report.
pub fn etdrk4_step<T: Real, N: Nonlinearity<T> + ?Sized>(
    state: &[SphHarmCoeffs<T>],
    tables: &[Etdrk4Tables<T>],
    nl: &N,
    step: usize,
) -> Result<Vec<SphHarmCoeffs<T>>> {
    check_shapes(state, tables)?;
    let at = |v: &[SphHarmCoeffs<T>], f: usize, k: usize| v[f].as_slice()[k];

    let nu = check_output(nl, state)?;
    let a = combine(tables, state, |f, k, c| {
        c.exp_half * at(state, f, k) + c.stage * at(&nu, f, k)
    });
    let na = check_output(nl, &a)?;
    let b = combine(tables, state, |f, k, c| {
        c.exp_half * at(state, f, k) + c.stage * at(&na, f, k)
    });
    let nb = check_output(nl, &b)?;
    let two = T::lit(2.0);
    let cst = combine(tables, state, |f, k, c| {
        c.exp_half * at(&a, f, k) + c.stage * (two * at(&nb, f, k) - at(&nu, f, k))
    });
    let nc = check_output(nl, &cst)?;
    let next = combine(tables, state, |f, k, c| {
        c.exp_full * at(state, f, k)
            + c.f1 * at(&nu, f, k)
            + two * c.f2 * (at(&na, f, k) + at(&nb, f, k))
            + c.f3 * at(&nc, f, k)
    });
    if next.iter().any(|u| !u.is_finite()) {
        return Err(Error::BlowUp { step });
    }
    Ok(next)
}

/// Runs `steps` ETDRK4 steps. `observer(step, t, state)` sees the initial
/// state, every `stride`-th step (`stride = 0` disables intermediate calls)
/// and the final state.
pub fn evolve<T, N, O>(
    initial: Vec<SphHarmCoeffs<T>>,
    tables: &[Etdrk4Tables<T>],
    nl: &N,
    steps: usize,
    stride: usize,
    mut observer: O,
) -> Result<Vec<SphHarmCoeffs<T>>>
where
    T: Real,
    N: Nonlinearity<T> + ?Sized,
    O: FnMut(usize, T, &[SphHarmCoeffs<T>]) -> Result<()>,
{
    if steps == 0 {
        return Err(Error::invalid("steps must be at least 1"));
    }
    check_shapes(&initial, tables)?;
    let h = tables[0].h();
    let mut state = initial;
    observer(0, T::zero(), &state)?;
    for step in 1..=steps {
        state = etdrk4_step(&state, tables, nl, step)?;
        let due = stride > 0 && step % stride == 0;
        if due || step == steps {
            observer(step, h * T::from_usize_lossy(step), &state)?;
        }
    }
    Ok(state)
}
