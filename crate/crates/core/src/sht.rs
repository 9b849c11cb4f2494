//! Direct spherical harmonic synthesis and analysis.
//!
//! Coefficients are stored in an `(n+1) × (2n+1)` array: column 0 holds
//! `u_ℓ^0` at row ℓ, and for `m ≥ 1` columns `2m−1` and `2m` hold
//! `u_{m+i}^{−m}` and `u_{m+i}^{m}` at row `i`. Entries with `m + i > n` are
//! structural zeros.
//!
//! The basis is real and orthonormal under `∫ · dΩ`:
//!
//! ```text
//! m = 0:  P̃_ℓ^0(cos θ) / √(2π)
//! m > 0:  u_ℓ^{−m} ↦ P̃_ℓ^m(cos θ) sin(mφ) / √π,   u_ℓ^{m} ↦ P̃_ℓ^m(cos θ) cos(mφ) / √π
//! ```
//!
//! The grid uses Gauss–Legendre colatitudes and `2n+1` equispaced
//! longitudes, which makes analysis exact for band-limited data.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;
use crate::specfun::AssocLegendre;

/// Spherical harmonic coefficients of degree `≤ n` in the interleaved layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SphHarmCoeffs<T> {
    degree: usize,
    data: Vec<T>,
}

impl<T: Real> SphHarmCoeffs<T> {
    pub fn zeros(degree: usize) -> Self {
        SphHarmCoeffs {
            degree,
            data: vec![T::zero(); (degree + 1) * (2 * degree + 1)],
        }
    }

    /// Wraps a row-major `(n+1) × (2n+1)` array; structural zeros must be 0.
    pub fn from_data(degree: usize, data: Vec<T>) -> Result<Self> {
        let (rows, cols) = (degree + 1, 2 * degree + 1);
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: data.len() / cols.max(1),
                cols,
            });
        }
        let c = SphHarmCoeffs { degree, data };
        for row in 0..rows {
            for col in 0..cols {
                if c.degree_at(row, col).is_none() && c.data[row * cols + col] != T::zero() {
                    return Err(Error::invalid(format!(
                        "structural zero at ({row}, {col}) is nonzero"
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rows(&self) -> usize {
        self.degree + 1
    }

    pub fn cols(&self) -> usize {
        2 * self.degree + 1
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Mutable raw access; writes to structural zeros break the layout
    /// invariant and are the caller's responsibility.
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Degree ℓ of the mode stored at `(row, col)`, or `None` for a
    /// structural zero.
    #[inline]
    pub fn degree_at(&self, row: usize, col: usize) -> Option<usize> {
        let m = col.div_ceil(2);
        let ell = row + m;
        (ell <= self.degree && col < self.cols()).then_some(ell)
    }

    /// Flat index of `u_ℓ^m`, if `|m| ≤ ℓ ≤ n`.
    #[inline]
    pub fn index(&self, ell: usize, m: i64) -> Option<usize> {
        let mm = m.unsigned_abs() as usize;
        if mm > ell || ell > self.degree {
            return None;
        }
        let col = match m.signum() {
            0 => 0,
            -1 => 2 * mm - 1,
            _ => 2 * mm,
        };
        Some((ell - mm) * self.cols() + col)
    }

    pub fn get(&self, ell: usize, m: i64) -> T {
        let k = self
            .index(ell, m)
            .unwrap_or_else(|| panic!("mode ({ell}, {m}) outside degree {}", self.degree));
        self.data[k]
    }

    pub fn set(&mut self, ell: usize, m: i64, value: T) {
        let k = self
            .index(ell, m)
            .unwrap_or_else(|| panic!("mode ({ell}, {m}) outside degree {}", self.degree));
        self.data[k] = value;
    }

    /// `(ℓ, m, u_ℓ^m)` in order of increasing ℓ, then m from `−ℓ` to `ℓ`.
    pub fn modes(&self) -> impl Iterator<Item = (usize, i64, T)> + '_ {
        (0..=self.degree).flat_map(move |ell| {
            let l = ell as i64;
            (-l..=l).map(move |m| (ell, m, self.get(ell, m)))
        })
    }

    /// Multiplies every degree-ℓ coefficient by `factor(ℓ)`.
    pub fn scale_by_degree(&mut self, mut factor: impl FnMut(usize) -> T) {
        let factors: Vec<T> = (0..=self.degree).map(&mut factor).collect();
        let cols = self.cols();
        for row in 0..self.rows() {
            for col in 0..cols {
                if let Some(ell) = self.degree_at(row, col) {
                    self.data[row * cols + col] *= factors[ell];
                }
            }
        }
    }

    /// Copy truncated or zero-padded to `degree`.
    pub fn resized(&self, degree: usize) -> Self {
        let mut out = Self::zeros(degree);
        let top = degree.min(self.degree);
        for ell in 0..=top {
            let l = ell as i64;
            for m in -l..=l {
                out.set(ell, m, self.get(ell, m));
            }
        }
        out
    }

    pub fn norm(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `∫ u dΩ = √(4π) · u_0^0`.
    pub fn mean(&self) -> T {
        self.data[0] * (T::lit(4.0) * T::PI()).sqrt()
    }

    /// Writes the `# sht-coeffs v1 degree=<n>` CSV format.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# sht-coeffs v1 degree={}", self.degree)?;
        for row in self.data.chunks(self.cols()) {
            let line: Vec<String> = row.iter().map(|v| format!("{:.16e}", v.to_f64_lossy())).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let degree = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::Parse { line: 0, msg: "missing header".into() });
            };
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parsed = line
                .strip_prefix("# sht-coeffs v1 degree=")
                .and_then(|d| d.trim().parse::<usize>().ok());
            break parsed.ok_or_else(|| Error::Parse {
                line: no + 1,
                msg: format!("expected '# sht-coeffs v1 degree=<n>', found '{line}'"),
            })?;
        };
        let cols = 2 * degree + 1;
        let mut data = Vec::with_capacity((degree + 1) * cols);
        for (no, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<T> = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map(T::lit).map_err(|e| Error::Parse {
                        line: no + 1,
                        msg: format!("bad number '{f}': {e}"),
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("expected {cols} columns, found {}", row.len()),
                });
            }
            data.extend(row);
        }
        Self::from_data(degree, data)
    }
}

/// Relative 2-norm error `‖u − reference‖ / ‖reference‖` over all modes,
/// treating modes missing from either set as zero.
pub fn relative_error<T: Real>(u: &SphHarmCoeffs<T>, reference: &SphHarmCoeffs<T>) -> T {
    let top = u.degree().max(reference.degree());
    let a = u.resized(top);
    let b = reference.resized(top);
    let diff: T = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum();
    diff.sqrt() / b.norm()
}

/// `∫ u dΩ` from the coefficients.
pub fn mean<T: Real>(coeffs: &SphHarmCoeffs<T>) -> T {
    coeffs.mean()
}

/// Values on a [`SphereGrid`], row `i` at colatitude `θ_i`, column `j` at
/// longitude `φ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValues<T> {
    nlat: usize,
    nlon: usize,
    data: Vec<T>,
}

impl<T: Real> GridValues<T> {
    pub fn zeros(nlat: usize, nlon: usize) -> Self {
        GridValues {
            nlat,
            nlon,
            data: vec![T::zero(); nlat * nlon],
        }
    }

    pub fn from_data(nlat: usize, nlon: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != nlat * nlon {
            return Err(Error::ShapeMismatch {
                expected_rows: nlat,
                expected_cols: nlon,
                rows: data.len() / nlon.max(1),
                cols: nlon,
            });
        }
        Ok(GridValues { nlat, nlon, data })
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.nlon + j]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        GridValues {
            nlat: self.nlat,
            nlon: self.nlon,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max(&self) -> T {
        self.data.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Writes `theta,phi,value` rows.
    pub fn write_csv<W: Write>(&self, grid: &SphereGrid<T>, mut out: W) -> Result<()> {
        grid.check_values(self)?;
        writeln!(out, "theta,phi,value")?;
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e}",
                    grid.theta[i].to_f64_lossy(),
                    grid.phi[j].to_f64_lossy(),
                    self.get(i, j).to_f64_lossy()
                )?;
            }
        }
        Ok(())
    }
}

/// Gauss–Legendre × equispaced tensor grid of degree `n`: `n+1`
/// colatitudes (ascending θ) and `2n+1` longitudes `φ_j = 2πj/(2n+1)`.
#[derive(Debug, Clone)]
pub struct SphereGrid<T> {
    degree: usize,
    /// `cos θ_i`.
    pub cos_theta: Vec<T>,
    pub sin_theta: Vec<T>,
    pub theta: Vec<T>,
    /// Gauss–Legendre weights in `cos θ`.
    pub colat_weights: Vec<T>,
    pub phi: Vec<T>,
    cos_mphi: Vec<T>,
    sin_mphi: Vec<T>,
    /// `P̃_m^m(cos θ_i)` at `i * (n+1) + m`.
    diagonal: Vec<T>,
    legendre: AssocLegendre<T>,
}

impl<T: Real> SphereGrid<T> {
    pub fn new(degree: usize) -> Result<Self> {
        let nlat = degree + 1;
        let nlon = 2 * degree + 1;
        let gl = gauss_legendre::<T>(nlat)?;
        let cos_theta: Vec<T> = gl.nodes.iter().rev().copied().collect();
        let colat_weights: Vec<T> = gl.weights.iter().rev().copied().collect();
        let sin_theta: Vec<T> = cos_theta
            .iter()
            .map(|&x| ((T::one() - x) * (T::one() + x)).sqrt())
            .collect();
        let theta = cos_theta
            .iter()
            .zip(&sin_theta)
            .map(|(&c, &s)| s.atan2(c))
            .collect();
        let dphi = T::lit(2.0) * T::PI() / T::from_usize_lossy(nlon);
        let phi: Vec<T> = (0..nlon).map(|j| dphi * T::from_usize_lossy(j)).collect();
        let mut cos_mphi = vec![T::zero(); nlat * nlon];
        let mut sin_mphi = vec![T::zero(); nlat * nlon];
        for m in 0..=degree {
            for j in 0..nlon {
                // reduce mj mod nlon so the angle stays in [0, 2π)
                let a = dphi * T::from_usize_lossy((m * j) % nlon);
                let (s, c) = a.sin_cos();
                cos_mphi[m * nlon + j] = c;
                sin_mphi[m * nlon + j] = s;
            }
        }
        let legendre = AssocLegendre::new(degree);
        let mut diagonal = vec![T::zero(); nlat * nlat];
        for i in 0..nlat {
            let mut d = T::zero();
            for m in 0..=degree {
                d = legendre.next_diagonal(m, d, sin_theta[i]);
                diagonal[i * nlat + m] = d;
            }
        }
        Ok(SphereGrid {
            degree,
            cos_theta,
            sin_theta,
            theta,
            colat_weights,
            phi,
            cos_mphi,
            sin_mphi,
            diagonal,
            legendre,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nlat(&self) -> usize {
        self.degree + 1
    }

    pub fn nlon(&self) -> usize {
        2 * self.degree + 1
    }

    /// Longitude quadrature weight `2π/(2n+1)`.
    pub fn lon_weight(&self) -> T {
        T::lit(2.0) * T::PI() / T::from_usize_lossy(self.nlon())
    }

    /// Cartesian point `(sin θ cos φ, sin θ sin φ, cos θ)` at node `(i, j)`.
    pub fn cartesian(&self, i: usize, j: usize) -> (T, T, T) {
        let (sp, cp) = self.phi[j].sin_cos();
        (self.sin_theta[i] * cp, self.sin_theta[i] * sp, self.cos_theta[i])
    }

    /// Samples `f(x, y, z)` at every node.
    pub fn sample(&self, f: impl Fn(T, T, T) -> T) -> GridValues<T> {
        let (nlat, nlon) = (self.nlat(), self.nlon());
        let mut data = Vec::with_capacity(nlat * nlon);
        for i in 0..nlat {
            for j in 0..nlon {
                let (x, y, z) = self.cartesian(i, j);
                data.push(f(x, y, z));
            }
        }
        GridValues { nlat, nlon, data }
    }

    /// `∫ v dΩ` by Gauss–Legendre × trapezoid quadrature.
    pub fn integrate(&self, values: &GridValues<T>) -> Result<T> {
        self.check_values(values)?;
        let nlon = self.nlon();
        let total: T = (0..self.nlat())
            .map(|i| {
                let row: T = values.data[i * nlon..(i + 1) * nlon].iter().copied().sum();
                row * self.colat_weights[i]
            })
            .sum();
        Ok(total * self.lon_weight())
    }

    fn check_values(&self, values: &GridValues<T>) -> Result<()> {
        if values.nlat != self.nlat() || values.nlon != self.nlon() {
            return Err(Error::ShapeMismatch {
                expected_rows: self.nlat(),
                expected_cols: self.nlon(),
                rows: values.nlat,
                cols: values.nlon,
            });
        }
        Ok(())
    }
}

/// Evaluates the expansion on the grid of the same degree.
pub fn synthesis<T: Real>(coeffs: &SphHarmCoeffs<T>, grid: &SphereGrid<T>) -> Result<GridValues<T>> {
    if coeffs.degree() != grid.degree() {
        return Err(Error::DegreeMismatch {
            expected: grid.degree(),
            found: coeffs.degree(),
        });
    }
    Ok(synthesize(coeffs, grid))
}

/// Evaluates a degree-`n` expansion on a grid of degree `≥ n`.
pub fn synthesis_onto<T: Real>(coeffs: &SphHarmCoeffs<T>, grid: &SphereGrid<T>) -> Result<GridValues<T>> {
    if coeffs.degree() > grid.degree() {
        return Err(Error::DegreeMismatch {
            expected: grid.degree(),
            found: coeffs.degree(),
        });
    }
    Ok(synthesize(coeffs, grid))
}

fn synthesize<T: Real>(coeffs: &SphHarmCoeffs<T>, grid: &SphereGrid<T>) -> GridValues<T> {
    let n = coeffs.degree();
    let nlat = grid.nlat();
    let nlon = grid.nlon();
    let cols = coeffs.cols();
    let u = coeffs.as_slice();
    let zonal = T::one() / (T::lit(2.0) * T::PI()).sqrt();
    let sectoral = T::one() / T::PI().sqrt();

    let mut data = vec![T::zero(); nlat * nlon];
    data.par_chunks_mut(nlon).enumerate().for_each(|(i, row)| {
        let x = grid.cos_theta[i];
        let mut cos_part = vec![T::zero(); n + 1];
        let mut sin_part = vec![T::zero(); n + 1];
        for m in 0..=n {
            let diag = grid.diagonal[i * nlat + m];
            let (mut c, mut s) = (T::zero(), T::zero());
            if m == 0 {
                grid.legendre.for_each_degree(0, n, x, diag, |ell, p| c += u[ell * cols] * p);
            } else {
                grid.legendre.for_each_degree(m, n, x, diag, |ell, p| {
                    let base = (ell - m) * cols + 2 * m;
                    s += u[base - 1] * p;
                    c += u[base] * p;
                });
            }
            cos_part[m] = c;
            sin_part[m] = s;
        }
        let c0 = cos_part[0] * zonal;
        row.iter_mut().for_each(|v| *v = c0);
        for m in 1..=n {
            let (c, s) = (cos_part[m] * sectoral, sin_part[m] * sectoral);
            let cm = &grid.cos_mphi[m * nlon..(m + 1) * nlon];
            let sm = &grid.sin_mphi[m * nlon..(m + 1) * nlon];
            for j in 0..nlon {
                row[j] += c * cm[j] + s * sm[j];
            }
        }
    });
    GridValues { nlat, nlon, data }
}

/// Projects grid values onto the real orthonormal basis; exact for
/// expansions of degree `≤ n` sampled on the degree-`n` grid.
pub fn analysis<T: Real>(values: &GridValues<T>, grid: &SphereGrid<T>) -> Result<SphHarmCoeffs<T>> {
    grid.check_values(values)?;
    let n = grid.degree();
    let nlat = grid.nlat();
    let nlon = grid.nlon();
    let dphi = grid.lon_weight();

    // Fourier sums per colatitude row: [cos_0..cos_n, sin_0..sin_n]
    let mut fourier = vec![T::zero(); nlat * 2 * (n + 1)];
    fourier
        .par_chunks_mut(2 * (n + 1))
        .enumerate()
        .for_each(|(i, out)| {
            let row = &values.data[i * nlon..(i + 1) * nlon];
            let w = grid.colat_weights[i] * dphi;
            for m in 0..=n {
                let cm = &grid.cos_mphi[m * nlon..(m + 1) * nlon];
                let sm = &grid.sin_mphi[m * nlon..(m + 1) * nlon];
                let (mut c, mut s) = (T::zero(), T::zero());
                for j in 0..nlon {
                    c += row[j] * cm[j];
                    s += row[j] * sm[j];
                }
                out[m] = c * w;
                out[n + 1 + m] = s * w;
            }
        });

    let zonal = T::one() / (T::lit(2.0) * T::PI()).sqrt();
    let sectoral = T::one() / T::PI().sqrt();
    let columns: Vec<(Vec<T>, Vec<T>)> = (0..=n)
        .into_par_iter()
        .map(|m| {
            let len = n + 1 - m;
            let mut cos_col = vec![T::zero(); len];
            let mut sin_col = vec![T::zero(); len];
            let norm = if m == 0 { zonal } else { sectoral };
            for i in 0..nlat {
                let f = &fourier[i * 2 * (n + 1)..(i + 1) * 2 * (n + 1)];
                let (fc, fs) = (f[m] * norm, f[n + 1 + m] * norm);
                let diag = grid.diagonal[i * nlat + m];
                grid.legendre.for_each_degree(m, n, grid.cos_theta[i], diag, |ell, p| {
                    cos_col[ell - m] += fc * p;
                    sin_col[ell - m] += fs * p;
                });
            }
            (cos_col, sin_col)
        })
        .collect();

    let mut coeffs = SphHarmCoeffs::zeros(n);
    let cols = coeffs.cols();
    let data = coeffs.as_mut_slice();
    for (m, (cos_col, sin_col)) in columns.into_iter().enumerate() {
        for (row, (c, s)) in cos_col.into_iter().zip(sin_col).enumerate() {
            if m == 0 {
                data[row * cols] = c;
            } else {
                data[row * cols + 2 * m - 1] = s;
                data[row * cols + 2 * m] = c;
            }
        }
    }
    Ok(coeffs)
}
