//! Dense complex matrices and the symmetric/skew-symmetric split.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Absolute tolerance, relative to `max(1, max |m_ij|)`, for accepting a
/// matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseComplex {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseComplex {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseComplex {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseComplex { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseComplex { rows, cols, data })
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.data[r * self.cols + c] = z;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn conjugate_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseComplex {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        DenseComplex {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matvec {}x{} by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij - b_ij|`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Worst violation of `m[r][c] = conj(m[c][r])`, with its position.
    pub fn hermitian_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        worst
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    fn require_real(&self) -> Result<()> {
        if !self.is_real() {
            return Err(Error::InvalidParameter(
                "expected a real-valued matrix".into(),
            ));
        }
        Ok(())
    }
}

impl Add for &DenseComplex {
    type Output = DenseComplex;
    fn add(self, rhs: &DenseComplex) -> DenseComplex {
        self.try_add(rhs).expect("matrix add: shape mismatch")
    }
}

impl Sub for &DenseComplex {
    type Output = DenseComplex;
    fn sub(self, rhs: &DenseComplex) -> DenseComplex {
        self.try_sub(rhs).expect("matrix sub: shape mismatch")
    }
}

impl Mul for &DenseComplex {
    type Output = DenseComplex;
    fn mul(self, rhs: &DenseComplex) -> DenseComplex {
        self.matmul(rhs).expect("matmul: shape mismatch")
    }
}

/// `A_s = (A + Aᵀ)/2` for a real square `A`.
pub fn symmetrize(a: &DenseComplex) -> Result<DenseComplex> {
    a.require_square()?;
    a.require_real()?;
    Ok(DenseComplex::from_fn(a.rows, a.cols, |r, c| {
        Complex64::new(0.5 * (a.get(r, c).re + a.get(c, r).re), 0.0)
    }))
}

/// `A_a = (A − Aᵀ)/2` for a real square `A`.
pub fn skew_symmetrize(a: &DenseComplex) -> Result<DenseComplex> {
    a.require_square()?;
    a.require_real()?;
    Ok(DenseComplex::from_fn(a.rows, a.cols, |r, c| {
        Complex64::new(0.5 * (a.get(r, c).re - a.get(c, r).re), 0.0)
    }))
}

/// Row sums of entry moduli, `d_u = Σ_v |m_uv|`.
pub fn abs_degree(m: &DenseComplex) -> Result<Vec<f64>> {
    m.require_square()?;
    Ok((0..m.rows)
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum())
        .collect())
}

/// Square complex matrix validated as Hermitian.
///
/// Construction accepts deviations up to [`HERMITIAN_TOL`] and then stores the
/// exact Hermitian part `(M + Mᴴ)/2`, which leaves an already exact input
/// bit-for-bit unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian(DenseComplex);

impl DenseHermitian {
    pub fn new(m: DenseComplex) -> Result<Self> {
        m.require_square()?;
        let scale = m.max_abs().max(1.0);
        let (dev, row, col) = m.hermitian_deviation();
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: dev,
            });
        }
        let n = m.rows;
        let mut h = m;
        for r in 0..n {
            for c in r..n {
                let z = 0.5 * (h.get(r, c) + h.get(c, r).conj());
                h.set(r, c, z);
                h.set(c, r, z.conj());
            }
        }
        Ok(DenseHermitian(h))
    }

    /// Builds from the upper triangle via `f(r, c)` for `r <= c`; the lower
    /// triangle is the conjugate mirror and the diagonal keeps its real part.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = DenseComplex::zeros(n, n);
        for r in 0..n {
            m.set(r, r, Complex64::new(f(r, r).re, 0.0));
            for c in r + 1..n {
                let z = f(r, c);
                m.set(r, c, z);
                m.set(c, r, z.conj());
            }
        }
        DenseHermitian(m)
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn as_dense(&self) -> &DenseComplex {
        &self.0
    }

    pub fn into_dense(self) -> DenseComplex {
        self.0
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0.get(r, c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        DenseHermitian(self.0.scale_real(c))
    }
}

impl AsRef<DenseComplex> for DenseHermitian {
    fn as_ref(&self) -> &DenseComplex {
        &self.0
    }
}
