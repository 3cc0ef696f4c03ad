//! Compressed sparse row complex matrices.

use crate::dense::DenseComplex;
use crate::error::{Error, Result};
use crate::Complex64;

/// Sparse complex matrix in CSR layout.
///
/// Triplets are sorted by (row, col), duplicates are summed and exact zeros
/// are dropped at construction, so every stored position is unique and
/// nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseComplex {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseComplex {
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::DimensionMismatch(format!(
                "triplet ({r},{c}) outside {rows}x{cols}"
            )));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(triplets.len());
        for (r, c, z) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += z,
                _ => merged.push((r, c, z)),
            }
        }
        merged.retain(|t| t.2 != Complex64::new(0.0, 0.0));

        let mut row_ptr = vec![0; rows + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let (col_idx, values) = merged.into_iter().map(|(_, c, z)| (c, z)).unzip();
        Ok(SparseComplex {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(m: &DenseComplex) -> Self {
        let mut triplets = Vec::new();
        for r in 0..m.rows() {
            for (c, &z) in m.row(r).iter().enumerate() {
                if z != Complex64::new(0.0, 0.0) {
                    triplets.push((r, c, z));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), triplets).expect("indices come from the matrix")
    }

    pub fn to_dense(&self) -> DenseComplex {
        let mut m = DenseComplex::zeros(self.rows, self.cols);
        for (r, c, z) in self.iter() {
            m.set(r, c, z);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries in (row, col) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        match span.binary_search(&c) {
            Ok(k) => self.values[self.row_ptr[r] + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "sparse matvec {}x{} by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row_entries(r).map(|(c, z)| z * x[c]).sum())
            .collect())
    }

    /// `Y = M · X` for a row-major `X` with `width` columns, real and
    /// imaginary parts stored separately. Summation order is fixed by the
    /// CSR layout.
    pub fn matmul_split(
        &self,
        x_re: &[f64],
        x_im: &[f64],
        width: usize,
        y_re: &mut [f64],
        y_im: &mut [f64],
    ) {
        debug_assert_eq!(x_re.len(), self.cols * width);
        debug_assert_eq!(y_re.len(), self.rows * width);
        y_re.iter_mut().for_each(|v| *v = 0.0);
        y_im.iter_mut().for_each(|v| *v = 0.0);
        for r in 0..self.rows {
            let yr = &mut y_re[r * width..(r + 1) * width];
            let yi = &mut y_im[r * width..(r + 1) * width];
            for (c, z) in self.row_entries(r) {
                let xr = &x_re[c * width..(c + 1) * width];
                let xi = &x_im[c * width..(c + 1) * width];
                for j in 0..width {
                    yr[j] += z.re * xr[j] - z.im * xi[j];
                    yi[j] += z.re * xi[j] + z.im * xr[j];
                }
            }
        }
    }

    pub fn conjugate_transpose(&self) -> Self {
        let triplets = self.iter().map(|(r, c, z)| (c, r, z.conj())).collect();
        Self::from_triplets(self.cols, self.rows, triplets).expect("transposed indices in range")
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let triplets = self.iter().map(|(r, k, z)| (r, k, z * c)).collect();
        Self::from_triplets(self.rows, self.cols, triplets).expect("same indices")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let triplets = self.iter().chain(other.iter()).collect();
        Self::from_triplets(self.rows, self.cols, triplets)
    }

    /// Largest `|m_rc − conj(m_cr)|` over stored entries.
    pub fn hermitian_deviation(&self) -> f64 {
        self.iter()
            .map(|(r, c, z)| (z - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }
}
