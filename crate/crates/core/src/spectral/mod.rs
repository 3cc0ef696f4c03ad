//! Hermitian eigendecomposition and the graph Fourier transform.
//!
//! `L = U Λ Uᴴ` with eigenvalues ascending; the columns of `U` are the
//! Fourier modes, lower eigenvalues being lower graph frequencies. The
//! forward transform is `x̂ = Uᴴ x` and the inverse `x = U x̂`.

mod jacobi;
mod tridiag;

use crate::dense::{DenseComplex, DenseHermitian};
use crate::error::{Error, Result};
use crate::Complex64;

/// Largest dimension accepted by the dense eigensolvers.
pub const MAX_DENSE_DIM: usize = 3000;

/// Relative eigenvalue gap below which eigenvectors are treated as one
/// invariant subspace and re-orthonormalized together.
pub const CLUSTER_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    /// Householder tridiagonalization + implicit QL. O(n³), the default.
    #[default]
    HouseholderQl,
    /// Cyclic Jacobi on the doubled real embedding. Slower; used as an
    /// independent cross-check.
    Jacobi,
}

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors
/// (column `k` pairs with `eigenvalues[k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: DenseComplex,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `max_ij |(UᴴU − I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self
            .vectors
            .conjugate_transpose()
            .matmul(&self.vectors)
            .expect("square");
        gram.max_abs_diff(&DenseComplex::identity(self.n()))
    }

    /// Largest per-column residual `‖L u_k − λ_k u_k‖₂`.
    pub fn max_residual(&self, l: &DenseHermitian) -> f64 {
        let lu = l.as_dense().matmul(&self.vectors).expect("dims match");
        (0..self.n())
            .map(|k| {
                (0..self.n())
                    .map(|r| (lu.get(r, k) - self.eigenvalues[k] * self.vectors.get(r, k)).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Per mode `k` (rows) and node `ℓ` (columns): `sign(Re u_ℓk)·|u_ℓk|`,
    /// with `sign(0) = 0`.
    pub fn heatmap(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|k| {
                (0..self.n())
                    .map(|l| {
                        let z = self.vectors.get(l, k);
                        crate::laplacian::sgn(z.re) * z.norm()
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn hermitian_eig(h: &DenseHermitian) -> Result<Spectrum> {
    hermitian_eig_with(h, EigenMethod::default())
}

pub fn hermitian_eig_with(h: &DenseHermitian, method: EigenMethod) -> Result<Spectrum> {
    let n = h.n();
    if n > MAX_DENSE_DIM {
        return Err(Error::TooLarge {
            n,
            cap: MAX_DENSE_DIM,
        });
    }
    let (values, u) = match method {
        EigenMethod::HouseholderQl => tridiag::eig(h)?,
        EigenMethod::Jacobi => jacobi::eig(h)?,
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut columns: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| (0..n).map(|r| u[r * n + k]).collect())
        .collect();

    let tol = CLUSTER_GAP * h.as_dense().frobenius_norm();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            orthonormalize(&mut columns[start..end]);
        }
        start = end;
    }
    for col in &mut columns {
        fix_phase(col);
    }

    let vectors = DenseComplex::from_fn(n, n, |r, k| columns[k][r]);
    Ok(Spectrum {
        eigenvalues,
        vectors,
    })
}

fn orthonormalize(cols: &mut [Vec<Complex64>]) {
    for k in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(k);
        let v = &mut rest[0];
        for b in done.iter() {
            let proj: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
    }
}

/// Rotates `v` so its largest-modulus entry (lowest index on ties) is real
/// and positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best = i;
            best_mod = m;
        }
    }
    if best_mod <= 0.0 {
        return;
    }
    let rot = v[best].conj() / best_mod;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(best_mod, 0.0);
}

/// Closed-form eigenvalues `√2 − cos(2πj/n) − sin(2πj/n)`, `j = 0..n`, of
/// the Haar-Laplacian of the directed `n`-cycle, in `j` order.
///
/// Valid for `n ≥ 3`; at `n = 2` the cycle degenerates into a digon whose
/// Laplacian has eigenvalues `{0, 2}` instead.
pub fn cycle_frequencies(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs at least 2 nodes, got {n}"
        )));
    }
    Ok((0..n)
        .map(|j| {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            std::f64::consts::SQRT_2 - phi.cos() - phi.sin()
        })
        .collect())
}

fn require_len(spectrum: &Spectrum, len: usize) -> Result<()> {
    if len != spectrum.n() {
        return Err(Error::DimensionMismatch(format!(
            "signal of length {len} on a graph with {} nodes",
            spectrum.n()
        )));
    }
    Ok(())
}

/// `x̂ = Uᴴ x`.
pub fn gft(spectrum: &Spectrum, x: &[Complex64]) -> Result<Vec<Complex64>> {
    require_len(spectrum, x.len())?;
    let n = spectrum.n();
    let u = &spectrum.vectors;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (r, xr) in x.iter().enumerate() {
        for (k, o) in out.iter_mut().enumerate() {
            *o += u.get(r, k).conj() * xr;
        }
    }
    Ok(out)
}

/// `x̂ = Uᴴ x` for a real signal.
pub fn gft_real(spectrum: &Spectrum, x: &[f64]) -> Result<Vec<Complex64>> {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    gft(spectrum, &xc)
}

/// `x = U x̂`.
pub fn igft(spectrum: &Spectrum, xhat: &[Complex64]) -> Result<Vec<Complex64>> {
    require_len(spectrum, xhat.len())?;
    spectrum.vectors.matvec(xhat)
}

/// Keeps the first `m` (lowest-frequency) coefficients and zeroes the rest.
pub fn truncate_spectrum(xhat: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if m == 0 || m > xhat.len() {
        return Err(Error::InvalidParameter(format!(
            "kept coefficient count {m} outside 1..={}",
            xhat.len()
        )));
    }
    Ok(xhat
        .iter()
        .enumerate()
        .map(|(k, &z)| if k < m { z } else { Complex64::new(0.0, 0.0) })
        .collect())
}
