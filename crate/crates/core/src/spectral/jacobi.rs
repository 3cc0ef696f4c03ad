//! Cyclic Jacobi on the real symmetric embedding `[[Re H, −Im H], [Im H, Re H]]`.
//!
//! Every eigenvalue of `H` appears twice in the embedding. Eigenvectors
//! `[x; y]` map to `x + iy`; inside each doubled cluster a pivoted complex
//! Gram-Schmidt keeps half of the mapped vectors as an orthonormal basis.

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};
use crate::Complex64;

const MAX_SWEEPS: usize = 100;

pub(crate) fn eig(h: &DenseHermitian) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let n = h.n();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h.get(r, c);
            a[r * m + c] = z.re;
            a[(r + n) * m + c + n] = z.re;
            a[r * m + c + n] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    let norm = h.as_dense().frobenius_norm();
    // rows of vt are the eigenvectors of the embedding
    let mut vt = vec![0.0; m * m];
    for i in 0..m {
        vt[i * m + i] = 1.0;
    }
    let target = 1e-12 * norm;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|r| (0..m).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * m + c] * a[r * m + c])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..m - 1 {
            for q in p + 1..m {
                rotate(&mut a, &mut vt, m, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i * m + i].total_cmp(&a[j * m + j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * m + i]).collect();

    let tol = 1e-8 * norm.max(f64::MIN_POSITIVE);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && values[end] - values[end - 1] < tol {
            end += 1;
        }
        let size = end - start;
        if size % 2 != 0 {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        let mut candidates: Vec<Vec<Complex64>> = order[start..end]
            .iter()
            .map(|&i| {
                let row = &vt[i * m..(i + 1) * m];
                (0..n).map(|k| Complex64::new(row[k], row[k + n])).collect()
            })
            .collect();
        let basis = pivoted_gram_schmidt(&mut candidates, size / 2);
        let mean = values[start..end].iter().sum::<f64>() / size as f64;
        for b in basis {
            eigenvalues.push(mean);
            vectors.push(b);
        }
        start = end;
    }

    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, vec) in vectors.iter().enumerate() {
        for r in 0..n {
            u[r * n + k] = vec[r];
        }
    }
    Ok((eigenvalues, u))
}

fn rotate(a: &mut [f64], vt: &mut [f64], m: usize, p: usize, q: usize) {
    let apq = a[p * m + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * m + p];
    let aqq = a[q * m + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..m {
        let akp = a[k * m + p];
        let akq = a[k * m + q];
        a[k * m + p] = c * akp - s * akq;
        a[k * m + q] = s * akp + c * akq;
    }
    for k in 0..m {
        let apk = a[p * m + k];
        let aqk = a[q * m + k];
        a[p * m + k] = c * apk - s * aqk;
        a[q * m + k] = s * apk + c * aqk;
    }
    a[p * m + q] = 0.0;
    a[q * m + p] = 0.0;
    let (lo, hi) = vt.split_at_mut(q * m);
    let vp = &mut lo[p * m..p * m + m];
    let vq = &mut hi[..m];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Picks `k` orthonormal vectors by repeatedly taking the candidate with the
/// largest component orthogonal to the basis built so far.
pub(crate) fn pivoted_gram_schmidt(
    candidates: &mut [Vec<Complex64>],
    k: usize,
) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut used = vec![false; candidates.len()];
    for _ in 0..k {
        let (best, _) = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, c)| (i, c.iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        used[best] = true;
        let norm = candidates[best].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let b: Vec<Complex64> = candidates[best].iter().map(|z| z / norm).collect();
        for (i, c) in candidates.iter_mut().enumerate() {
            if used[i] {
                continue;
            }
            let proj: Complex64 = b.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ci, bi) in c.iter_mut().zip(&b) {
                *ci -= proj * bi;
            }
        }
        basis.push(b);
    }
    basis
}
