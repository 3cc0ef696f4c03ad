//! Complex Householder reduction to real tridiagonal form followed by the
//! implicit QL iteration.

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};
use crate::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues (unsorted) and row-major eigenvector matrix (column `k`
/// belongs to eigenvalue `k`).
pub(crate) fn eig(h: &DenseHermitian) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let n = h.n();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    let mut a: Vec<Complex64> = h.as_dense().data().to_vec();
    let mut q = identity(n);

    // Householder: A ← H A H with H = I − τ v vᴴ zeroing column k below k+1.
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let sigma = (k + 1..n).map(|r| a[r * n + k].norm_sqr()).sum::<f64>().sqrt();
        let tail = (k + 2..n).map(|r| a[r * n + k].norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * sigma;
        for (i, r) in (k + 1..n).enumerate() {
            v[i] = a[r * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // p = τ A v over the trailing block
        for (i, r) in (k + 1..n).enumerate() {
            let row = &a[r * n + k + 1..r * n + n];
            p[i] = tau * row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum::<Complex64>();
        }
        // w = p − (τ/2)(vᴴp) v
        let vhp: Complex64 = v[..m].iter().zip(&p[..m]).map(|(x, y)| x.conj() * y).sum();
        let coef = 0.5 * tau * vhp;
        for i in 0..m {
            p[i] -= coef * v[i];
        }
        // A ← A − v wᴴ − w vᴴ on the trailing block
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for j in 0..m {
                row[j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for r in k + 2..n {
            a[r * n + k] = ZERO;
            a[k * n + r] = ZERO;
        }
        // Q ← Q H
        for r in 0..n {
            let row = &mut q[r * n + k + 1..r * n + n];
            let s: Complex64 = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
            let s = tau * s;
            for j in 0..m {
                row[j] -= s * v[j].conj();
            }
        }
    }

    // Diagonal phase D makes the off-diagonal real and nonnegative.
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for i in 0..n {
        diag[i] = a[i * n + i].re;
        if i + 1 < n {
            let e = a[(i + 1) * n + i];
            off[i] = e.norm();
            phases[i + 1] = if off[i] > 0.0 {
                phases[i] * (e / off[i])
            } else {
                phases[i]
            };
        }
    }

    // zt[i*n + k] = Z[k][i]: row i of zt is eigenvector i of the tridiagonal.
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql2(&mut diag, &mut off, &mut zt, n)?;

    // U = Q · D · Z
    for r in 0..n {
        for c in 0..n {
            q[r * n + c] *= phases[c];
        }
    }
    let mut u = vec![ZERO; n * n];
    for r in 0..n {
        let qrow = &q[r * n..(r + 1) * n];
        let urow = &mut u[r * n..(r + 1) * n];
        for (j, uj) in urow.iter_mut().enumerate() {
            let z = &zt[j * n..(j + 1) * n];
            let mut re = 0.0;
            let mut im = 0.0;
            for (qk, zk) in qrow.iter().zip(z) {
                re += qk.re * zk;
                im += qk.im * zk;
            }
            *uj = Complex64::new(re, im);
        }
    }
    Ok((diag, u))
}

fn identity(n: usize) -> Vec<Complex64> {
    let mut m = vec![ZERO; n * n];
    for i in 0..n {
        m[i * n + i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Implicit QL on the symmetric tridiagonal (`d` diagonal, `e[i]` coupling
/// `i` and `i+1`). On exit `d` holds eigenvalues and row `i` of `zt` the
/// matching eigenvector.
fn tql2(d: &mut [f64], e: &mut [f64], zt: &mut [f64], n: usize) -> Result<()> {
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let max_iter = 60 * n.max(1);
    let mut iterations = 0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::NoConvergence(max_iter));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = zt.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
