//! Hermitian matrices and Laplacians for digraphs.
//!
//! Every construction here is elementwise in the pair `(a_uv, a_vu)`, so the
//! dense builders, the sparse propagation builder and the inverse map all
//! share the same entry functions.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dense::{abs_degree, DenseComplex, DenseHermitian};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::sparse::SparseComplex;
use crate::Complex64;

/// Which Hermitian matrix stands in for the adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Construction {
    /// `H = A`; defined only for symmetric adjacency.
    Standard,
    /// `H = A_s + i A_a`.
    Haar,
    /// `H = A_s ⊙ exp(i 2πq (A − Aᵀ))`.
    Magnetic { q: f64 },
    /// `H = A_s ⊙ (1 − sgn|A − Aᵀ| + i sgn(|A| − |Aᵀ|))`.
    SignMagnetic,
}

/// A Laplacian family plus the choice of raw `D − H` or normalized
/// `I − D^{-1/2} H D^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplacianKind {
    pub construction: Construction,
    pub normalized: bool,
}

impl LaplacianKind {
    pub fn raw(construction: Construction) -> Self {
        LaplacianKind {
            construction,
            normalized: false,
        }
    }

    pub fn normalized(construction: Construction) -> Self {
        LaplacianKind {
            construction,
            normalized: true,
        }
    }
}

impl Construction {
    pub fn magnetic(q: f64) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "magnetic charge q must be finite and nonnegative, got {q}"
            )));
        }
        Ok(Construction::Magnetic { q })
    }

    /// Entry `h_uv` from the pair `(a_uv, a_vu)` (off-diagonal positions).
    pub fn entry(&self, a_uv: f64, a_vu: f64) -> Complex64 {
        match *self {
            Construction::Standard => Complex64::new(a_uv, 0.0),
            Construction::Haar => haar_entry(a_uv, a_vu),
            Construction::Magnetic { q } => magnetic_entry(a_uv, a_vu, q),
            Construction::SignMagnetic => sign_magnetic_entry(a_uv, a_vu),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Standard => write!(f, "standard"),
            Construction::Haar => write!(f, "haar"),
            Construction::Magnetic { q } => write!(f, "magnetic:{q}"),
            Construction::SignMagnetic => write!(f, "signmagnetic"),
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    /// Accepts `standard`, `haar`, `signmagnetic` (or `sign-magnetic`) and
    /// `magnetic:<q>`; bare `magnetic` means `q = 0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let no_arg = |c: Construction| match arg {
            None => Ok(c),
            Some(_) => Err(Error::InvalidParameter(format!(
                "construction {name} takes no parameter"
            ))),
        };
        match name {
            "standard" => no_arg(Construction::Standard),
            "haar" => no_arg(Construction::Haar),
            "signmagnetic" | "sign-magnetic" | "sign_magnetic" => no_arg(Construction::SignMagnetic),
            "magnetic" => {
                let q = match arg {
                    None => 0.25,
                    Some(a) => a.parse::<f64>().map_err(|_| {
                        Error::InvalidParameter(format!("bad magnetic charge {a:?}"))
                    })?,
                };
                Construction::magnetic(q)
            }
            _ => Err(Error::InvalidParameter(format!(
                "unknown Laplacian kind {s:?} (expected haar, magnetic[:q], signmagnetic, standard)"
            ))),
        }
    }
}

impl TryFrom<String> for Construction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Construction> for String {
    fn from(c: Construction) -> String {
        c.to_string()
    }
}

/// Sign function with `sgn(0) = 0` and no tolerance band.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `exp(2πi·t)`, exact at quarter turns.
pub fn cis_turns(t: f64) -> Complex64 {
    let f = t - t.round();
    let quarters = 4.0 * f;
    if quarters == quarters.round() {
        return match quarters as i64 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            -1 => Complex64::new(0.0, -1.0),
            _ => Complex64::new(-1.0, 0.0),
        };
    }
    let (s, c) = (TAU * f).sin_cos();
    Complex64::new(c, s)
}

#[inline]
pub fn haar_entry(a_uv: f64, a_vu: f64) -> Complex64 {
    Complex64::new(0.5 * (a_uv + a_vu), 0.5 * (a_uv - a_vu))
}

#[inline]
pub fn magnetic_entry(a_uv: f64, a_vu: f64, q: f64) -> Complex64 {
    0.5 * (a_uv + a_vu) * cis_turns(q * (a_uv - a_vu))
}

#[inline]
pub fn sign_magnetic_entry(a_uv: f64, a_vu: f64) -> Complex64 {
    let factor = Complex64::new(
        1.0 - sgn((a_uv - a_vu).abs()),
        sgn(a_uv.abs() - a_vu.abs()),
    );
    0.5 * (a_uv + a_vu) * factor
}

fn require_adjacency(a: &DenseComplex) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_real() {
        return Err(Error::InvalidParameter(
            "adjacency must be real-valued".into(),
        ));
    }
    if let Some(u) = (0..a.rows()).find(|&u| a.get(u, u).re != 0.0) {
        return Err(Error::NonzeroDiagonal(u));
    }
    Ok(())
}

fn elementwise(a: &DenseComplex, f: impl Fn(f64, f64) -> Complex64) -> Result<DenseHermitian> {
    require_adjacency(a)?;
    Ok(DenseHermitian::from_upper(a.rows(), |u, v| {
        if u == v {
            Complex64::new(0.0, 0.0)
        } else {
            f(a.get(u, v).re, a.get(v, u).re)
        }
    }))
}

/// `H_h = A_s + i A_a`.
pub fn haar_hermitian(a: &DenseComplex) -> Result<DenseHermitian> {
    elementwise(a, haar_entry)
}

/// Recovers `A = Re(H) + Im(H)` from a Haar-Hermitian matrix.
pub fn haar_inverse(h: &DenseComplex) -> Result<DenseComplex> {
    let h = DenseHermitian::new(h.clone())?;
    let n = h.n();
    if let Some(u) = (0..n).find(|&u| h.get(u, u) != Complex64::new(0.0, 0.0)) {
        return Err(Error::NonzeroDiagonal(u));
    }
    Ok(DenseComplex::from_fn(n, n, |u, v| {
        let z = h.get(u, v);
        Complex64::new(z.re + z.im, 0.0)
    }))
}

/// `H = A_s ⊙ exp(iΘ)`, `θ_uv = 2πq (a_uv − a_vu)`.
///
/// Logs a warning when `q · max|a_uv − a_vu| > 1/2`, where the phase wraps
/// past ±π and direction can no longer be read from it.
pub fn magnetic_hermitian(a: &DenseComplex, q: f64) -> Result<DenseHermitian> {
    Construction::magnetic(q)?;
    require_adjacency(a)?;
    let n = a.rows();
    let mut max_diff: f64 = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            max_diff = max_diff.max((a.get(u, v).re - a.get(v, u).re).abs());
        }
    }
    warn_phase_wrap(q, max_diff);
    elementwise(a, |x, y| magnetic_entry(x, y, q))
}

fn warn_phase_wrap(q: f64, max_diff: f64) {
    if q * max_diff > 0.5 {
        log::warn!(
            "magnetic phase may wrap: q * max|a_uv - a_vu| = {} > 1/2",
            q * max_diff
        );
    }
}

/// `H = A_s ⊙ (1·1ᵀ − sgn(|A − Aᵀ|) + i·sgn(|A| − |Aᵀ|))`.
pub fn sign_magnetic_hermitian(a: &DenseComplex) -> Result<DenseHermitian> {
    elementwise(a, sign_magnetic_entry)
}

/// The Hermitian stand-in for the adjacency of `g` under `construction`.
pub fn hermitian_matrix(g: &DirectedGraph, construction: Construction) -> Result<DenseHermitian> {
    let a = g.adjacency();
    match construction {
        Construction::Standard => {
            require_symmetric(g)?;
            DenseHermitian::new(a)
        }
        Construction::Haar => haar_hermitian(&a),
        Construction::Magnetic { q } => magnetic_hermitian(&a, q),
        Construction::SignMagnetic => sign_magnetic_hermitian(&a),
    }
}

fn require_symmetric(g: &DirectedGraph) -> Result<()> {
    let pairs = pair_weights(g);
    for (&(u, v), &(uv, vu)) in &pairs {
        if uv != vu {
            return Err(Error::NotSymmetric(u, v));
        }
    }
    Ok(())
}

/// `L = D − H` with `D = diag(|H|·1)`, or `I − D^{-1/2} H D^{-1/2}`.
pub fn laplacian(g: &DirectedGraph, kind: LaplacianKind) -> Result<DenseHermitian> {
    let h = hermitian_matrix(g, kind.construction)?;
    laplacian_from_hermitian(&h, kind.normalized)
}

pub fn laplacian_from_hermitian(h: &DenseHermitian, normalized: bool) -> Result<DenseHermitian> {
    let n = h.n();
    let d = abs_degree(h.as_dense())?;
    let out = if normalized {
        let inv_sqrt = inverse_sqrt_degrees(&d)?;
        DenseHermitian::from_upper(n, |u, v| {
            let scaled = inv_sqrt[u] * h.get(u, v) * inv_sqrt[v];
            if u == v {
                Complex64::new(1.0, 0.0) - scaled
            } else {
                -scaled
            }
        })
    } else {
        DenseHermitian::from_upper(n, |u, v| {
            if u == v {
                Complex64::new(d[u], 0.0) - h.get(u, u)
            } else {
                -h.get(u, v)
            }
        })
    };
    #[cfg(debug_assertions)]
    {
        let (dev, _, _) = out.as_dense().hermitian_deviation();
        debug_assert!(dev <= 1e-12 * out.as_dense().max_abs().max(1.0));
    }
    Ok(out)
}

/// `1/√d_u`, failing on the first zero degree.
pub(crate) fn inverse_sqrt_degrees(d: &[f64]) -> Result<Vec<f64>> {
    d.iter()
        .enumerate()
        .map(|(u, &du)| {
            if du > 0.0 {
                Ok(1.0 / du.sqrt())
            } else {
                Err(Error::ZeroDegree(u))
            }
        })
        .collect()
}

/// Unordered node pairs `(lo, hi)` with `(a_lo,hi, a_hi,lo)`.
pub(crate) fn pair_weights(g: &DirectedGraph) -> BTreeMap<(usize, usize), (f64, f64)> {
    let mut pairs: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for e in g.edges() {
        let (lo, hi) = (e.u.min(e.v), e.u.max(e.v));
        let slot = pairs.entry((lo, hi)).or_insert((0.0, 0.0));
        if e.u == lo {
            slot.0 = e.w;
        } else {
            slot.1 = e.w;
        }
    }
    pairs
}

/// Sparse Hermitian matrix built from `A_s + self_loop·I` and unchanged
/// `A_a`, i.e. every diagonal entry equals `self_loop`.
pub fn hermitian_sparse(
    g: &DirectedGraph,
    construction: Construction,
    self_loop: f64,
) -> Result<SparseComplex> {
    let pairs = pair_weights(g);
    match construction {
        Construction::Standard => require_symmetric(g)?,
        Construction::Magnetic { q } => {
            Construction::magnetic(q)?;
            let max_diff = pairs.values().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            warn_phase_wrap(q, max_diff);
        }
        _ => {}
    }
    let mut triplets = Vec::with_capacity(2 * pairs.len() + g.n());
    for u in 0..g.n() {
        triplets.push((u, u, Complex64::new(self_loop, 0.0)));
    }
    for (&(lo, hi), &(a, b)) in &pairs {
        let z = construction.entry(a, b);
        triplets.push((lo, hi, z));
        triplets.push((hi, lo, z.conj()));
    }
    SparseComplex::from_triplets(g.n(), g.n(), triplets)
}
