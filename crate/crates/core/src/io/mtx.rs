//! Matrix Market coordinate files with complex entries.

use std::path::Path;

use super::{fmt_f64, parse_f64, read_text, write_text};
use crate::dense::{DenseComplex, DenseHermitian};
use crate::error::{Error, Result};
use crate::sparse::SparseComplex;
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtxSymmetry {
    General,
    /// Only the lower triangle (with diagonal) is stored.
    Hermitian,
}

/// Writes `m` in coordinate form, skipping exact zeros. With
/// [`MtxSymmetry::Hermitian`] only entries with `row >= col` are written;
/// the caller vouches that `m` is Hermitian.
pub fn write_mtx(path: impl AsRef<Path>, m: &SparseComplex, symmetry: MtxSymmetry) -> Result<()> {
    let entries: Vec<(usize, usize, Complex64)> = m
        .iter()
        .filter(|&(r, c, _)| symmetry == MtxSymmetry::General || r >= c)
        .collect();
    let kind = match symmetry {
        MtxSymmetry::General => "general",
        MtxSymmetry::Hermitian => "hermitian",
    };
    let mut out = format!(
        "%%MatrixMarket matrix coordinate complex {kind}\n{} {} {}\n",
        m.rows(),
        m.cols(),
        entries.len()
    );
    for (r, c, z) in entries {
        out.push_str(&format!("{} {} {} {}\n", r + 1, c + 1, fmt_f64(z.re), fmt_f64(z.im)));
    }
    write_text(path.as_ref(), &out)
}

pub fn write_mtx_dense(path: impl AsRef<Path>, m: &DenseComplex) -> Result<()> {
    write_mtx(path, &SparseComplex::from_dense(m), MtxSymmetry::General)
}

impl DenseHermitian {
    pub fn write_mtx(&self, path: impl AsRef<Path>) -> Result<()> {
        write_mtx(path, &SparseComplex::from_dense(self.as_dense()), MtxSymmetry::Hermitian)
    }
}

/// Reads a coordinate file with `real`, `integer` or `complex` field and
/// `general`, `symmetric` or `hermitian` symmetry. Stored triangles are
/// mirrored, so the result is always the full matrix.
pub fn read_mtx(path: impl AsRef<Path>) -> Result<(SparseComplex, MtxSymmetry)> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "empty file"))?
        .1
        .to_ascii_lowercase();
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::parse(path, 1, "expected a Matrix Market coordinate header"));
    }
    let complex = match tokens[3] {
        "complex" => true,
        "real" | "integer" => false,
        other => return Err(Error::parse(path, 1, format!("unsupported field {other}"))),
    };
    let (symmetry, mirror_conj) = match tokens[4] {
        "general" => (MtxSymmetry::General, None),
        "hermitian" => (MtxSymmetry::Hermitian, Some(true)),
        "symmetric" => (MtxSymmetry::General, Some(false)),
        other => return Err(Error::parse(path, 1, format!("unsupported symmetry {other}"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    let mut count = 0;
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let Some((rows, cols, _)) = size else {
            if f.len() != 3 {
                return Err(Error::parse(path, lineno, "expected 'rows cols nnz'"));
            }
            let p = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(path, lineno, format!("bad size field {s:?}")))
            };
            size = Some((p(f[0])?, p(f[1])?, p(f[2])?));
            continue;
        };
        let want = if complex { 4 } else { 3 };
        if f.len() != want {
            return Err(Error::parse(path, lineno, format!("expected {want} fields")));
        }
        let idx = |s: &str, bound: usize| match s.parse::<usize>() {
            Ok(k) if k >= 1 && k <= bound => Ok(k - 1),
            _ => Err(Error::parse(path, lineno, format!("index {s:?} outside 1..={bound}"))),
        };
        let (r, c) = (idx(f[0], rows)?, idx(f[1], cols)?);
        let z = Complex64::new(
            parse_f64(path, lineno, f[2])?,
            if complex { parse_f64(path, lineno, f[3])? } else { 0.0 },
        );
        triplets.push((r, c, z));
        if let Some(conj) = mirror_conj {
            if r != c {
                triplets.push((c, r, if conj { z.conj() } else { z }));
            }
        }
        count += 1;
    }
    let (rows, cols, nnz) = size.ok_or_else(|| Error::parse(path, 2, "missing size line"))?;
    if count != nnz {
        return Err(Error::parse(
            path,
            0,
            format!("header announces {nnz} entries, found {count}"),
        ));
    }
    Ok((SparseComplex::from_triplets(rows, cols, triplets)?, symmetry))
}
