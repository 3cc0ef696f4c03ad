use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("duplicate ordered edges: {}", format_pairs(.0))]
    DuplicateEdges(Vec<(usize, usize)>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix has a nonzero diagonal entry at node {0}")]
    NonzeroDiagonal(usize),

    #[error("the standard Laplacian needs a symmetric adjacency; a[{0}][{1}] != a[{1}][{0}]")]
    NotSymmetric(usize, usize),

    #[error("node {0} has zero degree; normalized Laplacian undefined")]
    ZeroDegree(usize),

    #[error("dimension {n} exceeds the dense eigensolver cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical divergence: {0}")]
    Divergence(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// True for failures of the numerics rather than of the input data.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_) | Error::Divergence(_) | Error::ZeroDegree(_)
        )
    }
}

fn format_pairs(pairs: &[(usize, usize)]) -> String {
    let shown: Vec<String> = pairs
        .iter()
        .take(10)
        .map(|(u, v)| format!("({u},{v})"))
        .collect();
    if pairs.len() > 10 {
        format!("{} and {} more", shown.join(", "), pairs.len() - 10)
    } else {
        shown.join(", ")
    }
}
