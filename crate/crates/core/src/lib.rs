//! Hermitian Laplacians for directed graphs.
//!
//! The crate builds four Laplacian families from a weighted digraph:
//!
//! | construction | Hermitian matrix `H` |
//! |--------------|----------------------|
//! | standard     | `A` (symmetric input only) |
//! | Haar         | `A_s + i A_a` |
//! | magnetic     | `A_s ⊙ exp(i 2πq (A − Aᵀ))` |
//! | sign-magnetic| `A_s ⊙ (1 − sgn|A − Aᵀ| + i sgn(|A| − |Aᵀ|))` |
//!
//! with `A_s = (A + Aᵀ)/2`, `A_a = (A − Aᵀ)/2`, the Laplacian `L = D − H` and the
//! normalized form `I − D^{-1/2} H D^{-1/2}`, where `D` holds the row sums of `|H|`.
//!
//! On top of that sit a dense Hermitian eigensolver and the graph Fourier
//! transform ([`spectral`]), test-graph generators ([`generators`]), low-pass
//! denoising experiments ([`denoise`]), a spectral graph convolutional network
//! for link prediction ([`learn`]) and file formats ([`io`]).

pub mod dense;
pub mod denoise;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod learn;
pub mod rng;
pub mod sparse;
pub mod spectral;

pub use num_complex::Complex64;

pub use dense::{DenseComplex, DenseHermitian};
pub use error::{Error, Result};
pub use graph::{DirectedGraph, Edge};
pub use laplacian::{Construction, LaplacianKind};
pub use sparse::SparseComplex;
pub use spectral::Spectrum;

/// Real graph signal, one value per node.
pub type RealSignal = Vec<f64>;
/// Complex graph signal, one value per node.
pub type ComplexSignal = Vec<Complex64>;
