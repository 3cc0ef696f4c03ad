//! File formats: edge lists in, matrices and experiment tables out (and back).
//!
//! Floats are written as `{:.16e}` (17 significant digits), which round-trips
//! every finite `f64` bit-exactly. All emitters are deterministic.

mod edges;
mod mtx;
mod tables;

pub use edges::{load_edge_list, write_coords, write_edge_list, LoadOptions, LoadedGraph};
pub use mtx::{read_mtx, write_mtx, write_mtx_dense, MtxSymmetry};
pub use tables::{
    read_denoise_csv, read_matrix_csv, read_spectrum_csv, write_denoise_csv, write_heatmap_csv,
    write_matrix, write_matrix_csv, write_metrics_csv, write_spectrum_csv,
};

use std::path::Path;

use crate::error::{Error, Result};

/// Round-trip exact; negative zero is written as `0`.
pub(crate) fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(match text.strip_prefix('\u{feff}') {
        Some(rest) => rest.to_string(),
        None => text,
    })
}

pub(crate) fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(path, line, format!("not a number: {field:?}")))
}
