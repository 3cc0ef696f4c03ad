//! CSV emitters (and readers for round-trips) for matrices, spectra,
//! heatmaps and experiment results.

use std::path::Path;

use super::{fmt_f64, mtx, parse_f64, read_text, write_text};
use crate::dense::DenseComplex;
use crate::denoise::{DenoiseResult, DenoiseRow};
use crate::error::{Error, Result};
use crate::learn::MetricRow;
use crate::sparse::SparseComplex;
use crate::spectral::Spectrum;
use crate::Complex64;

fn complex_header(prefix: &str, n: usize) -> String {
    let cols: Vec<String> = (0..n).map(|k| format!("re_{k},im_{k}")).collect();
    if prefix.is_empty() {
        cols.join(",")
    } else if cols.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix},{}", cols.join(","))
    }
}

fn push_complex(out: &mut String, values: impl IntoIterator<Item = Complex64>) {
    for z in values {
        out.push(',');
        out.push_str(&fmt_f64(z.re));
        out.push(',');
        out.push_str(&fmt_f64(z.im));
    }
}

/// Header `re_0,im_0,...`, then one line per row.
pub fn write_matrix_csv(path: impl AsRef<Path>, m: &DenseComplex) -> Result<()> {
    let mut out = complex_header("", m.cols());
    out.push('\n');
    for r in 0..m.rows() {
        let mut line = String::new();
        push_complex(&mut line, m.row(r).iter().copied());
        out.push_str(line.strip_prefix(',').unwrap_or(""));
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

/// Writes `.mtx` or `.csv` by extension; `hermitian` selects the
/// Matrix Market lower-triangle storage.
pub fn write_matrix(path: impl AsRef<Path>, m: &DenseComplex, hermitian: bool) -> Result<()> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("mtx") => {
            let symmetry = if hermitian {
                mtx::MtxSymmetry::Hermitian
            } else {
                mtx::MtxSymmetry::General
            };
            mtx::write_mtx(path, &SparseComplex::from_dense(m), symmetry)
        }
        Some("csv") => write_matrix_csv(path, m),
        _ => Err(Error::InvalidParameter(format!(
            "{}: output extension must be .mtx or .csv",
            path.display()
        ))),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_complex_fields(path: &Path, line: usize, fields: &[&str]) -> Result<Vec<Complex64>> {
    if !fields.len().is_multiple_of(2) {
        return Err(Error::parse(path, line, "odd number of real/imaginary fields"));
    }
    fields
        .chunks(2)
        .map(|p| Ok(Complex64::new(parse_f64(path, line, p[0])?, parse_f64(path, line, p[1])?)))
        .collect()
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DenseComplex> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let header = text.lines().next().unwrap_or("").trim();
    let cols = if header.is_empty() {
        0
    } else {
        header.split(',').count() / 2
    };
    let mut data = Vec::new();
    let mut rows = 0;
    for (line, l) in data_lines(&text) {
        let fields: Vec<&str> = l.split(',').collect();
        let row = parse_complex_fields(path, line, &fields)?;
        if row.len() != cols {
            return Err(Error::parse(path, line, format!("expected {cols} entries")));
        }
        data.extend(row);
        rows += 1;
    }
    DenseComplex::from_vec(rows, cols, data)
}

/// Header `lambda,re_0,im_0,...`; row `k` holds `λ_k` and eigenvector `k`.
pub fn write_spectrum_csv(path: impl AsRef<Path>, s: &Spectrum) -> Result<()> {
    let n = s.n();
    let mut out = complex_header("lambda", n);
    out.push('\n');
    for k in 0..n {
        out.push_str(&fmt_f64(s.eigenvalues[k]));
        push_complex(&mut out, (0..n).map(|r| s.vectors.get(r, k)));
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

pub fn read_spectrum_csv(path: impl AsRef<Path>) -> Result<Spectrum> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut eigenvalues = Vec::new();
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    for (line, l) in data_lines(&text) {
        let fields: Vec<&str> = l.split(',').collect();
        eigenvalues.push(parse_f64(path, line, fields[0])?);
        columns.push(parse_complex_fields(path, line, &fields[1..])?);
    }
    let n = eigenvalues.len();
    if let Some(k) = columns.iter().position(|c| c.len() != n) {
        return Err(Error::parse(path, k + 2, format!("expected {n} vector entries")));
    }
    Ok(Spectrum {
        eigenvalues,
        vectors: DenseComplex::from_fn(n, n, |r, k| columns[k][r]),
    })
}

/// Header `mode,lambda,node_0,...`; entries `sign(Re u)·|u|`.
pub fn write_heatmap_csv(path: impl AsRef<Path>, s: &Spectrum) -> Result<()> {
    let nodes: Vec<String> = (0..s.n()).map(|k| format!("node_{k}")).collect();
    let mut out = format!("mode,lambda{}{}\n", if nodes.is_empty() { "" } else { "," }, nodes.join(","));
    for (k, row) in s.heatmap().iter().enumerate() {
        out.push_str(&format!("{k},{}", fmt_f64(s.eigenvalues[k])));
        for v in row {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

const DENOISE_HEADER: &str = "kind,m,sigma,mean_snr_db,std_snr_db,n_samples";

pub fn write_denoise_csv(path: impl AsRef<Path>, result: &DenoiseResult) -> Result<()> {
    let mut out = format!("{DENOISE_HEADER}\n");
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.kind,
            r.m,
            r.sigma,
            fmt_f64(r.mean_snr_db),
            fmt_f64(r.std_snr_db),
            r.n_samples
        ));
    }
    write_text(path.as_ref(), &out)
}

/// Reads the rows back; the rejection count is not part of the table.
pub fn read_denoise_csv(path: impl AsRef<Path>) -> Result<Vec<DenoiseRow>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    if text.lines().next().map(str::trim) != Some(DENOISE_HEADER) {
        return Err(Error::parse(path, 1, format!("expected header {DENOISE_HEADER}")));
    }
    data_lines(&text)
        .map(|(line, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 6 {
                return Err(Error::parse(path, line, "expected 6 fields"));
            }
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(path, line, format!("not an integer: {s:?}")))
            };
            Ok(DenoiseRow {
                kind: f[0]
                    .parse()
                    .map_err(|e: Error| Error::parse(path, line, e.to_string()))?,
                m: int(f[1])?,
                sigma: parse_f64(path, line, f[2])?,
                mean_snr_db: parse_f64(path, line, f[3])?,
                std_snr_db: parse_f64(path, line, f[4])?,
                n_samples: int(f[5])?,
            })
        })
        .collect()
}

pub fn write_metrics_csv(path: impl AsRef<Path>, rows: &[MetricRow]) -> Result<()> {
    let mut out = String::from("fold,task,kind,layers,d,lr,metric,value\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.fold,
            r.task,
            r.kind,
            r.layers,
            r.d,
            r.lr,
            r.metric,
            fmt_f64(r.value)
        ));
    }
    write_text(path.as_ref(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denoise::DenoiseRow;
    use crate::laplacian::{laplacian, Construction, LaplacianKind};
    use crate::spectral::hermitian_eig;
    use crate::DirectedGraph;

    fn spectrum() -> Spectrum {
        let g = DirectedGraph::from_triples(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.3), (3, 1, 1.0)])
            .unwrap();
        hermitian_eig(&laplacian(&g, LaplacianKind::raw(Construction::Haar)).unwrap()).unwrap()
    }

    #[test]
    fn matrix_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let m = DenseComplex::from_fn(3, 2, |r, c| Complex64::new(r as f64 / 7.0, -(c as f64) * 1e-300));
        let p = dir.path().join("m.csv");
        write_matrix(&p, &m, false).unwrap();
        assert_eq!(read_matrix_csv(&p).unwrap(), m);
        assert!(write_matrix(dir.path().join("m.txt"), &m, false).is_err());

        let p = dir.path().join("e.csv");
        write_matrix_csv(&p, &DenseComplex::zeros(0, 0)).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "\n");
    }

    #[test]
    fn spectrum_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let s = spectrum();
        let p = dir.path().join("s.csv");
        write_spectrum_csv(&p, &s).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("lambda,re_0,im_0,re_1,im_1,re_2,im_2,re_3,im_3\n"));
        assert_eq!(read_spectrum_csv(&p).unwrap(), s);
    }

    #[test]
    fn heatmap_csv_shape() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        write_heatmap_csv(&p, &spectrum()).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "mode,lambda,node_0,node_1,node_2,node_3");
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    }

    #[test]
    fn denoise_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            DenoiseRow {
                kind: Construction::Magnetic { q: 0.25 },
                m: 10,
                sigma: 0.5,
                mean_snr_db: 21.123456789,
                std_snr_db: 0.1,
                n_samples: 12,
            },
            DenoiseRow {
                kind: Construction::SignMagnetic,
                m: 25,
                sigma: 1.0,
                mean_snr_db: -3.0,
                std_snr_db: 0.0,
                n_samples: 12,
            },
        ];
        let result = DenoiseResult {
            rows: rows.clone(),
            rejections: 0,
        };
        let p = dir.path().join("d.csv");
        write_denoise_csv(&p, &result).unwrap();
        assert_eq!(read_denoise_csv(&p).unwrap(), rows);
    }
}
