//! Checkpoint bundles: a directory holding `manifest.toml` and one CSV per
//! parameter matrix (`theta_{l}.csv`, `head_w.csv`, `head_b.csv`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{HaarNetModel, ModelShape};
use crate::dense::DenseComplex;
use crate::error::{Error, Result};
use crate::io::{read_matrix_csv, write_matrix_csv};
use crate::Complex64;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub seed: u64,
    pub fold: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: u32,
    #[serde(flatten)]
    meta: CheckpointMeta,
    shape: ModelShape,
}

fn real_matrix(rows: usize, cols: usize, values: &[f64]) -> Result<DenseComplex> {
    DenseComplex::from_vec(rows, cols, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
}

fn checked(dir: &Path, name: &str, rows: usize, cols: usize) -> Result<DenseComplex> {
    let m = read_matrix_csv(dir.join(name))?;
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, manifest implies {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

pub fn save_checkpoint(dir: impl AsRef<Path>, model: &HaarNetModel, meta: CheckpointMeta) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let shape = model.shape;
    let d = shape.d;
    for l in 0..shape.layers {
        let rows = model.layer_rows(l);
        let (re, im) = model.theta(l);
        let data = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        write_matrix_csv(dir.join(format!("theta_{l}.csv")), &DenseComplex::from_vec(rows, d, data)?)?;
    }
    let s = shape.task.output_width();
    let (w, b) = model.head();
    write_matrix_csv(dir.join("head_w.csv"), &real_matrix(4 * d, s, w)?)?;
    write_matrix_csv(dir.join("head_b.csv"), &real_matrix(1, s, b)?)?;
    let manifest = Manifest {
        version: CHECKPOINT_VERSION,
        meta,
        shape,
    };
    let text = toml::to_string(&manifest)
        .map_err(|e| Error::InvalidParameter(format!("cannot serialize manifest: {e}")))?;
    let path = dir.join("manifest.toml");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

pub fn load_checkpoint(dir: impl AsRef<Path>) -> Result<(HaarNetModel, CheckpointMeta)> {
    let dir = dir.as_ref();
    let path = dir.join("manifest.toml");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::parse(&path, 0, e.to_string()))?;
    if manifest.version != CHECKPOINT_VERSION {
        return Err(Error::parse(
            &path,
            0,
            format!("unsupported checkpoint version {}", manifest.version),
        ));
    }
    let shape = manifest.shape;
    shape.validate()?;
    let (d, s) = (shape.d, shape.task.output_width());
    let mut params = Vec::with_capacity(shape.param_count());
    for l in 0..shape.layers {
        let rows = if l == 0 { shape.in_dim } else { d };
        let m = checked(dir, &format!("theta_{l}.csv"), rows, d)?;
        params.extend(m.data().iter().map(|z| z.re));
        params.extend(m.data().iter().map(|z| z.im));
    }
    for (name, rows) in [("head_w.csv", 4 * d), ("head_b.csv", 1)] {
        let m = checked(dir, name, rows, s)?;
        if m.data().iter().any(|z| z.im != 0.0) {
            return Err(Error::parse(dir.join(name), 0, "head entries must be real"));
        }
        params.extend(m.data().iter().map(|z| z.re));
    }
    Ok((HaarNetModel::from_params(shape, params)?, manifest.meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::Construction;
    use crate::learn::Task;

    #[test]
    fn roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for (task, construction) in [
            (Task::Existence, Construction::Haar),
            (Task::ThreeClass, Construction::Magnetic { q: 0.125 }),
            (Task::WeightPrediction, Construction::SignMagnetic),
        ] {
            let shape = ModelShape {
                construction,
                task,
                in_dim: 3,
                d: 4,
                layers: 3,
                dropout: 0.5,
            };
            let model = HaarNetModel::init(shape, 9).unwrap();
            let meta = CheckpointMeta { seed: 9, fold: 2 };
            let path = dir.path().join(task.to_string());
            save_checkpoint(&path, &model, meta).unwrap();
            let (back, m) = load_checkpoint(&path).unwrap();
            assert_eq!(back, model);
            assert_eq!(m, meta);
        }
    }

    #[test]
    fn corrupted_bundles_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let shape = ModelShape {
            construction: Construction::Haar,
            task: Task::Existence,
            in_dim: 2,
            d: 2,
            layers: 1,
            dropout: 0.0,
        };
        let model = HaarNetModel::init(shape, 1).unwrap();
        save_checkpoint(dir.path(), &model, CheckpointMeta { seed: 1, fold: 0 }).unwrap();
        write_matrix_csv(dir.path().join("theta_0.csv"), &DenseComplex::zeros(3, 2)).unwrap();
        assert!(matches!(load_checkpoint(dir.path()), Err(Error::DimensionMismatch(_))));
        let manifest = dir.path().join("manifest.toml");
        let text = fs::read_to_string(&manifest).unwrap().replace("version = 1", "version = 7");
        fs::write(&manifest, text).unwrap();
        assert!(load_checkpoint(dir.path()).is_err());
    }
}
