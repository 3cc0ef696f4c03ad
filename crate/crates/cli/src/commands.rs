use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use haarlap::denoise::{run_denoise_experiment, DenoiseConfig};
use haarlap::io::{write_denoise_csv, write_heatmap_csv, write_matrix, write_metrics_csv, write_spectrum_csv};
use haarlap::laplacian::laplacian as build_laplacian;
use haarlap::learn::{normalize_weights, save_checkpoint, train as train_model, CheckpointMeta, MetricRow, TrainConfig};
use haarlap::spectral::{hermitian_eig_with, EigenMethod};
use haarlap::{Construction, Error, LaplacianKind};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{DenoiseArgs, LaplacianArgs, Method, SpectrumArgs, TrainArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// 1 usage, 2 data, 3 numeric.
pub fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 1,
        CliError::Data(_) => 2,
        CliError::Lib(e) if e.is_numeric() => 3,
        CliError::Lib(Error::InvalidParameter(_)) => 1,
        CliError::Lib(_) => 2,
    }
}

fn run_dir(out: &Option<PathBuf>, command: &str, seed: Option<u64>) -> Result<PathBuf> {
    let dir = match out {
        Some(dir) => dir.clone(),
        None => {
            let stamp = chrono::Local::now().format("%Y%m%d-%H%M%S");
            let base = match seed {
                Some(s) => format!("{command}-{stamp}-seed{s}"),
                None => format!("{command}-{stamp}"),
            };
            let mut dir = Path::new("runs").join(&base);
            let mut k = 1;
            while dir.exists() {
                dir = Path::new("runs").join(format!("{base}-{k}"));
                k += 1;
            }
            dir
        }
    };
    fs::create_dir_all(&dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn echo_config(dir: &Path, config: &impl Serialize) -> Result<()> {
    let text = toml::to_string(config).map_err(|e| CliError::Data(format!("cannot serialize config: {e}")))?;
    let path = dir.join("config.toml");
    fs::write(&path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn with_charge(kind: Construction, q: Option<f64>) -> Result<Construction> {
    match (kind, q) {
        (k, None) => Ok(k),
        (Construction::Magnetic { .. }, Some(q)) => Ok(Construction::magnetic(q)?),
        (k, Some(_)) => Err(CliError::Usage(format!("--q only applies to the magnetic kind, not {k}"))),
    }
}

#[derive(Serialize)]
struct LaplacianEcho {
    command: &'static str,
    version: &'static str,
    kind: Construction,
    normalized: bool,
    file: String,
    source: crate::source::SourceEcho,
}

pub fn laplacian(a: LaplacianArgs) -> Result<PathBuf> {
    let kind = with_charge(a.kind, a.q)?;
    if !(a.file.ends_with(".mtx") || a.file.ends_with(".csv")) {
        return Err(CliError::Usage(format!("--file {} must end in .mtx or .csv", a.file)));
    }
    let (g, source) = a.source.load(0)?;
    let l = build_laplacian(
        &g,
        LaplacianKind {
            construction: kind,
            normalized: a.normalized,
        },
    )?;
    let dir = run_dir(&a.output.out, "laplacian", None)?;
    write_matrix(dir.join(&a.file), l.as_dense(), true)?;
    echo_config(
        &dir,
        &LaplacianEcho {
            command: "laplacian",
            version: env!("CARGO_PKG_VERSION"),
            kind,
            normalized: a.normalized,
            file: a.file,
            source,
        },
    )?;
    Ok(dir)
}

#[derive(Serialize)]
struct SpectrumEcho {
    command: &'static str,
    version: &'static str,
    kind: Construction,
    normalized: bool,
    method: Method,
    seed: u64,
    source: crate::source::SourceEcho,
}

pub fn spectrum(a: SpectrumArgs) -> Result<PathBuf> {
    let kind = with_charge(a.kind, a.q)?;
    let (g, source) = a.source.load(a.seed)?;
    let l = build_laplacian(
        &g,
        LaplacianKind {
            construction: kind,
            normalized: a.normalized,
        },
    )?;
    let method = match a.method {
        Method::Householder => EigenMethod::HouseholderQl,
        Method::Jacobi => EigenMethod::Jacobi,
    };
    let spectrum = hermitian_eig_with(&l, method)?;
    let dir = run_dir(&a.output.out, "spectrum", Some(a.seed))?;
    write_spectrum_csv(dir.join("spectrum.csv"), &spectrum)?;
    write_heatmap_csv(dir.join("heatmap.csv"), &spectrum)?;
    echo_config(
        &dir,
        &SpectrumEcho {
            command: "spectrum",
            version: env!("CARGO_PKG_VERSION"),
            kind,
            normalized: a.normalized,
            method: a.method,
            seed: a.seed,
            source,
        },
    )?;
    Ok(dir)
}

pub fn denoise(a: DenoiseArgs) -> Result<PathBuf> {
    let mut c: DenoiseConfig = match &a.config {
        Some(path) => read_config(path)?,
        None => DenoiseConfig::default(),
    };
    if let Some(v) = a.kinds {
        c.kinds = v;
    }
    if a.normalized {
        c.normalized = true;
    }
    if let Some(v) = a.m {
        c.m_values = v;
    }
    if let Some(v) = a.sigmas {
        c.sigmas = v;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(if let Some(v) = a.$field { c.$field = v; })*};
    }
    set!(graphs, runs, seed, n, p, w_min, w_max);
    if a.r.is_some() {
        c.r = a.r;
    }
    c.validate()?;
    let result = run_denoise_experiment(&c)?;
    let dir = run_dir(&a.output.out, "denoise", Some(c.seed))?;
    write_denoise_csv(dir.join("denoise.csv"), &result)?;
    echo_config(&dir, &c)?;
    if result.rejections > 0 {
        log::warn!("{} generated graphs rejected for isolated nodes", result.rejections);
    }
    Ok(dir)
}

#[derive(Serialize)]
struct TrainEcho {
    command: &'static str,
    version: &'static str,
    task: haarlap::learn::Task,
    normalization: haarlap::learn::WeightNormalization,
    grid: bool,
    source: crate::source::SourceEcho,
    config: TrainConfig,
}

const GRID_LAYERS: [usize; 3] = [2, 4, 8];
const GRID_D: [usize; 3] = [16, 32, 64];
const GRID_LR: [f64; 4] = [0.001, 0.005, 0.01, 0.05];

pub fn train(a: TrainArgs) -> Result<PathBuf> {
    let mut c: TrainConfig = match &a.config {
        Some(path) => read_config(path)?,
        None => TrainConfig::default(),
    };
    if let Some(k) = a.kind {
        c.construction = k;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(if let Some(v) = a.$field { c.$field = v; })*};
    }
    set!(layers, d, lr, max_epochs, patience, dropout, weight_decay, folds, seed, features);
    if a.decoupled_decay {
        c.adam.coupled_decay = false;
    }
    c.validate()?;
    let (g, source) = a.source.load(c.seed)?;
    let g = normalize_weights(&g, a.normalization)?;

    let configs: Vec<TrainConfig> = if a.grid {
        let mut v = Vec::new();
        for layers in GRID_LAYERS {
            for d in GRID_D {
                for lr in GRID_LR {
                    v.push(TrainConfig { layers, d, lr, ..c.clone() });
                }
            }
        }
        v
    } else {
        vec![c.clone()]
    };
    let outcomes: Vec<_> = configs.par_iter().map(|cfg| train_model(&g, a.task, cfg)).collect();

    let dir = run_dir(&a.output.out, "train", Some(c.seed))?;
    let mut rows: Vec<MetricRow> = Vec::new();
    for (cfg, outcome) in configs.iter().zip(outcomes) {
        match outcome {
            Ok(o) => {
                for name in ["accuracy", "rmse", "r2"] {
                    if let Some((mean, sd)) = o.test_summary(name) {
                        log::info!("layers={} d={} lr={}: test {name} {mean:.4} ± {sd:.4}", cfg.layers, cfg.d, cfg.lr);
                    }
                }
                rows.extend(o.metric_rows());
                if !a.grid && !a.no_checkpoint {
                    for f in &o.folds {
                        let meta = CheckpointMeta { seed: cfg.seed, fold: f.fold };
                        save_checkpoint(dir.join("checkpoints").join(format!("fold_{}", f.fold)), &f.model, meta)?;
                    }
                }
            }
            // a diverging grid cell is reported and the sweep goes on
            Err(e) if a.grid && e.is_numeric() => {
                log::warn!("layers={} d={} lr={} failed: {e}", cfg.layers, cfg.d, cfg.lr);
                rows.push(MetricRow {
                    fold: 0,
                    task: a.task,
                    kind: cfg.construction,
                    layers: cfg.layers,
                    d: cfg.d,
                    lr: cfg.lr,
                    metric: "failed".into(),
                    value: 1.0,
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    write_metrics_csv(dir.join("metrics.csv"), &rows)?;
    echo_config(
        &dir,
        &TrainEcho {
            command: "train",
            version: env!("CARGO_PKG_VERSION"),
            task: a.task,
            normalization: a.normalization,
            grid: a.grid,
            source,
            config: c,
        },
    )?;
    Ok(dir)
}
