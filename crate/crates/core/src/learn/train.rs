use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{build_task_dataset_with, Split, SplitFractions};
use super::features::{node_features, FeatureKind};
use super::loss::{loss, loss_and_grad};
use super::metrics::{metrics, MetricRow, Metrics};
use super::model::{backward, dropout_mask, forward, HaarNetModel, ModelShape};
use super::optim::{adam_step, AdamConfig, AdamState};
use super::propagation::propagation_matrix;
use super::Task;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::laplacian::Construction;
use crate::rng::{derive_seed, stream_rng, Stream};
use crate::sparse::SparseComplex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub construction: Construction,
    pub layers: usize,
    pub d: usize,
    pub lr: f64,
    pub max_epochs: usize,
    /// Training stops once this many consecutive epochs fail to lower the
    /// validation loss, counted after the best one.
    pub patience: usize,
    pub dropout: f64,
    pub weight_decay: f64,
    pub folds: usize,
    pub seed: u64,
    pub features: FeatureKind,
    pub adam: AdamConfig,
    pub split: SplitFractions,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            construction: Construction::Haar,
            layers: 2,
            d: 16,
            lr: 0.01,
            max_epochs: 1000,
            patience: 200,
            dropout: 0.5,
            weight_decay: 5e-4,
            folds: 1,
            seed: 0,
            features: FeatureKind::Degree,
            adam: AdamConfig::default(),
            split: SplitFractions::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.layers == 0 || self.d == 0 {
            return bad("layers and d must be positive".into());
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad(format!("learning rate {} must be positive", self.lr));
        }
        if self.max_epochs == 0 || self.folds == 0 {
            return bad("max_epochs and folds must be positive".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout rate {} outside [0,1)", self.dropout));
        }
        if !self.weight_decay.is_finite() || self.weight_decay < 0.0 {
            return bad(format!("weight decay {} must be nonnegative", self.weight_decay));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
}

#[derive(Debug, Clone)]
pub struct FoldResult {
    pub fold: usize,
    /// Parameters restored from the best validation epoch.
    pub model: HaarNetModel,
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub history: Vec<EpochRecord>,
    pub train: Metrics,
    /// `None` when the split is empty.
    pub val: Option<Metrics>,
    pub test: Option<Metrics>,
    /// Train metrics of the parameters at the final epoch, before restoring.
    pub last_train: Metrics,
    pub sizes: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub task: Task,
    pub config: TrainConfig,
    pub folds: Vec<FoldResult>,
}

impl TrainOutcome {
    /// Tidy rows: `{split}_{metric}` per fold plus `best_epoch` and `epochs`.
    pub fn metric_rows(&self) -> Vec<MetricRow> {
        let c = &self.config;
        let mut rows = Vec::new();
        for f in &self.folds {
            let mut push = |metric: String, value: f64| {
                rows.push(MetricRow {
                    fold: f.fold,
                    task: self.task,
                    kind: c.construction,
                    layers: c.layers,
                    d: c.d,
                    lr: c.lr,
                    metric,
                    value,
                })
            };
            for (split, m) in [("train", Some(f.train)), ("val", f.val), ("test", f.test)] {
                if let Some(m) = m {
                    for (name, v) in m.named() {
                        push(format!("{split}_{name}"), v);
                    }
                }
            }
            push("best_epoch".into(), f.best_epoch as f64);
            push("epochs".into(), f.epochs_run as f64);
        }
        rows
    }

    /// Mean and sample standard deviation of a test metric across folds.
    pub fn test_summary(&self, name: &str) -> Option<(f64, f64)> {
        let vals: Vec<f64> = self
            .folds
            .iter()
            .filter_map(|f| f.test)
            .filter_map(|m| m.named().into_iter().find(|(k, _)| *k == name).map(|(_, v)| v))
            .collect();
        if vals.is_empty() {
            return None;
        }
        let k = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / k;
        let std = if vals.len() > 1 {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        Some((mean, std))
    }
}

/// Evaluation-mode scores for `pairs`: `e × s` row-major.
pub fn predict(
    model: &HaarNetModel,
    p: &SparseComplex,
    x: &[f64],
    pairs: &[(usize, usize)],
) -> Result<Vec<f64>> {
    Ok(forward(model, p, x, pairs, None)?.0)
}

fn evaluate(
    model: &HaarNetModel,
    p: &SparseComplex,
    x: &[f64],
    pairs: &[(usize, usize)],
    labels: &[f64],
) -> Result<Option<(f64, Metrics)>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let z = predict(model, p, x, pairs)?;
    let task = model.shape.task;
    Ok(Some((loss(&z, labels, task)?, metrics(&z, labels, task)?)))
}

/// Trains one fold from scratch with full-batch Adam and early stopping on
/// the validation loss (the training loss when the validation split is
/// empty).
pub fn train_fold(g: &DirectedGraph, task: Task, config: &TrainConfig, fold: usize) -> Result<FoldResult> {
    config.validate()?;
    let ds = build_task_dataset_with(g, task, config.seed, fold, config.split)?;
    let p = propagation_matrix(&ds.train_graph, config.construction)?;
    let (x, in_dim) = node_features(&ds.train_graph, config.features);
    let shape = ModelShape {
        construction: config.construction,
        task,
        in_dim,
        d: config.d,
        layers: config.layers,
        dropout: config.dropout,
    };
    let mut model = HaarNetModel::init(shape, derive_seed(config.seed, Stream::Init, &[fold as u64]))?;
    let (train_pairs, train_labels) = (ds.pairs(Split::Train), ds.labels(Split::Train));
    let (val_pairs, val_labels) = (ds.pairs(Split::Val), ds.labels(Split::Val));
    let (test_pairs, test_labels) = (ds.pairs(Split::Test), ds.labels(Split::Test));
    if train_pairs.is_empty() {
        return Err(Error::InvalidGraph("empty training split".into()));
    }
    if val_pairs.is_empty() {
        log::warn!("fold {fold}: empty validation split, early stopping on training loss");
    }

    let mut adam = AdamState::new(model.params.len(), config.adam);
    let mut dropout_rng = stream_rng(config.seed, Stream::Dropout, &[fold as u64]);
    let mask_len = train_pairs.len() * 4 * config.d;
    let mut best = (f64::INFINITY, model.params.clone(), 0);
    let mut streak = 0;
    let mut history = Vec::new();
    let diverged = |epoch: usize, e: Error| match e {
        Error::Divergence(msg) => Error::Divergence(format!("fold {fold}, epoch {epoch}: {msg}")),
        other => other,
    };
    for epoch in 0..config.max_epochs {
        let mask = (config.dropout > 0.0).then(|| dropout_mask(&mut dropout_rng, mask_len, config.dropout));
        let (z, cache) =
            forward(&model, &p, &x, &train_pairs, mask.as_deref()).map_err(|e| diverged(epoch, e))?;
        let (train_loss, dz) = loss_and_grad(&z, &train_labels, task)?;
        if !train_loss.is_finite() {
            return Err(diverged(epoch, Error::Divergence(format!("training loss {train_loss}"))));
        }
        let grads = backward(&model, &p, &train_pairs, &cache, &dz)?;
        adam_step(&mut model.params, &grads, &mut adam, config.lr, config.weight_decay)?;
        let monitored = match evaluate(&model, &p, &x, &val_pairs, &val_labels).map_err(|e| diverged(epoch, e))? {
            Some((l, _)) => l,
            None => evaluate(&model, &p, &x, &train_pairs, &train_labels)
                .map_err(|e| diverged(epoch, e))?
                .map(|(l, _)| l)
                .unwrap_or(train_loss),
        };
        history.push(EpochRecord {
            epoch,
            train_loss,
            val_loss: monitored,
        });
        if monitored < best.0 {
            best = (monitored, model.params.clone(), epoch);
            streak = 0;
        } else {
            streak += 1;
            if streak > config.patience {
                break;
            }
        }
    }
    let epochs_run = history.len();
    let last_train = evaluate(&model, &p, &x, &train_pairs, &train_labels)?
        .expect("nonempty")
        .1;
    model.params = best.1;
    let train = evaluate(&model, &p, &x, &train_pairs, &train_labels)?.expect("nonempty").1;
    let val = evaluate(&model, &p, &x, &val_pairs, &val_labels)?.map(|r| r.1);
    let test = evaluate(&model, &p, &x, &test_pairs, &test_labels)?.map(|r| r.1);
    log::debug!("fold {fold}: best epoch {} of {epochs_run}", best.2);
    Ok(FoldResult {
        fold,
        model,
        best_epoch: best.2,
        epochs_run,
        history,
        train,
        val,
        test,
        last_train,
        sizes: [train_pairs.len(), val_pairs.len(), test_pairs.len()],
    })
}

/// Runs `config.folds` independent folds in parallel on the current rayon
/// pool. Results are ordered by fold and do not depend on the pool size.
pub fn train(g: &DirectedGraph, task: Task, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let folds = (0..config.folds)
        .into_par_iter()
        .map(|fold| train_fold(g, task, config, fold))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrainOutcome {
        task,
        config: config.clone(),
        folds,
    })
}
