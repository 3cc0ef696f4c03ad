//! HaarNet: a first-order spectral graph convolution network over a
//! Hermitian propagation matrix, for three link-prediction tasks.
//!
//! Layers compute `Y ← relu(P Y Θ)` with complex `Θ` and the ReLU applied
//! separately to real and imaginary parts. For every ordered pair `(u, v)`
//! the final embeddings are unwound into `[Re Y_u, Im Y_u, Re Y_v, Im Y_v]`,
//! passed through dropout and a linear head. Gradients are derived by hand.

mod checkpoint;
mod dataset;
mod features;
mod loss;
mod metrics;
mod model;
mod normalize;
mod optim;
mod propagation;
mod train;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointMeta, CHECKPOINT_VERSION};
pub use dataset::{build_task_dataset, build_task_dataset_with, EdgeSample, Split, SplitFractions, TaskDataset};
pub use features::{node_features, FeatureKind};
pub use loss::{loss, loss_and_grad, log_softmax};
pub use metrics::{metrics, MetricRow, Metrics};
pub use model::{backward, dropout_mask, forward, ForwardCache, HaarNetModel, ModelShape};
pub use normalize::{normalize_weights, WeightNormalization};
pub use optim::{adam_step, AdamConfig, AdamState};
pub use propagation::{propagation_matrix, propagation_matrix_with};
pub use train::{predict, train, train_fold, EpochRecord, FoldResult, TrainConfig, TrainOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Task {
    /// Does `(u, v)` exist? Two classes.
    Existence,
    /// `(u, v)` exists / `(v, u)` exists / neither. Three classes.
    ThreeClass,
    /// Weight of `(u, v)`, 0 for non-edges. Regression.
    WeightPrediction,
}

impl Task {
    pub fn output_width(self) -> usize {
        match self {
            Task::Existence => 2,
            Task::ThreeClass => 3,
            Task::WeightPrediction => 1,
        }
    }

    pub fn is_classification(self) -> bool {
        self != Task::WeightPrediction
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Existence => "existence",
            Task::ThreeClass => "three-class",
            Task::WeightPrediction => "weight",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "existence" => Ok(Task::Existence),
            "three-class" | "3-class" | "threeclass" | "3class" => Ok(Task::ThreeClass),
            "weight" | "weight-prediction" => Ok(Task::WeightPrediction),
            _ => Err(Error::InvalidParameter(format!(
                "unknown task {s:?} (expected existence, three-class or weight)"
            ))),
        }
    }
}

impl TryFrom<String> for Task {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Task> for String {
    fn from(t: Task) -> String {
        t.to_string()
    }
}
