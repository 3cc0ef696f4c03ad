use serde::{Deserialize, Serialize};

use super::Task;
use crate::error::{Error, Result};
use crate::laplacian::Construction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Metrics {
    Accuracy(f64),
    /// `r2` is NaN when the labels have zero variance.
    Regression { rmse: f64, r2: f64 },
}

impl Metrics {
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Metrics::Accuracy(a) => vec![("accuracy", a)],
            Metrics::Regression { rmse, r2 } => vec![("rmse", rmse), ("r2", r2)],
        }
    }
}

/// One line of the tidy metrics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub fold: usize,
    pub task: Task,
    pub kind: Construction,
    pub layers: usize,
    pub d: usize,
    pub lr: f64,
    pub metric: String,
    pub value: f64,
}

/// Classification: `predictions` are `e × s` scores (argmax, lowest index on
/// ties). Regression: `predictions` are the `e` estimates.
pub fn metrics(predictions: &[f64], labels: &[f64], task: Task) -> Result<Metrics> {
    let s = task.output_width();
    if predictions.len() != labels.len() * s || labels.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} labels of width {s}",
            predictions.len(),
            labels.len()
        )));
    }
    let e = labels.len() as f64;
    if task.is_classification() {
        let correct = predictions
            .chunks(s)
            .zip(labels)
            .filter(|(row, &y)| {
                let best = row
                    .iter()
                    .enumerate()
                    .fold(0, |b, (k, &v)| if v > row[b] { k } else { b });
                best as f64 == y
            })
            .count();
        return Ok(Metrics::Accuracy(correct as f64 / e));
    }
    let ss_res: f64 = predictions.iter().zip(labels).map(|(p, y)| (p - y) * (p - y)).sum();
    let mean = labels.iter().sum::<f64>() / e;
    let ss_tot: f64 = labels.iter().map(|y| (y - mean) * (y - mean)).sum();
    Ok(Metrics::Regression {
        rmse: (ss_res / e).sqrt(),
        r2: if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { f64::NAN },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            metrics(&[0.1, 0.9, 0.8, 0.2], &[1.0, 0.0], Task::Existence).unwrap(),
            Metrics::Accuracy(1.0)
        );
        // scores predicting class 1 twice
        assert_eq!(
            metrics(&[0.0, 1.0, 0.0, 1.0], &[0.0, 1.0], Task::Existence).unwrap(),
            Metrics::Accuracy(0.5)
        );
        let y = [1.0, 2.0, 4.0];
        assert_eq!(
            metrics(&y, &y, Task::WeightPrediction).unwrap(),
            Metrics::Regression { rmse: 0.0, r2: 1.0 }
        );
        let mean = 7.0 / 3.0;
        match metrics(&[mean; 3], &y, Task::WeightPrediction).unwrap() {
            Metrics::Regression { r2, .. } => assert!(r2.abs() < 1e-15),
            _ => unreachable!(),
        }
        match metrics(&[1.0, 2.0], &[3.0, 3.0], Task::WeightPrediction).unwrap() {
            Metrics::Regression { rmse, r2 } => {
                assert!((rmse - 2.5f64.sqrt()).abs() < 1e-15);
                assert!(r2.is_nan());
            }
            _ => unreachable!(),
        }
        assert!(metrics(&[0.0; 3], &[0.0], Task::ThreeClass).is_ok());
        assert!(metrics(&[0.0; 2], &[0.0], Task::ThreeClass).is_err());
    }
}
