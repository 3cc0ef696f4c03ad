use super::Task;
use crate::error::{Error, Result};

/// Row-wise log-softmax of a row-major `e × s` matrix.
pub fn log_softmax(z: &[f64], s: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(z.len());
    for row in z.chunks(s) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        out.extend(row.iter().map(|v| v - lse));
    }
    out
}

fn class_of(label: f64, s: usize) -> Result<usize> {
    if label >= 0.0 && label.fract() == 0.0 && (label as usize) < s {
        Ok(label as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "label {label} is not a class id in 0..{s}"
        )))
    }
}

/// Loss and `∂loss/∂Z`. Regression uses the mean squared error; the
/// classification tasks use the mean negative log-likelihood of the
/// log-softmax at the true class.
pub fn loss_and_grad(z: &[f64], labels: &[f64], task: Task) -> Result<(f64, Vec<f64>)> {
    let s = task.output_width();
    if z.len() != labels.len() * s {
        return Err(Error::DimensionMismatch(format!(
            "{} outputs for {} labels of width {s}",
            z.len(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InvalidParameter("loss over zero samples".into()));
    }
    let e = labels.len() as f64;
    if !task.is_classification() {
        let mut loss = 0.0;
        let grad = z
            .iter()
            .zip(labels)
            .map(|(p, y)| {
                loss += (p - y) * (p - y);
                2.0 * (p - y) / e
            })
            .collect();
        return Ok((loss / e, grad));
    }
    let logp = log_softmax(z, s);
    let mut loss = 0.0;
    let mut grad: Vec<f64> = logp.iter().map(|lp| lp.exp() / e).collect();
    for (i, &y) in labels.iter().enumerate() {
        let k = class_of(y, s)?;
        loss -= logp[i * s + k];
        grad[i * s + k] -= 1.0 / e;
    }
    Ok((loss / e, grad))
}

pub fn loss(z: &[f64], labels: &[f64], task: Task) -> Result<f64> {
    Ok(loss_and_grad(z, labels, task)?.0)
}
