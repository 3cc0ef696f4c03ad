use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// L2 decay added to the gradient (`g + λθ`) when true; applied directly
    /// to the parameters (`θ ← θ − lr·λθ`) when false.
    pub coupled_decay: bool,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            coupled_decay: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
    pub config: AdamConfig,
}

impl AdamState {
    pub fn new(len: usize, config: AdamConfig) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
            config,
        }
    }
}

pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    lr: f64,
    weight_decay: f64,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters, {} gradients, optimizer state for {}",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    let c = state.config;
    state.t += 1;
    let bc1 = 1.0 - c.beta1.powi(state.t as i32);
    let bc2 = 1.0 - c.beta2.powi(state.t as i32);
    for k in 0..params.len() {
        let mut g = grads[k];
        if c.coupled_decay {
            g += weight_decay * params[k];
        } else {
            params[k] -= lr * weight_decay * params[k];
        }
        state.m[k] = c.beta1 * state.m[k] + (1.0 - c.beta1) * g;
        state.v[k] = c.beta2 * state.v[k] + (1.0 - c.beta2) * g * g;
        let mhat = state.m[k] / bc1;
        let vhat = state.v[k] / bc2;
        params[k] -= lr * mhat / (vhat.sqrt() + c.eps);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_zero_decay_is_a_no_op() {
        let mut p = vec![1.0, -2.0, 0.5];
        let mut s = AdamState::new(3, AdamConfig::default());
        for _ in 0..10 {
            adam_step(&mut p, &[0.0; 3], &mut s, 0.1, 0.0).unwrap();
        }
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn constant_gradient_steps_approach_lr() {
        let mut p = vec![0.0];
        let mut s = AdamState::new(1, AdamConfig::default());
        let lr = 0.01;
        let mut last = 0.0;
        for _ in 0..5000 {
            let before = p[0];
            adam_step(&mut p, &[3.7], &mut s, lr, 0.0).unwrap();
            last = before - p[0];
            assert!(last <= lr * (1.0 + 1e-9));
        }
        assert!((last - lr).abs() < 1e-6 * lr);
    }

    #[test]
    fn decoupled_decay_alone_shrinks_geometrically() {
        let config = AdamConfig {
            coupled_decay: false,
            ..AdamConfig::default()
        };
        let mut p = vec![2.0, -4.0];
        let mut s = AdamState::new(2, config);
        adam_step(&mut p, &[0.0; 2], &mut s, 0.1, 0.5).unwrap();
        assert_eq!(p, vec![2.0 * 0.95, -4.0 * 0.95]);
        adam_step(&mut p, &[0.0; 2], &mut s, 0.1, 0.5).unwrap();
        assert!((p[0] - 2.0 * 0.95 * 0.95).abs() < 1e-15);
    }

    #[test]
    fn coupled_decay_pulls_towards_zero() {
        let mut p = vec![2.0, -4.0];
        let mut s = AdamState::new(2, AdamConfig::default());
        for _ in 0..100 {
            adam_step(&mut p, &[0.0; 2], &mut s, 0.01, 5e-4).unwrap();
        }
        assert!(p[0] < 2.0 && p[0] > 0.0 && p[1] > -4.0 && p[1] < 0.0);
    }

    #[test]
    fn length_mismatch() {
        let mut s = AdamState::new(2, AdamConfig::default());
        assert!(adam_step(&mut [0.0; 2], &[0.0; 3], &mut s, 0.1, 0.0).is_err());
    }
}
