use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightNormalization {
    /// Weights unchanged.
    None,
    /// `w ↦ exp(−1/w)`, into `(0, 1)`; positive weights only.
    ExpInverse,
    /// `w ↦ w / max|w|`, into `[−1, 1]`.
    LinearSym,
}

impl fmt::Display for WeightNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightNormalization::None => "none",
            WeightNormalization::ExpInverse => "exp-inverse",
            WeightNormalization::LinearSym => "linear-sym",
        })
    }
}

impl FromStr for WeightNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "none" => Ok(WeightNormalization::None),
            "exp-inverse" | "expinverse" | "exp" => Ok(WeightNormalization::ExpInverse),
            "linear-sym" | "linearsym" | "linear" => Ok(WeightNormalization::LinearSym),
            _ => Err(Error::InvalidParameter(format!(
                "unknown normalization {s:?} (expected none, exp-inverse or linear-sym)"
            ))),
        }
    }
}

pub fn normalize_weights(g: &DirectedGraph, method: WeightNormalization) -> Result<DirectedGraph> {
    match method {
        WeightNormalization::None => Ok(g.clone()),
        WeightNormalization::ExpInverse => {
            if let Some(e) = g.edges().iter().find(|e| e.w <= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "exp-inverse normalization needs positive weights; edge ({},{}) has {}",
                    e.u, e.v, e.w
                )));
            }
            g.map_weights(|w| (-1.0 / w).exp())
        }
        WeightNormalization::LinearSym => {
            let max = g.edges().iter().map(|e| e.w.abs()).fold(0.0, f64::max);
            if max == 0.0 {
                return Ok(g.clone());
            }
            g.map_weights(|w| w / max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = DirectedGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 7934.0)]).unwrap();
        let n = normalize_weights(&g, WeightNormalization::ExpInverse).unwrap();
        assert!((n.edges()[0].w - 0.36788).abs() < 1e-5);
        assert!((n.edges()[1].w - 0.99987).abs() < 1e-5);
        assert!(n.edges().iter().all(|e| e.w > 0.0 && e.w < 1.0));

        let b = DirectedGraph::from_triples(3, &[(0, 1, -10.0), (1, 2, 5.0), (2, 0, 10.0)]).unwrap();
        let n = normalize_weights(&b, WeightNormalization::LinearSym).unwrap();
        let ws: Vec<f64> = n.edges().iter().map(|e| e.w).collect();
        assert_eq!(ws, vec![-1.0, 0.5, 1.0]);
        assert!(normalize_weights(&b, WeightNormalization::ExpInverse).is_err());
        assert_eq!(normalize_weights(&b, WeightNormalization::None).unwrap(), b);
        assert_eq!("exp-inverse".parse::<WeightNormalization>().unwrap(), WeightNormalization::ExpInverse);
        assert!("log".parse::<WeightNormalization>().is_err());
    }
}
