use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    /// Standardized absolute in- and out-degree (`C = 2`).
    Degree,
    /// One-hot node identity (`C = n`); small graphs only.
    Identity,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Degree => "degree",
            FeatureKind::Identity => "identity",
        })
    }
}

impl FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "degree" => Ok(FeatureKind::Degree),
            "identity" => Ok(FeatureKind::Identity),
            _ => Err(Error::InvalidParameter(format!(
                "unknown feature kind {s:?} (expected degree or identity)"
            ))),
        }
    }
}

/// Row-major `n × C` features and `C`.
pub fn node_features(g: &DirectedGraph, kind: FeatureKind) -> (Vec<f64>, usize) {
    let n = g.n();
    match kind {
        FeatureKind::Identity => {
            let mut x = vec![0.0; n * n];
            for i in 0..n {
                x[i * n + i] = 1.0;
            }
            (x, n)
        }
        FeatureKind::Degree => {
            let (out, inn) = g.abs_out_in_degrees();
            let standardize = |v: &[f64]| -> Vec<f64> {
                let mean = v.iter().sum::<f64>() / n as f64;
                let std = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64).sqrt();
                v.iter()
                    .map(|x| if std > 0.0 { (x - mean) / std } else { x - mean })
                    .collect()
            };
            let (a, b) = (standardize(&inn), standardize(&out));
            let mut x = Vec::with_capacity(2 * n);
            for i in 0..n {
                x.push(a[i]);
                x.push(b[i]);
            }
            (x, 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_features_are_standardized() {
        let g = DirectedGraph::from_triples(4, &[(0, 1, 2.0), (0, 2, -1.0), (3, 0, 1.0)]).unwrap();
        let (x, c) = node_features(&g, FeatureKind::Degree);
        assert_eq!(c, 2);
        for col in 0..2 {
            let v: Vec<f64> = (0..4).map(|i| x[i * 2 + col]).collect();
            let mean = v.iter().sum::<f64>() / 4.0;
            let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / 4.0;
            assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
        }
        // node 0 has the largest out-degree
        assert!(x[1] > x[3] && x[1] > x[5]);
    }

    #[test]
    fn identity_and_constant_columns() {
        let g = DirectedGraph::new(3, vec![]).unwrap();
        let (x, c) = node_features(&g, FeatureKind::Identity);
        assert_eq!(c, 3);
        assert_eq!(x, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let (x, _) = node_features(&g, FeatureKind::Degree);
        assert!(x.iter().all(|&v| v == 0.0));
    }
}
