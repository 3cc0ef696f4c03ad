//! Test graphs: the directed cycle, the three-cluster G15 graphs and random
//! geometric digraphs, plus the plane signal used for denoising.

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::rng::{stream_rng, Stream};

/// Edges `(u, u+1 mod n)` with weight 1. At `n = 2` this is a digon.
pub fn directed_cycle(n: usize) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a directed cycle needs at least 2 nodes, got {n}"
        )));
    }
    DirectedGraph::new(n, (0..n).map(|u| Edge::new(u, (u + 1) % n, 1.0)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum G15Variant {
    A,
    B,
    C,
}

impl FromStr for G15Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(G15Variant::A),
            "B" => Ok(G15Variant::B),
            "C" => Ok(G15Variant::C),
            _ => Err(Error::InvalidParameter(format!(
                "unknown G15 variant '{s}' (expected A, B or C)"
            ))),
        }
    }
}

/// Three 5-node clusters `{0..4}, {5..9}, {10..14}`, complete with digons
/// inside, joined by directed edges between nodes 0, 5 and 10:
/// A has `0→5, 5→10`; B adds `0→10`; C closes the cycle with `10→0`.
pub fn g15(variant: G15Variant) -> DirectedGraph {
    let mut edges = Vec::with_capacity(63);
    for cluster in 0..3 {
        let base = 5 * cluster;
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    edges.push(Edge::new(base + i, base + j, 1.0));
                }
            }
        }
    }
    let inter: &[(usize, usize)] = match variant {
        G15Variant::A => &[(0, 5), (5, 10)],
        G15Variant::B => &[(0, 5), (5, 10), (0, 10)],
        G15Variant::C => &[(0, 5), (5, 10), (10, 0)],
    };
    edges.extend(inter.iter().map(|&(u, v)| Edge::new(u, v, 1.0)));
    DirectedGraph::new(15, edges).expect("G15 is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoGraphParams {
    pub n: usize,
    pub r: f64,
    /// Probability that a connected pair becomes a digon.
    pub p: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub seed: u64,
}

impl GeoGraphParams {
    /// The denoising setup: `r = 2/√n`, weights in `[0.8, 1.2]`.
    pub fn denoising(n: usize, p: f64, seed: u64) -> Self {
        GeoGraphParams {
            n,
            r: 2.0 / (n as f64).sqrt(),
            p,
            w_min: 0.8,
            w_max: 1.2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("geometric graph needs n >= 1".into());
        }
        if !self.r.is_finite() || self.r < 0.0 {
            return bad(format!("radius must be finite and >= 0, got {}", self.r));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("digon probability {} outside [0,1]", self.p));
        }
        if !self.w_min.is_finite() || !self.w_max.is_finite() || self.w_min > self.w_max {
            return bad(format!("bad weight range [{}, {}]", self.w_min, self.w_max));
        }
        if self.w_min <= 0.0 && self.w_max >= 0.0 {
            return bad(format!(
                "weight range [{}, {}] contains 0",
                self.w_min, self.w_max
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    pub graph: DirectedGraph,
    pub coords: Vec<(f64, f64)>,
}

/// Uniform points in the unit square; each pair within distance `r` becomes
/// a digon with probability `p`, otherwise a single edge of random
/// direction. Every edge weight is drawn independently from
/// `U[w_min, w_max]`.
///
/// All random draws for a pair happen whether or not the pair is connected,
/// so for a fixed seed the node placement and pair outcomes do not depend on
/// `r` and the edge set only grows with it.
pub fn random_geometric(params: &GeoGraphParams) -> Result<GeometricGraph> {
    params.validate()?;
    let mut rng = stream_rng(params.seed, Stream::Graph, &[]);
    let n = params.n;
    let coords: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let span = params.w_max - params.w_min;
    let r2 = params.r * params.r;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let digon = rng.random::<f64>() < params.p;
            let forward = rng.random_bool(0.5);
            let w1 = params.w_min + span * rng.random::<f64>();
            let w2 = params.w_min + span * rng.random::<f64>();
            let (dx, dy) = (coords[i].0 - coords[j].0, coords[i].1 - coords[j].1);
            if dx * dx + dy * dy > r2 {
                continue;
            }
            if digon {
                edges.push(Edge::new(i, j, w1));
                edges.push(Edge::new(j, i, w2));
            } else if forward {
                edges.push(Edge::new(i, j, w1));
            } else {
                edges.push(Edge::new(j, i, w1));
            }
        }
    }
    Ok(GeometricGraph {
        graph: DirectedGraph::new(n, edges)?,
        coords,
    })
}

/// `z(u) = 10 + 10 x(u) + 5 y(u)`.
pub fn plane_signal(coords: &[(f64, f64)]) -> Vec<f64> {
    coords.iter().map(|&(x, y)| 10.0 + 10.0 * x + 5.0 * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::{laplacian, Construction, LaplacianKind};
    use crate::spectral::{cycle_frequencies, hermitian_eig};
    use crate::Complex64;

    #[test]
    fn cycle_adjacency_is_the_shift() {
        let a = directed_cycle(4).unwrap().adjacency();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if c == (r + 1) % 4 { 1.0 } else { 0.0 };
                assert_eq!(a.get(r, c), Complex64::new(expected, 0.0));
            }
        }
        let two = directed_cycle(2).unwrap();
        assert!(two.has_edge(0, 1) && two.has_edge(1, 0));
        assert!(directed_cycle(1).is_err());
    }

    #[test]
    fn cycle_matches_closed_form() {
        for n in [3, 5, 8, 13] {
            let l = laplacian(&directed_cycle(n).unwrap(), LaplacianKind::raw(Construction::Haar))
                .unwrap();
            let got = hermitian_eig(&l).unwrap().eigenvalues;
            let mut want = cycle_frequencies(n).unwrap();
            want.sort_by(f64::total_cmp);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn g15_counts() {
        let a = g15(G15Variant::A);
        assert_eq!(a.n(), 15);
        assert_eq!(a.edge_count(), 62);
        assert_eq!(g15(G15Variant::B).edge_count(), 63);
        let c = g15(G15Variant::C);
        assert_eq!(c.edge_count(), 63);
        assert!(c.has_edge(0, 5) && c.has_edge(5, 10) && c.has_edge(10, 0));
        assert!(!c.has_edge(5, 0));
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert!(a.has_edge(u + 10, v + 10));
                }
            }
        }
        assert_eq!("b".parse::<G15Variant>().unwrap(), G15Variant::B);
        assert!("D".parse::<G15Variant>().is_err());
    }

    #[test]
    fn g15_spectra_are_bounded() {
        for variant in [G15Variant::A, G15Variant::B, G15Variant::C] {
            let g = g15(variant);
            let (out, inn) = g.abs_out_in_degrees();
            let max_deg = out.iter().zip(&inn).map(|(a, b)| a + b).fold(0.0, f64::max);
            for c in [
                Construction::Haar,
                Construction::magnetic(0.125).unwrap(),
                Construction::SignMagnetic,
            ] {
                let s = hermitian_eig(&laplacian(&g, LaplacianKind::raw(c)).unwrap()).unwrap();
                assert!(s.eigenvalues[0] > -1e-9);
                assert!(*s.eigenvalues.last().unwrap() <= 2.0 * max_deg);
            }
        }
    }

    fn params(n: usize, r: f64, p: f64, seed: u64) -> GeoGraphParams {
        GeoGraphParams {
            n,
            r,
            p,
            w_min: 0.8,
            w_max: 1.2,
            seed,
        }
    }

    #[test]
    fn geometric_is_reproducible() {
        let a = random_geometric(&params(80, 0.2, 0.5, 9)).unwrap();
        let b = random_geometric(&params(80, 0.2, 0.5, 9)).unwrap();
        assert_eq!(a, b);
        let c = random_geometric(&params(80, 0.2, 0.5, 10)).unwrap();
        assert_ne!(a.coords, c.coords);
    }

    #[test]
    fn geometric_edge_rules() {
        let g = random_geometric(&params(60, 0.0, 0.5, 1)).unwrap();
        assert_eq!(g.graph.edge_count(), 0);

        let g = random_geometric(&params(60, 0.3, 1.0, 2)).unwrap();
        assert!(g.graph.edge_count() > 0);
        for e in g.graph.edges() {
            assert!(g.graph.has_edge(e.v, e.u));
            assert!((0.8..=1.2).contains(&e.w));
            let (dx, dy) = (g.coords[e.u].0 - g.coords[e.v].0, g.coords[e.u].1 - g.coords[e.v].1);
            assert!(dx * dx + dy * dy <= 0.09);
        }

        let g = random_geometric(&params(60, 0.3, 0.0, 3)).unwrap();
        for e in g.graph.edges() {
            assert!(!g.graph.has_edge(e.v, e.u));
        }
    }

    #[test]
    fn geometric_edges_grow_with_radius() {
        let mut last: Option<std::collections::HashSet<(usize, usize)>> = None;
        for r in [0.05, 0.1, 0.15, 0.3, 0.8, 1.5] {
            let g = random_geometric(&params(70, r, 0.4, 17)).unwrap();
            let set = g.graph.edge_set();
            if let Some(prev) = &last {
                assert!(prev.is_subset(&set));
            }
            last = Some(set);
        }
    }

    #[test]
    fn digon_weights_are_uncorrelated() {
        let g = random_geometric(&params(300, 0.15, 1.0, 4)).unwrap();
        let mut pairs = Vec::new();
        for e in g.graph.edges() {
            if e.u < e.v {
                let back = g.graph.edges().iter().find(|f| f.u == e.v && f.v == e.u).unwrap();
                pairs.push((e.w, back.w));
            }
        }
        assert!(pairs.len() >= 1000, "only {} digons", pairs.len());
        let pairs = &pairs[..1000];
        let mean = |f: &dyn Fn(&(f64, f64)) -> f64| pairs.iter().map(f).sum::<f64>() / 1000.0;
        let (mx, my) = (mean(&|p| p.0), mean(&|p| p.1));
        let cov = mean(&|p| (p.0 - mx) * (p.1 - my));
        let (vx, vy) = (mean(&|p| (p.0 - mx).powi(2)), mean(&|p| (p.1 - my).powi(2)));
        assert!((cov / (vx * vy).sqrt()).abs() < 0.1);
    }

    #[test]
    fn invalid_params() {
        assert!(random_geometric(&params(0, 0.1, 0.5, 0)).is_err());
        assert!(random_geometric(&params(5, -0.1, 0.5, 0)).is_err());
        assert!(random_geometric(&params(5, 0.1, 1.5, 0)).is_err());
        let mut p = params(5, 0.1, 0.5, 0);
        p.w_min = 2.0;
        assert!(random_geometric(&p).is_err());
        p.w_min = -1.0;
        assert!(random_geometric(&p).is_err());
    }

    #[test]
    fn plane_signal_values() {
        assert_eq!(plane_signal(&[(0.0, 0.0), (1.0, 1.0), (0.5, 0.2)]), vec![10.0, 25.0, 16.0]);
    }
}
