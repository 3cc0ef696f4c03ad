//! Weighted directed graphs as validated edge lists.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dense::DenseComplex;
use crate::error::{Error, Result};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Edge { u, v, w }
    }
}

/// A simple weighted digraph: no self-loops, at most one edge per ordered
/// pair, nonzero finite weights (negative allowed).
///
/// The edge list is the canonical form. Matrices are derived from it and
/// never written back.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut duplicates = Vec::new();
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{}) out of range for n={n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.u)));
            }
            if e.w == 0.0 || !e.w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{}) has weight {}; weights must be finite and nonzero",
                    e.u, e.v, e.w
                )));
            }
            if !seen.insert((e.u, e.v)) {
                duplicates.push((e.u, e.v));
            }
        }
        if !duplicates.is_empty() {
            return Err(Error::DuplicateEdges(duplicates));
        }
        Ok(DirectedGraph { n, edges })
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(
            n,
            triples.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| e.u == u && e.v == v)
    }

    /// Set of ordered pairs present, for repeated membership queries.
    pub fn edge_set(&self) -> HashSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    /// Same graph with every weight passed through `f`.
    pub fn map_weights(&self, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u, e.v, f(e.w)))
            .collect();
        Self::new(self.n, edges)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        self.map_weights(|w| c * w)
    }

    pub fn is_symmetric(&self) -> bool {
        let by_pair: std::collections::HashMap<(usize, usize), f64> =
            self.edges.iter().map(|e| ((e.u, e.v), e.w)).collect();
        self.edges
            .iter()
            .all(|e| by_pair.get(&(e.v, e.u)) == Some(&e.w))
    }

    /// Number of nodes touched by no edge in either direction.
    pub fn isolated_nodes(&self) -> Vec<usize> {
        let mut touched = vec![false; self.n];
        for e in &self.edges {
            touched[e.u] = true;
            touched[e.v] = true;
        }
        (0..self.n).filter(|&u| !touched[u]).collect()
    }

    /// Weakly connected components as a label per node (labels are the
    /// smallest node id of each component).
    pub fn weak_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut smallest = vec![usize::MAX; self.n];
        for u in 0..self.n {
            let r = uf.find(u);
            smallest[r] = smallest[r].min(u);
        }
        (0..self.n).map(|u| smallest[uf.find(u)]).collect()
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().iter().all(|&c| c == 0)
    }

    /// Dense adjacency `A[u][v] = w_uv`, purely real.
    pub fn adjacency(&self) -> DenseComplex {
        let mut a = DenseComplex::zeros(self.n, self.n);
        for e in &self.edges {
            a.set(e.u, e.v, Complex64::new(e.w, 0.0));
        }
        a
    }

    /// Sum of `|w|` over outgoing and incoming edges, per node.
    pub fn abs_out_in_degrees(&self) -> (Vec<f64>, Vec<f64>) {
        let mut out = vec![0.0; self.n];
        let mut inc = vec![0.0; self.n];
        for e in &self.edges {
            out[e.u] += e.w.abs();
            inc[e.v] += e.w.abs();
        }
        (out, inc)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when `a` and `b` were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
