use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Task;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge, UnionFind};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Split {
    Train,
    Val,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitFractions {
    pub val: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    /// 80 / 5 / 15.
    fn default() -> Self {
        SplitFractions { val: 0.05, test: 0.15 }
    }
}

impl SplitFractions {
    fn validate(&self) -> Result<()> {
        if !(self.val >= 0.0 && self.test >= 0.0 && self.val + self.test < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bad split fractions val={} test={}",
                self.val, self.test
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSample {
    pub u: usize,
    pub v: usize,
    /// Class id for the classification tasks, weight for regression.
    pub label: f64,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskDataset {
    pub task: Task,
    pub samples: Vec<EdgeSample>,
    /// Graph seen by the network: train-split positive edges (and, for the
    /// three-class task, every digon edge).
    pub train_graph: DirectedGraph,
    /// Positive units pinned to train because they carry a spanning-forest edge.
    pub protected: usize,
    /// Edges left out of the three-class pools because they sit in a digon.
    pub excluded_digon_edges: usize,
}

impl TaskDataset {
    pub fn pairs(&self, split: Split) -> Vec<(usize, usize)> {
        self.samples.iter().filter(|s| s.split == split).map(|s| (s.u, s.v)).collect()
    }

    pub fn labels(&self, split: Split) -> Vec<f64> {
        self.samples.iter().filter(|s| s.split == split).map(|s| s.label).collect()
    }

    pub fn count(&self, split: Split) -> usize {
        self.samples.iter().filter(|s| s.split == split).count()
    }
}

/// Assigns `val`, `test`, then `train` to shuffled items.
fn split_counts(total: usize, f: SplitFractions) -> (usize, usize) {
    let val = (f.val * total as f64).round() as usize;
    let test = ((f.test * total as f64).round() as usize).min(total - val.min(total));
    (val.min(total), test)
}

fn assign(order: &[usize], val: usize, test: usize, out: &mut [Split]) {
    for (rank, &i) in order.iter().enumerate() {
        out[i] = if rank < val {
            Split::Val
        } else if rank < val + test {
            Split::Test
        } else {
            Split::Train
        };
    }
}

/// Spanning forest of the underlying undirected graph, as edge indices,
/// built over a shuffled edge order.
fn spanning_forest(g: &DirectedGraph, rng: &mut impl Rng) -> HashSet<usize> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut uf = UnionFind::new(g.n());
    order
        .into_iter()
        .filter(|&i| {
            let e = g.edges()[i];
            uf.union(e.u, e.v)
        })
        .collect()
}

/// Draws `count` distinct pairs `(u, v)`, `u ≠ v`, accepted by `ok`, with
/// `available` such pairs in total. Unordered sampling keeps `u < v` before
/// a random orientation.
fn sample_pairs(
    n: usize,
    count: usize,
    available: usize,
    unordered: bool,
    ok: impl Fn(usize, usize) -> bool,
    rng: &mut impl Rng,
) -> Vec<(usize, usize)> {
    let canon = |u: usize, v: usize| if unordered { (u.min(v), u.max(v)) } else { (u, v) };
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(count);
    if available >= 2 * count {
        let mut seen = HashSet::with_capacity(count);
        while chosen.len() < count {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u != v && ok(u, v) && seen.insert(canon(u, v)) {
                chosen.push(canon(u, v));
            }
        }
    } else {
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && (!unordered || u < v) && ok(u, v))
            .collect();
        all.shuffle(rng);
        all.truncate(count);
        chosen = all;
    }
    if unordered {
        for p in &mut chosen {
            if rng.random_bool(0.5) {
                *p = (p.1, p.0);
            }
        }
    }
    chosen
}

pub fn build_task_dataset(g: &DirectedGraph, task: Task, seed: u64, fold: usize) -> Result<TaskDataset> {
    build_task_dataset_with(g, task, seed, fold, SplitFractions::default())
}

/// Builds samples and splits for one fold. Every fold is an independent
/// random split seeded by `(seed, fold)`; negatives are resampled per fold.
///
/// Positive units (an edge, or for the three-class task an edge together
/// with its reversed pair) are split into val/test/train; units holding an
/// edge of a seed-shuffled spanning forest are always train. Negatives are
/// split separately in the same proportions.
pub fn build_task_dataset_with(
    g: &DirectedGraph,
    task: Task,
    seed: u64,
    fold: usize,
    fractions: SplitFractions,
) -> Result<TaskDataset> {
    fractions.validate()?;
    let n = g.n();
    let mut split_rng = stream_rng(seed, Stream::Split, &[fold as u64]);
    let mut neg_rng = stream_rng(seed, Stream::Negatives, &[fold as u64]);
    let edge_set = g.edge_set();
    let tree = spanning_forest(g, &mut split_rng);
    if !g.is_weakly_connected() {
        log::warn!("graph is not weakly connected; protecting a spanning forest per component");
    }

    // positive units: indices into g.edges()
    let units: Vec<usize> = match task {
        Task::ThreeClass => (0..g.edge_count())
            .filter(|&i| {
                let e = g.edges()[i];
                !edge_set.contains(&(e.v, e.u))
            })
            .collect(),
        _ => (0..g.edge_count()).collect(),
    };
    let excluded_digon_edges = g.edge_count() - units.len();
    if task == Task::ThreeClass && excluded_digon_edges > 0 {
        log::info!("{excluded_digon_edges} digon edges excluded from three-class samples");
    }
    if units.is_empty() {
        return Err(Error::InvalidGraph(format!("no usable edges for the {task} task")));
    }

    let mut unit_split = vec![Split::Train; units.len()];
    let mut free: Vec<usize> = (0..units.len()).filter(|&k| !tree.contains(&units[k])).collect();
    let protected = units.len() - free.len();
    free.shuffle(&mut split_rng);
    let (val, test) = split_counts(units.len(), fractions);
    if val + test > free.len() {
        log::warn!(
            "only {} unprotected units for {} val/test slots",
            free.len(),
            val + test
        );
    }
    let val_n = val.min(free.len());
    let test_n = test.min(free.len() - val_n);
    assign(&free, val_n, test_n, &mut unit_split);

    let mut samples = Vec::new();
    for (k, &i) in units.iter().enumerate() {
        let e = g.edges()[i];
        let split = unit_split[k];
        match task {
            Task::Existence => samples.push(EdgeSample { u: e.u, v: e.v, label: 1.0, split }),
            Task::WeightPrediction => samples.push(EdgeSample { u: e.u, v: e.v, label: e.w, split }),
            Task::ThreeClass => {
                samples.push(EdgeSample { u: e.u, v: e.v, label: 0.0, split });
                samples.push(EdgeSample { u: e.v, v: e.u, label: 1.0, split });
            }
        }
    }

    let (negatives, label) = match task {
        Task::ThreeClass => {
            let pair_count = g
                .edges()
                .iter()
                .filter(|e| !(edge_set.contains(&(e.v, e.u)) && e.u > e.v))
                .count();
            let available = n * (n - 1) / 2 - pair_count;
            if available < units.len() {
                return Err(Error::InvalidGraph(format!(
                    "{available} unconnected pairs for {} negatives",
                    units.len()
                )));
            }
            let ok = |u, v| !edge_set.contains(&(u, v)) && !edge_set.contains(&(v, u));
            (sample_pairs(n, units.len(), available, true, ok, &mut neg_rng), 2.0)
        }
        _ => {
            let available = n * (n - 1) - g.edge_count();
            if available < units.len() {
                return Err(Error::InvalidGraph(format!(
                    "{available} non-edges for {} negatives",
                    units.len()
                )));
            }
            let ok = |u, v| !edge_set.contains(&(u, v));
            (sample_pairs(n, units.len(), available, false, ok, &mut neg_rng), 0.0)
        }
    };
    let mut neg_split = vec![Split::Train; negatives.len()];
    let mut order: Vec<usize> = (0..negatives.len()).collect();
    order.shuffle(&mut split_rng);
    let (val, test) = split_counts(negatives.len(), fractions);
    assign(&order, val, test, &mut neg_split);
    for (&(u, v), &split) in negatives.iter().zip(&neg_split) {
        samples.push(EdgeSample { u, v, label, split });
    }

    let mut train_edges: Vec<Edge> = units
        .iter()
        .zip(&unit_split)
        .filter(|(_, &s)| s == Split::Train)
        .map(|(&i, _)| g.edges()[i])
        .collect();
    if task == Task::ThreeClass {
        train_edges.extend(g.edges().iter().filter(|e| edge_set.contains(&(e.v, e.u))).copied());
    }
    Ok(TaskDataset {
        task,
        samples,
        train_graph: DirectedGraph::new(n, train_edges)?,
        protected,
        excluded_digon_edges,
    })
}
