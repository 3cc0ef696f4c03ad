use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::laplacian::{hermitian_sparse, Construction};
use crate::sparse::SparseComplex;
use crate::Complex64;

/// `P = D̃^{-1/2} H̃ D̃^{-1/2}` where `H̃` is built from `Ã_s = A_s + self_loop·I`
/// and the unchanged antisymmetric part, and `D̃` holds the row sums of `|H̃|`.
///
/// `self_loop = 1` is the usual renormalization; scaling it together with
/// the weights leaves `P` unchanged.
pub fn propagation_matrix_with(
    g: &DirectedGraph,
    construction: Construction,
    self_loop: f64,
) -> Result<SparseComplex> {
    let h = hermitian_sparse(g, construction, self_loop)?;
    let inv_sqrt: Vec<f64> = (0..h.rows())
        .map(|r| {
            let d: f64 = h.row_entries(r).map(|(_, z)| z.norm()).sum();
            if d > 0.0 {
                Ok(1.0 / d.sqrt())
            } else {
                Err(Error::ZeroDegree(r))
            }
        })
        .collect::<Result<_>>()?;
    let triplets: Vec<(usize, usize, Complex64)> = h
        .iter()
        .map(|(r, c, z)| (r, c, z * (inv_sqrt[r] * inv_sqrt[c])))
        .collect();
    SparseComplex::from_triplets(h.rows(), h.cols(), triplets)
}

pub fn propagation_matrix(g: &DirectedGraph, construction: Construction) -> Result<SparseComplex> {
    propagation_matrix_with(g, construction, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_node_is_one() {
        let g = DirectedGraph::new(1, vec![]).unwrap();
        let p = propagation_matrix(&g, Construction::Haar).unwrap();
        assert_eq!(p.get(0, 0), c(1.0, 0.0));
        assert_eq!(p.nnz(), 1);
    }

    #[test]
    fn single_edge_hand_computation() {
        let g = DirectedGraph::from_triples(2, &[(0, 1, 1.0)]).unwrap();
        let p = propagation_matrix(&g, Construction::Haar).unwrap();
        let d = 1.0 + 0.5f64.sqrt();
        assert!((p.get(0, 0) - c(1.0 / d, 0.0)).norm() < 1e-15);
        assert!((p.get(0, 1) - c(0.5 / d, 0.5 / d)).norm() < 1e-15);
        assert!((p.get(1, 0) - c(0.5 / d, -0.5 / d)).norm() < 1e-15);
        assert!(p.hermitian_deviation() == 0.0);
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> DirectedGraph {
        let mut t = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u < v && rng.random_bool(0.4) {
                    let w = rng.random_range(0.5..2.0);
                    if symmetric {
                        t.push((u, v, w));
                        t.push((v, u, w));
                    } else if rng.random_bool(0.5) {
                        t.push((u, v, w));
                    } else {
                        t.push((v, u, w));
                        if rng.random_bool(0.3) {
                            t.push((u, v, rng.random_range(0.5..2.0)));
                        }
                    }
                }
            }
        }
        DirectedGraph::from_triples(n, &t).unwrap()
    }

    #[test]
    fn symmetric_graphs_give_one_real_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 12, true);
            let haar = propagation_matrix(&g, Construction::Haar).unwrap().to_dense();
            let std = propagation_matrix(&g, Construction::Standard).unwrap().to_dense();
            assert!(haar.is_real());
            assert!(haar.max_abs_diff(&std) <= 1e-10);
            for q in [0.05, 0.25, 0.4] {
                let mag = propagation_matrix(&g, Construction::Magnetic { q }).unwrap().to_dense();
                assert!(haar.max_abs_diff(&mag) <= 1e-10);
            }
        }
    }

    #[test]
    fn invariant_under_joint_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 10, false);
            for cst in [0.01, 3.0, 250.0] {
                let base = propagation_matrix_with(&g, Construction::Haar, 1.0).unwrap().to_dense();
                let scaled =
                    propagation_matrix_with(&g.scaled(cst).unwrap(), Construction::Haar, cst)
                        .unwrap()
                        .to_dense();
                assert!(base.max_abs_diff(&scaled) <= 1e-10);
            }
        }
    }

    #[test]
    fn is_hermitian_for_every_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 15, false);
        for k in [Construction::Haar, Construction::Magnetic { q: 0.25 }, Construction::SignMagnetic] {
            let p = propagation_matrix(&g, k).unwrap();
            assert!(p.hermitian_deviation() <= 1e-15);
        }
        assert!(propagation_matrix(&g, Construction::Standard).is_err());
    }
}
