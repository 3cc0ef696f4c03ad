use haarlap::dense::{skew_symmetrize, symmetrize};
use haarlap::denoise::denoise;
use haarlap::generators::{random_geometric, GeoGraphParams};
use haarlap::io::{load_edge_list, read_mtx, write_edge_list, write_mtx_dense, LoadOptions};
use haarlap::laplacian::{
    hermitian_matrix, haar_hermitian, haar_inverse, laplacian, magnetic_hermitian, sign_magnetic_hermitian,
};
use haarlap::learn::{forward, propagation_matrix, propagation_matrix_with, HaarNetModel, ModelShape, Task};
use haarlap::spectral::{gft, hermitian_eig, hermitian_eig_with, igft, EigenMethod};
use haarlap::{Complex64, Construction, DenseComplex, DirectedGraph, LaplacianKind};
use proptest::prelude::*;

/// `(n, triples)` with weights in `±[0.1, 3]`.
fn digraph(max_n: usize, density: f64) -> impl Strategy<Value = DirectedGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::option::weighted(density, (0.1f64..3.0, any::<bool>())), n * n).prop_map(
            move |cells| {
                let t: Vec<(usize, usize, f64)> = cells
                    .iter()
                    .enumerate()
                    .filter_map(|(k, c)| {
                        let (u, v) = (k / n, k % n);
                        c.filter(|_| u != v).map(|(w, neg)| (u, v, if neg { -w } else { w }))
                    })
                    .collect();
                DirectedGraph::from_triples(n, &t).unwrap()
            },
        )
    })
}

fn kinds() -> impl Strategy<Value = Construction> {
    prop_oneof![
        Just(Construction::Haar),
        (0.0f64..1.0).prop_map(|q| Construction::Magnetic { q }),
        Just(Construction::SignMagnetic),
    ]
}

fn signal(n: usize, seed: u64) -> Vec<f64> {
    (0..n).map(|k| ((k as f64 + 1.0) * (seed as f64 + 0.37)).sin()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacians_are_psd_and_normalized_spectra_lie_in_0_2(g in digraph(14, 0.3), kind in kinds()) {
        let raw = hermitian_eig(&laplacian(&g, LaplacianKind::raw(kind)).unwrap()).unwrap();
        prop_assert!(raw.eigenvalues[0] >= -1e-9);
        prop_assume!(g.isolated_nodes().is_empty());
        // sign-magnetic entries vanish on balanced digons, which can leave zero rows
        if let Ok(l) = laplacian(&g, LaplacianKind::normalized(kind)) {
            let s = hermitian_eig(&l).unwrap();
            prop_assert!(s.eigenvalues[0] >= -1e-9);
            prop_assert!(*s.eigenvalues.last().unwrap() <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn eigensolvers_agree(g in digraph(12, 0.4), kind in kinds()) {
        let l = laplacian(&g, LaplacianKind::raw(kind)).unwrap();
        let scale = l.as_dense().frobenius_norm().max(1.0);
        let a = hermitian_eig_with(&l, EigenMethod::HouseholderQl).unwrap();
        let b = hermitian_eig_with(&l, EigenMethod::Jacobi).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
        for s in [&a, &b] {
            prop_assert!(s.unitarity_error() <= 1e-10);
            prop_assert!(s.max_residual(&l) <= 1e-10 * scale);
        }
    }

    #[test]
    fn haar_map_inverts_on_floats(g in digraph(10, 0.5)) {
        let a = g.adjacency();
        let back = haar_inverse(haar_hermitian(&a).unwrap().as_dense()).unwrap();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        prop_assert!(back.max_abs_diff(&a) <= 1e-14 * scale * 4.0);
    }

    #[test]
    fn single_direction_entries_have_equal_parts(g in digraph(10, 0.3)) {
        let h = hermitian_matrix(&g, Construction::Haar).unwrap();
        for e in g.edges() {
            if !g.has_edge(e.v, e.u) {
                let z = h.get(e.u, e.v);
                prop_assert!((z.re.abs() - z.im.abs()).abs() <= 1e-15 * z.norm());
            }
        }
    }

    #[test]
    fn skew_symmetric_input_zeroes_the_magnetic_kinds(vals in prop::collection::vec(-4.0f64..4.0, 36)) {
        let n = 6;
        let a = DenseComplex::from_fn(n, n, |u, v| {
            let x = if u < v { vals[u * n + v] } else if u > v { -vals[v * n + u] } else { 0.0 };
            Complex64::new(x, 0.0)
        });
        let zero = DenseComplex::zeros(n, n);
        prop_assert_eq!(magnetic_hermitian(&a, 0.3).unwrap().into_dense(), zero.clone());
        prop_assert_eq!(sign_magnetic_hermitian(&a).unwrap().into_dense(), zero);
        let h = haar_hermitian(&a).unwrap();
        let want = skew_symmetrize(&a).unwrap().scale(Complex64::new(0.0, 1.0));
        prop_assert!(h.as_dense().max_abs_diff(&want) == 0.0);
        prop_assert!(symmetrize(&a).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn gft_roundtrip_and_denoise_contracts(g in digraph(12, 0.3), kind in kinds(), seed in 0u64..1000, m in 1usize..12) {
        let s = hermitian_eig(&laplacian(&g, LaplacianKind::raw(kind)).unwrap()).unwrap();
        let x: Vec<Complex64> = signal(g.n(), seed).into_iter().map(|v| Complex64::new(v, -v / 2.0)).collect();
        let back = igft(&s, &gft(&s, &x).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
        let z = signal(g.n(), seed);
        let est = denoise(&s, &z, m.min(g.n())).unwrap();
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!(norm(&est) <= norm(&z) * (1.0 + 1e-12));
    }

    #[test]
    fn propagation_is_scale_invariant_with_scaled_self_loops(g in digraph(10, 0.3), c in 0.1f64..50.0, kind in prop_oneof![Just(Construction::Haar), Just(Construction::SignMagnetic)]) {
        let p = propagation_matrix_with(&g, kind, 1.0).unwrap().to_dense();
        let q = propagation_matrix_with(&g.scaled(c).unwrap(), kind, c).unwrap().to_dense();
        prop_assert!(p.max_abs_diff(&q) <= 1e-10);
    }

    #[test]
    fn symmetric_graphs_give_identical_networks(g in digraph(9, 0.3), q in 0.0f64..1.0, seed in 0u64..100) {
        let mut t = Vec::new();
        for e in g.edges() {
            if e.u < e.v {
                t.push((e.u, e.v, e.w.abs()));
                t.push((e.v, e.u, e.w.abs()));
            }
        }
        let sym = DirectedGraph::from_triples(g.n(), &t).unwrap();
        let ph = propagation_matrix(&sym, Construction::Haar).unwrap();
        let pm = propagation_matrix(&sym, Construction::Magnetic { q }).unwrap();
        prop_assert!(ph.to_dense().max_abs_diff(&pm.to_dense()) <= 1e-10);
        let shape = ModelShape { construction: Construction::Haar, task: Task::ThreeClass, in_dim: 2, d: 3, layers: 2, dropout: 0.0 };
        let model = HaarNetModel::init(shape, seed).unwrap();
        let x = signal(2 * g.n(), seed);
        let pairs: Vec<(usize, usize)> = (0..g.n()).map(|u| (u, (u + 1) % g.n())).collect();
        let (za, _) = forward(&model, &ph, &x, &pairs, None).unwrap();
        let (zb, _) = forward(&model, &pm, &x, &pairs, None).unwrap();
        for (a, b) in za.iter().zip(&zb) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn files_roundtrip_exactly(g in digraph(10, 0.3), kind in kinds()) {
        let dir = tempfile::tempdir().unwrap();
        let l = laplacian(&g, LaplacianKind::raw(kind)).unwrap();
        let path = dir.path().join("l.mtx");
        write_mtx_dense(&path, l.as_dense()).unwrap();
        let (back, _) = read_mtx(&path).unwrap();
        prop_assert_eq!(&back.to_dense(), l.as_dense());

        // an edge list without edges is rejected on load
        prop_assume!(g.edge_count() > 0);
        let path = dir.path().join("g.csv");
        write_edge_list(&path, &g).unwrap();
        let loaded = load_edge_list(&path, LoadOptions::default()).unwrap();
        // ids are remapped in first-appearance order; compare through the id map
        let ids: Vec<usize> = loaded.ids.iter().map(|s| s.parse().unwrap()).collect();
        let mut a: Vec<(usize, usize, u64)> = g.edges().iter().map(|e| (e.u, e.v, e.w.to_bits())).collect();
        let mut b: Vec<(usize, usize, u64)> =
            loaded.graph.edges().iter().map(|e| (ids[e.u], ids[e.v], e.w.to_bits())).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn geometric_graphs_are_reproducible_and_grow_with_radius(seed in 0u64..500, n in 5usize..60, p in 0.0f64..1.0, r1 in 0.0f64..0.8, dr in 0.0f64..0.5) {
        let params = GeoGraphParams { n, r: r1, p, w_min: 0.8, w_max: 1.2, seed };
        let a = random_geometric(&params).unwrap();
        prop_assert_eq!(&a, &random_geometric(&params).unwrap());
        let b = random_geometric(&GeoGraphParams { r: r1 + dr, ..params }).unwrap();
        prop_assert_eq!(&a.coords, &b.coords);
        let eb = b.graph.edge_set();
        prop_assert!(a.graph.edge_set().is_subset(&eb));
    }
}
