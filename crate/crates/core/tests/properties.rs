use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qcwalk::{
    conditional_distance, eigendecompose, generate, localized_fidelity, qc_distance,
    uhlmann_fidelity, verify_localized_optimality, DensityMatrix, Graph, GraphKind, LocalizedWalk,
    WalkModel,
};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..9).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs
                .zip(mask)
                .filter(|(_, keep)| *keep)
                .map(|(e, _)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (3usize..=max_n)
        .prop_flat_map(|n| (Just(n), 2..n, any::<u64>()))
        .prop_map(|(n, d, seed)| generate(GraphKind::RandomConnected, n, Some(d), seed).unwrap())
}

fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn arb_pure(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_filter_map("nonzero", |raw| {
        let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            raw.iter()
                .map(|&(a, b)| Complex64::new(a, b) / norm)
                .collect()
        })
    })
}

fn arb_simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("nonzero", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-3).then(|| raw.iter().map(|x| x / total).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_structure(g in arb_graph()) {
        let l = g.laplacian();
        let m = l.matrix();
        prop_assert_eq!(m, &m.transpose());
        prop_assert!(m.row_sum().amax() <= 1e-12);
        prop_assert_eq!(l.trace(), -2.0 * g.edge_count() as f64);
        let fiedler = g.fiedler_value().unwrap();
        prop_assert_eq!(fiedler > 1e-9, g.is_connected());
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn random_connected_is_reproducible(n in 3usize..30, seed in any::<u64>(), frac in 0.0f64..1.0) {
        let d = 2 + ((n - 3) as f64 * frac).round() as usize;
        let a = generate(GraphKind::RandomConnected, n, Some(d), seed).unwrap();
        prop_assert_eq!(&a, &generate(GraphKind::RandomConnected, n, Some(d), seed).unwrap());
        prop_assert_eq!(a.degree(1).unwrap(), d);
        prop_assert!(a.is_connected());
    }

    #[test]
    fn decomposition_invariants(g in arb_graph()) {
        let n = g.node_count();
        let l = g.laplacian();
        let s = eigendecompose(&l).unwrap();
        let q = s.eigenvectors();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(s.eigenvalues()));
        prop_assert!((q * lambda * q.transpose() - l.matrix()).amax() <= 1e-9);
        prop_assert!((q.transpose() * q - DMatrix::identity(n, n)).amax() <= 1e-9);
        prop_assert!(s.eigenvalues()[0].abs() <= 1e-9);
        prop_assert!(s.eigenvalues().iter().all(|&v| v <= 1e-9));
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0].abs() <= w[1].abs()));
    }

    #[test]
    fn propagator_laws(g in arb_graph(), t1 in 0.0f64..5.0, t2 in 0.0f64..5.0) {
        let n = g.node_count();
        let s = eigendecompose(&g.laplacian()).unwrap();
        let h1 = s.heat_propagator(t1).unwrap();
        prop_assert!((&h1 * s.heat_propagator(t2).unwrap() - s.heat_propagator(t1 + t2).unwrap()).amax() <= 1e-8);
        prop_assert!(h1.row_sum().add_scalar(-1.0).amax() <= 1e-10);
        prop_assert!(h1.column_sum().add_scalar(-1.0).amax() <= 1e-10);
        prop_assert!(h1.iter().all(|&v| (-1e-10..=1.0 + 1e-10).contains(&v)));

        let u = s.unitary_propagator(t1).unwrap();
        prop_assert!(max_norm(&(&u * u.adjoint() - DMatrix::identity(n, n))) <= 1e-10);
        prop_assert!(max_norm(&(&u * s.unitary_propagator(-t1).unwrap() - DMatrix::identity(n, n))) <= 1e-8);
    }

    #[test]
    fn first_order_heat_expansion(g in arb_graph(), t in 1e-6f64..1e-2) {
        let l = g.laplacian();
        let s = eigendecompose(&l).unwrap();
        let norm = s.eigenvalues().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let linear = DMatrix::identity(g.node_count(), g.node_count()) + l.matrix() * t;
        let err = (s.heat_propagator(t).unwrap() - linear).amax();
        prop_assert!(err <= 2.0 * t * t * norm * norm + 1e-14);
    }

    #[test]
    fn fidelity_against_pure_state(
        (rho, psi) in (2usize..7).prop_flat_map(|n| (arb_simplex(n), arb_pure(n)))
    ) {
        let diag = DensityMatrix::from_diagonal(&rho).unwrap();
        let pure = DensityMatrix::pure(&psi).unwrap();
        let direct: f64 = rho.iter().zip(&psi).map(|(p, a)| p * a.norm_sqr()).sum();
        let f = uhlmann_fidelity(&diag, &pure).unwrap();
        prop_assert!((f - direct).abs() <= 1e-9, "{} vs {}", f, direct);
        prop_assert!((uhlmann_fidelity(&pure, &diag).unwrap() - f).abs() <= 1e-9);
    }

    #[test]
    fn walker_quantities_bounded(g in arb_connected(10), t in 0.0f64..20.0) {
        let s = eigendecompose(&g.laplacian()).unwrap();
        let n = g.node_count();
        for j in 0..n {
            let w = LocalizedWalk::new(&s, j, t).unwrap();
            prop_assert!((0.0..=1.0).contains(&w.fidelity()));
            prop_assert!((0.0..=1.0).contains(&w.classical_fidelity()));
            prop_assert!(w.coherence() >= 0.0 && w.coherence() <= (n - 1) as f64 + 1e-9);
            let norm: f64 = w.quantum.probabilities().sum();
            prop_assert!((norm - 1.0).abs() <= 1e-10);
            let total: f64 = w.classical.values().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn localized_fidelity_matches_uhlmann(g in arb_connected(8), t in 0.0f64..6.0) {
        let s = eigendecompose(&g.laplacian()).unwrap();
        for j in 0..g.node_count() {
            let w = LocalizedWalk::new(&s, j, t).unwrap();
            let full = uhlmann_fidelity(
                &DensityMatrix::from_diagonal(w.classical.values()).unwrap(),
                &DensityMatrix::pure(w.quantum.values()).unwrap(),
            ).unwrap();
            prop_assert!((full - w.fidelity()).abs() <= 1e-9);
        }
    }

    #[test]
    fn short_time_laws(g in arb_connected(12)) {
        let degrees = g.degrees();
        let m = WalkModel::new(g).unwrap();
        let s = m.spectrum();
        for (j, &d) in degrees.iter().enumerate() {
            let d = d as f64;
            let t = 1e-3;
            let dist = conditional_distance(&m, j, t).unwrap();
            prop_assert!((dist / (d * t) - 1.0).abs() <= 0.05);
            let c = qcwalk::coherence(s, j, 1e-4).unwrap();
            prop_assert!((c / (2.0 * d * 1e-4) - 1.0).abs() <= 1e-2);
        }
    }

    #[test]
    fn long_time_laws(g in arb_connected(20)) {
        let m = WalkModel::new(g).unwrap();
        let n = m.node_count() as f64;
        let t = m.long_time();
        let (d, _) = qc_distance(&m, t).unwrap();
        prop_assert!((d - (1.0 - 1.0 / n)).abs() <= 1e-2);
        for j in 0..m.node_count() {
            let long = qcwalk::long_asymptote(&m, j, t).unwrap();
            prop_assert!((conditional_distance(&m, j, t).unwrap() - long).abs() <= 1e-2);
            let gj = qcwalk::classical_fidelity(m.spectrum(), j, t).unwrap();
            let cj = qcwalk::coherence(m.spectrum(), j, t).unwrap();
            prop_assert!((n * gj * gj - cj - 1.0).abs() <= 0.02);
        }
    }

    #[test]
    fn distance_in_unit_interval(g in arb_connected(10), t in 0.0f64..50.0) {
        let m = WalkModel::new(g).unwrap();
        let (d, node) = qc_distance(&m, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(node < m.node_count());
    }

    /// A node adjacent to every other node has the same conditional distance
    /// on every such graph: the dynamics from it stay in the span of the node
    /// and the uniform vector on the rest.
    #[test]
    fn universal_vertex_equivalence(n in 5usize..12, seed in any::<u64>(), t in 0.0f64..10.0) {
        let hub = generate(GraphKind::RandomConnected, n, Some(n - 1), seed).unwrap();
        let complete = WalkModel::new(generate(GraphKind::Complete, n, None, 0).unwrap()).unwrap();
        let star = WalkModel::new(generate(GraphKind::Star, n, None, 0).unwrap()).unwrap();
        let wheel = WalkModel::new(generate(GraphKind::Wheel, n, None, 0).unwrap()).unwrap();
        let hub = WalkModel::new(hub).unwrap();
        let reference = conditional_distance(&complete, 0, t).unwrap();
        prop_assert!((conditional_distance(&star, 0, t).unwrap() - reference).abs() <= 1e-9);
        prop_assert!((conditional_distance(&wheel, 0, t).unwrap() - reference).abs() <= 1e-9);
        prop_assert!((conditional_distance(&hub, 1, t).unwrap() - reference).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn localized_states_minimize_fidelity(g in arb_connected(7), seed in any::<u64>()) {
        let m = WalkModel::new(g).unwrap();
        let report = verify_localized_optimality(&m, 20, &[0.1, 0.5, 1.0, 3.0], seed).unwrap();
        prop_assert!(report.worst_violation >= -1e-8);
        prop_assert!(report.passed());
    }
}

#[test]
fn regular_graphs_have_equivalent_nodes() {
    for g in [
        generate(GraphKind::Ring, 9, None, 0).unwrap(),
        generate(GraphKind::Complete, 7, None, 0).unwrap(),
    ] {
        let s = eigendecompose(&g.laplacian()).unwrap();
        for &t in &[0.05, 0.6, 2.0, 9.0] {
            let f0 = localized_fidelity(&s, 0, t).unwrap();
            for j in 1..g.node_count() {
                assert!((localized_fidelity(&s, j, t).unwrap() - f0).abs() <= 1e-10);
            }
        }
    }
}
