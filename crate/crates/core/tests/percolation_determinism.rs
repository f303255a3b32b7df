use mixperc_core::percolation::{
    build_lattice, connection_sweep, critical_points, estimate_threshold, Boundary, LatticeKind,
    LatticeSpec,
};

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn worker_count_does_not_change_results() {
    let g = build_lattice(LatticeSpec::new(LatticeKind::Triangular, 16, Boundary::Wrap)).unwrap();
    let pairs = [(0, 5), (0, 100)];
    let one = with_threads(1, || connection_sweep(&g, 0.4, &pairs, 64, 99).unwrap());
    let four = with_threads(4, || connection_sweep(&g, 0.4, &pairs, 64, 99).unwrap());
    assert_eq!(one, four);
    let c1 = with_threads(1, || critical_points(&g, 32, 5));
    let c3 = with_threads(3, || critical_points(&g, 32, 5));
    assert_eq!(c1, c3);
}

#[test]
fn square_threshold_finite_size_drift_is_small() {
    let est = |l| {
        estimate_threshold(LatticeSpec::new(LatticeKind::Square, l, Boundary::Wrap), 400, 0.005, 17)
            .unwrap()
            .p_hat
    };
    let (small, large) = (est(32), est(128));
    assert!((small - large).abs() < 0.02, "L=32: {small}, L=128: {large}");
}
