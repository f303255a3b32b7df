use approx::assert_abs_diff_eq;
use mixperc_core::oracle::{
    direct_swap_scp, direct_swap_scp_full_register, hybrid_swap_scp, recycling_failure_tree,
    run_verification, swap_form_closure, ClosedForms, VerifyGrid, ORACLE_TOL,
};
use mixperc_core::protocols::{scp_direct_1d, scp_hybrid_1d, scp_recycling};
use mixperc_core::PmsParams;

#[test]
fn default_grid_passes() {
    let report = run_verification(&VerifyGrid::default(), &ClosedForms::default()).unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.cases.iter().all(|c| c.points > 0));
}

#[test]
fn eight_qubit_register_agrees_with_composed_swap() {
    for &(a, l, b, n) in &[(0.6, 0.9, 0.5, 0.8), (0.75, 1.0, 0.3, 0.95)] {
        let full = direct_swap_scp_full_register(a, l, b, n).unwrap();
        let composed = direct_swap_scp(a, l, b, n).unwrap();
        let closed = scp_direct_1d(a, l, b, n).unwrap();
        assert_abs_diff_eq!(full, composed, epsilon = ORACLE_TOL);
        assert_abs_diff_eq!(full, closed, epsilon = ORACLE_TOL);
    }
}

#[test]
fn hybrid_swap_off_grid() {
    for &(a, l, b, n) in &[(0.15, 0.7, 0.85, 0.6), (0.42, 0.33, 0.42, 0.99)] {
        let oracle = hybrid_swap_scp(a, l, b, n).unwrap();
        assert_abs_diff_eq!(oracle, scp_hybrid_1d(a, l, b, n).unwrap(), epsilon = ORACLE_TOL);
    }
}

#[test]
fn recycling_tree_matches_recursion() {
    for n in 2..=6 {
        for &(a, l) in &[(0.5, 1.0), (0.6, 0.9), (0.8, 0.6), (0.3, 0.75)] {
            let tree = 1.0 - recycling_failure_tree(n, a, l).unwrap();
            let formula = scp_recycling(n, a, l).unwrap();
            assert!((tree - formula).abs() < 1e-10, "n={n} a={a} l={l}: {tree} vs {formula}");
        }
    }
}

#[test]
fn only_phi_outcomes_stay_in_family() {
    for &(a, l, b, n) in &[(0.6, 0.9, 0.5, 0.8), (0.7, 0.5, 0.7, 0.5)] {
        let first = PmsParams::pure_family(a, l).unwrap();
        let second = PmsParams::pure_family(b, n).unwrap();
        let closure = swap_form_closure(first, second).unwrap();
        assert_eq!(closure.len(), 4);
        for (label, in_family) in &closure {
            assert_eq!(*in_family, label.starts_with("phi"), "{closure:?}");
        }
    }
}
