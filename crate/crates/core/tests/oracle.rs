use approx::assert_relative_eq;
use diracosc_core::oracle::{
    annihilation_residual, assemble, assemble_dressed, compare_branch1, level_error, lowest_eigenpairs,
    lowest_eigenvalues,
};
use diracosc_core::spectrum::{energy_sq_branch1, Branch};
use diracosc_core::wavefunction::{annihilator, ln_ground_state, GroundState};
use diracosc_core::{OscillatorParams, WeightedGrid};
use proptest::prelude::*;

fn params(alpha: f64) -> OscillatorParams {
    OscillatorParams::new(1.0, 2.0, alpha, 1.0).unwrap()
}

#[test]
fn undeformed_levels_are_evenly_spaced() {
    let p = params(0.0);
    let op = assemble(&p, 4001, 30.0).unwrap();
    let values = lowest_eigenvalues(&op, 6).unwrap();
    for (n, v) in values.iter().enumerate() {
        let exact = 4.0 * n as f64;
        assert!(level_error(*v, exact, &p) < 1e-3, "n = {n}: {v}");
    }
}

#[test]
fn deformed_levels_match_and_improve_under_doubling() {
    for alpha in [0.0, 0.02, 0.05] {
        let p = params(alpha);
        let coarse = compare_branch1(&p, 2001, 20.0, 4).unwrap();
        let fine = compare_branch1(&p, 4001, 20.0, 4).unwrap();
        assert!(coarse.max_rel_err < 1e-2, "alpha {alpha}: {coarse:?}");
        // the zero mode is exact to roundoff at every resolution
        for n in 1..4 {
            assert!(fine.rel_err[n] < coarse.rel_err[n], "alpha {alpha}, n {n}");
        }
    }
}

#[test]
fn truncation_boundary_is_benign_for_low_levels() {
    let p = params(0.02);
    let a = lowest_eigenvalues(&assemble(&p, 2001, 20.0).unwrap(), 3).unwrap();
    let b = lowest_eigenvalues(&assemble(&p, 2001, 24.0).unwrap(), 3).unwrap();
    for n in 0..3 {
        assert!(level_error(a[n], b[n], &p) < 1e-2, "n {n}: {} vs {}", a[n], b[n]);
    }
}

#[test]
fn ground_eigenvector_is_the_closed_form_state() {
    for alpha in [0.02, 0.05, 0.1] {
        let p = params(alpha);
        let op = assemble(&p, 2001, 20.0f64.min(1.0 / alpha)).unwrap();
        let pairs = lowest_eigenpairs(&op, 1).unwrap();
        let v = &pairs.vectors[0];
        let grid = WeightedGrid::for_params(&p, 2001).unwrap();
        let psi = GroundState::normalized(Branch::ZeroGroundState, &p, &grid)
            .unwrap()
            .samples(op.nodes())
            .unwrap();
        let overlap = op.node_inner(v, &psi) / (op.node_inner(v, v) * op.node_inner(&psi, &psi)).sqrt();
        assert!(overlap.abs() >= 0.999, "alpha {alpha}: {overlap}");
    }
}

#[test]
fn spectrum_is_positive_semidefinite() {
    for alpha in [0.0, 0.05, 0.2, 0.5, 1.0] {
        let p = params(alpha);
        let p_cut = if alpha > 0.0 { 1.0 / alpha } else { 10.0 };
        let op = assemble(&p, 401, p_cut).unwrap();
        let values = lowest_eigenvalues(&op, 5).unwrap();
        let (_, top) = op.symmetrized_hamiltonian_sq().gershgorin();
        assert!(values[0] >= -1e-8 * top);
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn bisection_agrees_with_dense_solver() {
    let p = params(0.1);
    let op = assemble(&p, 301, 10.0).unwrap();
    let sparse = lowest_eigenvalues(&op, 6).unwrap();
    let dense = op.symmetrized_hamiltonian_sq().lowest_eigenvalues_dense(6).unwrap();
    for (a, b) in sparse.iter().zip(&dense) {
        assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{a} vs {b}");
    }
    // the full matrix product and the tridiagonal form describe the same operator
    let full = op.raising_matrix() * op.lowering_matrix();
    let direct = op.hamiltonian_sq_matrix();
    assert!((full - direct).abs().max() < 1e-9);
}

#[test]
fn dressed_second_branch_ground_state_is_annihilated() {
    let p = params(1.0);
    let (xi, k) = annihilator(Branch::NonzeroGroundState, &p).unwrap();
    let psi = |x: f64| ln_ground_state(Branch::NonzeroGroundState, x, &p).unwrap().exp();
    let r: Vec<f64> = [201, 401, 801]
        .iter()
        .map(|&n| annihilation_residual(&p, xi, k, n, 1.0, psi).unwrap())
        .collect();
    assert!(r[1] < 0.5 * r[0] && r[2] < 0.5 * r[1], "{r:?}");
    assert!(assemble_dressed(&p, xi, k, 201, 1.0).is_ok());
}

#[test]
fn undeformed_ground_state_is_annihilated() {
    let p = params(0.05);
    let psi = |x: f64| ln_ground_state(Branch::ZeroGroundState, x, &p).unwrap().exp();
    let r = annihilation_residual(&p, 1.0, 0.0, 2001, 20.0, psi).unwrap();
    assert!(r < 1e-3, "{r}");
}

#[test]
fn compare_reports_closed_form_values() {
    let p = params(0.05);
    let report = compare_branch1(&p, 1001, 20.0, 3).unwrap();
    for (n, a) in report.analytic.iter().enumerate() {
        assert_relative_eq!(*a, energy_sq_branch1(n, &p) - 1.0, max_relative = 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn raising_is_the_weighted_adjoint(
        alpha in 0.0f64..0.5,
        seed in proptest::collection::vec(-1.0f64..1.0, 8),
    ) {
        let p = params(alpha);
        let op = assemble(&p, 101, 2.0).unwrap();
        let v: Vec<f64> = op.nodes().iter().enumerate()
            .map(|(j, &x)| seed[j % 4] * (seed[4] * x).sin() + seed[5] * (j as f64 * 0.37).cos())
            .collect();
        let u: Vec<f64> = op.midpoints().iter().enumerate()
            .map(|(j, &x)| seed[6] * x + seed[7] * (j as f64 * 1.1).sin())
            .collect();
        let lhs = op.midpoint_inner(&u, &op.apply_lowering(&v).unwrap());
        let rhs = op.node_inner(&op.apply_raising(&u).unwrap(), &v);
        let scale = op.midpoint_inner(&u, &u).sqrt() * op.node_inner(&v, &v).sqrt() * 100.0;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }
}
