mod common;

use std::f64::consts::PI;

use common::*;
use kirchhoff::modular::luxemburg_norm;
use kirchhoff::solver::{mountain_pass_solve, MountainPassOptions};
use kirchhoff::{ExponentField, GridFunction};
use nalgebra::DVector;

#[test]
fn sturm_eigenvalues_match_second_difference_formula() {
    for (n, len) in [(50, 1.0), (200, 2.0)] {
        let h = len / n as f64;
        for k in 1..=3 {
            let formula = 4.0 / (h * h) * (k as f64 * PI * h / (2.0 * len)).sin().powi(2);
            let sturm = fd_dirichlet_eigenvalue(n, len, k);
            assert!((sturm / formula - 1.0).abs() < 1e-10, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn luxemburg_norm_of_constant_under_affine_exponent() {
    let reference = luxemburg_constant_on_affine(2.0, 20_000);
    // ∫₀¹ (2/s)^{2+x} dx = 1 has the root between 2 and the L² value 2
    assert!(reference > 1.0 && reference < 2.0 + 1e-12);
    let mesh = interval(2000, 1.0);
    let p = ExponentField::affine(2.0, 1.0, &mesh).unwrap();
    let u = vec![2.0; mesh.n_elements()];
    let norm = luxemburg_norm(&u, &p, &mesh).unwrap().value();
    assert!((norm / reference - 1.0).abs() < 1e-6, "{norm} vs {reference}");
}

#[test]
fn newton_root_matches_mountain_pass_level() {
    let prob = model_problem(100, 0.1);
    let el = EulerLagrange1d::new(100, 1.0, 1.0, 0.1, 4.5);
    let root = el
        .deflated_newton(el.mode_guess(1), &[DVector::zeros(99)], 1e-12, 200)
        .expect("Newton converges");
    let e = GridFunction::from_fn(prob.mesh().clone(), |x| 8.0 * (PI * x[0]).sin());
    let r = mountain_pass_solve(&prob, &e, &MountainPassOptions::default()).unwrap();
    assert!((el.energy(&root) - r.energy).abs() < 1e-9);
    assert!(el.sup_distance(&root, &r.solution) < 1e-4);
}

#[test]
fn deflation_steers_away_from_known_roots() {
    let el = EulerLagrange1d::new(60, 1.0, 1.0, 0.01, 4.5);
    let zero = DVector::zeros(59);
    let first = el.deflated_newton(el.mode_guess(1), std::slice::from_ref(&zero), 1e-12, 200).unwrap();
    let known = [zero, first.clone(), -&first];
    let start = el.mode_guess(2);
    let second = el.deflated_newton(start, &known, 1e-12, 400).unwrap();
    assert!(el.residual(&second).norm() <= 1e-12);
    assert!((&second - &first).amax() > 1e-3 && (&second + &first).amax() > 1e-3);
}
