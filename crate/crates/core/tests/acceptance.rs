//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use kirchhoff::energy::{energy_j, gradient_j};
use kirchhoff::modular::{check_modular_norm_relations, holder_pairing, luxemburg_norm, modular, sobolev_norm};
use kirchhoff::solver::{
    find_negative_energy_point, mountain_pass_solve, multiplicity_search, rayleigh_quotient_min,
    verify_mountain_geometry, GeometryOptions, MountainPassOptions, MultiplicityOptions, RayleighOptions,
    SolveReport,
};
use kirchhoff::{Error, ExponentField, GridFunction, KirchhoffProblem, NonlinearitySpec};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn unit_ball() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let meshes = [interval(100, 1.0), square(8)];
    let mut worst = 0.0f64;
    for i in 0..200 {
        let mesh = &meshes[i % 2];
        let p = random_exponent(mesh, 1.5, 4.0, &mut rng);
        let u = random_function(mesh, &mut rng).scaled(10f64.powf(rng.gen_range(-2.0..2.0)));
        let samples = u.centroid_values();
        let norm = luxemburg_norm(&samples, &p, mesh).unwrap().value();
        let unit: Vec<f64> = samples.iter().map(|x| x / norm).collect();
        let rho = modular(&unit, &p, mesh).unwrap().value();
        worst = worst.max((rho - 1.0).abs());
    }
    check(worst <= 1e-8, || format!("max |rho(u/|u|) - 1| = {worst:e}"))?;
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("max |rho(u/|u|) - 1| = {worst:.2e} over 200 functions in {took:.2?}"))
}

fn constant_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let meshes = [interval(100, 1.0), square(8)];
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mesh = &meshes[i % 2];
        let pc = rng.gen_range(1.5..4.0);
        let p = ExponentField::constant(pc, mesh).unwrap();
        let u = random_function(mesh, &mut rng).scaled(10f64.powf(rng.gen_range(-2.0..2.0)));
        // centroid average of vertex values, times element measure
        let integral: f64 = (0..mesh.n_elements())
            .map(|e| {
                let verts = mesh.element(e);
                let avg = verts.iter().map(|&v| u.values()[v]).sum::<f64>() / verts.len() as f64;
                avg.abs().powf(pc) * mesh.measures()[e]
            })
            .sum();
        let closed = integral.powf(1.0 / pc);
        let norm = luxemburg_norm(&u.centroid_values(), &p, mesh).unwrap().value();
        worst = worst.max((norm / closed - 1.0).abs());
    }
    check(worst <= 1e-10, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.2e} over 100 functions"))
}

fn modular_relations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let meshes = [interval(50, 1.0), square(6)];
    let mut violations = 0;
    let mut independent = 0;
    for i in 0..500 {
        let mesh = &meshes[i % 2];
        let p = random_exponent(mesh, 1.2, 3.5, &mut rng);
        let u = random_function(mesh, &mut rng).scaled(10f64.powf(rng.gen_range(-1.5..1.5)));
        let samples = u.centroid_values();
        let report = check_modular_norm_relations(&samples, &p, mesh).unwrap();
        violations += report.violations.len();

        let weights = mesh.measures();
        let n = luxemburg_root(weights, &samples, p.values());
        let rho: f64 = samples
            .iter()
            .zip(p.values())
            .zip(weights)
            .map(|((v, q), w)| w * v.abs().powf(*q))
            .sum();
        let (lo, hi) = (p.lo(), p.hi());
        let slack = 1e-9 * rho;
        let ok = if n > 1.0 {
            n.powf(lo) <= rho + slack && rho <= n.powf(hi) + slack
        } else {
            n.powf(hi) <= rho + slack && rho <= n.powf(lo) + slack
        };
        if !ok {
            independent += 1;
        }
    }
    let mut holder_fail = 0;
    for i in 0..100 {
        let mesh = &meshes[i % 2];
        let p = random_exponent(mesh, 1.2, 3.5, &mut rng);
        let u = random_function(mesh, &mut rng).centroid_values();
        let v = random_function(mesh, &mut rng).centroid_values();
        if !holder_pairing(&u, &v, &p, mesh).unwrap().holds() {
            holder_fail += 1;
        }
    }
    check(violations == 0 && independent == 0 && holder_fail == 0, || {
        format!("{violations} reported, {independent} independent, {holder_fail} Hölder violations")
    })?;
    Ok("0 violations on 500 samples; Hölder bound held on 100 pairs".into())
}

fn gradient_fidelity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let meshes = [interval(100, 1.0), square(8)];
    let problems: Vec<KirchhoffProblem> = meshes
        .iter()
        .map(|mesh| {
            let p = ExponentField::affine(2.0, 1.0, mesh).unwrap();
            let q = ExponentField::affine(4.5, 1.0, mesh).unwrap();
            let g = NonlinearitySpec::pure_power(q, 3.0).unwrap();
            KirchhoffProblem::new(1.0, 0.1, 2.5, p, g, mesh.clone()).unwrap()
        })
        .collect();
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let prob = &problems[i % 2];
        let mesh = prob.mesh();
        let u = random_function(mesh, &mut rng);
        let v = random_function(mesh, &mut rng);
        let grad = gradient_j(&u, prob).unwrap();
        let analytic: f64 = grad.values().iter().zip(v.values()).map(|(g, d)| g * d).sum();
        let fd = (energy_j(&u.axpy(h, &v), prob).unwrap() - energy_j(&u.axpy(-h, &v), prob).unwrap()) / (2.0 * h);
        worst = worst.max((fd - analytic).abs() / analytic.abs().max(1e-300));
    }
    check(worst <= 1e-5, || format!("max relative error {worst:e}"))?;
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("max relative error {worst:.2e} over 50 pairs (p = 2 + x, lambda = 2.5) in {took:.2?}"))
}

fn rayleigh_oracle() -> Outcome {
    let mut lines = Vec::new();
    for (len, exact) in [(1.0, PI * PI), (2.0, PI * PI / 4.0)] {
        let mesh = interval(200, len);
        let p = ExponentField::constant(2.0, &mesh).unwrap();
        let r = rayleigh_quotient_min(&p, &mesh, &RayleighOptions::default())
            .map_err(|e| format!("(0,{len}): {e}"))?;
        let oracle = fd_dirichlet_eigenvalue(200, len, 1);
        let dev = (r.value / oracle - 1.0).abs();
        check(dev <= 0.01 && (oracle / exact - 1.0).abs() <= 0.01, || {
            format!("(0,{len}): {} vs oracle {oracle}", r.value)
        })?;
        lines.push(format!("(0,{len}): {:.6} vs {:.6}", r.value, oracle));
    }
    Ok(lines.join("; "))
}

fn first_root(el: &EulerLagrange1d) -> Option<DVector<f64>> {
    let zero = DVector::zeros(el.n - 1);
    el.deflated_newton(el.mode_guess(1), &[zero], 1e-12, 200)
}

fn mountain_pass_model() -> Outcome {
    let start = Instant::now();
    let prob = model_problem(100, 0.1);
    let e = GridFunction::from_fn(prob.mesh().clone(), |x| 8.0 * (PI * x[0]).sin());
    let r = mountain_pass_solve(&prob, &e, &MountainPassOptions::default()).map_err(|e| e.to_string())?;
    check(r.residual_norm <= 1e-6, || format!("residual {:e}", r.residual_norm))?;
    check(r.energy > 0.0 && r.energy < 5.0, || format!("energy {}", r.energy))?;
    check(r.nonlocal_coefficient > 0.0, || format!("K = {}", r.nonlocal_coefficient))?;
    check(r.below_ps_ceiling, || "below_ps_ceiling = false".into())?;
    let el = EulerLagrange1d::new(100, 1.0, 1.0, 0.1, 4.5);
    let root = first_root(&el).ok_or("Newton oracle did not converge")?;
    let dist = el.sup_distance(&root, &r.solution).min(el.sup_distance(&-&root, &r.solution));
    check(dist <= 1e-4, || format!("sup distance to Newton root {dist:e}"))?;
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "c = {:.8}, residual {:.2e}, K = {:.4}, Newton sup distance {dist:.1e}, {took:.2?}",
        r.energy, r.residual_norm, r.nonlocal_coefficient
    ))
}

fn ceiling_invariant() -> Outcome {
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    for b in [0.1, 0.01, 1000.0] {
        let prob = model_problem(100, b);
        let amp = 0.5 / b.sqrt();
        let psi = GridFunction::from_fn(prob.mesh().clone(), |x| amp * (PI * x[0]).sin());
        let e = find_negative_energy_point(&prob, &psi).map_err(|e| e.to_string())?;
        let mut runs: Vec<SolveReport> = vec![mountain_pass_solve(&prob, &e, &MountainPassOptions::default())
            .map_err(|e| format!("b = {b}: {e}"))?];
        if b <= 1.0 {
            runs.extend(multiplicity_search(&prob, &MultiplicityOptions::default()).map_err(|e| e.to_string())?);
        }
        for run in &runs {
            for rec in &run.trajectory {
                let excess = rec.quadratic_part(&prob) - prob.ps_ceiling();
                worst = worst.max(excess);
                checked += 1;
                check(excess <= 1e-12, || format!("b = {b}, iteration {}: excess {excess:e}", rec.iteration))?;
            }
        }
    }
    Ok(format!("{checked} iterates, max (aA - bA^2/2) - a^2/2b = {worst:.3e}"))
}

fn symmetry_and_multiplicity() -> Outcome {
    let start = Instant::now();
    let prob = model_problem(100, 0.1);
    let e = GridFunction::from_fn(prob.mesh().clone(), |x| 8.0 * (PI * x[0]).sin());
    let opts = MountainPassOptions::default();
    let plus = mountain_pass_solve(&prob, &e, &opts).map_err(|e| e.to_string())?;
    let minus = mountain_pass_solve(&prob, &e.scaled(-1.0), &opts).map_err(|e| e.to_string())?;
    let gap = (plus.energy - minus.energy).abs();
    check(gap <= 1e-8, || format!("±e energies differ by {gap:e}"))?;
    let flip = sobolev_norm(&plus.solution.axpy(1.0, &minus.solution), &prob.p).unwrap().value();
    check(flip <= 1e-3, || format!("±e solutions differ by {flip:e} up to sign"))?;

    let b = 0.01;
    let prob = model_problem(100, b);
    let orbits = multiplicity_search(&prob, &MultiplicityOptions::default()).map_err(|e| e.to_string())?;
    let energies: Vec<f64> = orbits.iter().map(|o| o.energy).collect();
    check(orbits.len() >= 2, || format!("only {} orbit(s)", orbits.len()))?;
    check(energies.windows(2).all(|w| w[0] < w[1]), || format!("energies {energies:?}"))?;

    // enumerate roots by deflated Newton from the first few modes
    let el = EulerLagrange1d::new(100, 1.0, 1.0, b, 4.5);
    let mut known = vec![DVector::zeros(99)];
    for k in 1..=4 {
        if let Some(root) = el.deflated_newton(el.mode_guess(k), &known, 1e-12, 300) {
            known.push(-&root);
            known.push(root);
        }
    }
    for orbit in &orbits {
        let dist = known[1..]
            .iter()
            .map(|r| el.sup_distance(r, &orbit.solution))
            .fold(f64::INFINITY, f64::min);
        check(dist <= 1e-4, || format!("orbit c = {} has no Newton match (sup distance {dist:e})", orbit.energy))?;
    }
    let took = within(Duration::from_secs(300), start)?;
    Ok(format!(
        "±e gap {gap:.1e}; b = {b}: {} orbits, energies {:?}, all matched by Newton roots; {took:.2?}",
        orbits.len(),
        energies.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>()
    ))
}

fn geometry() -> Outcome {
    let prob = model_problem(100, 0.1);
    let g = verify_mountain_geometry(&prob, &GeometryOptions::default()).map_err(|e| e.to_string())?;
    let e_norm = sobolev_norm(&g.negative_point, &prob.p).unwrap().value();
    check(g.alpha > 0.0, || format!("alpha = {}", g.alpha))?;
    check(g.negative_energy < 0.0 && e_norm > g.rho, || {
        format!("J(e) = {}, |e| = {e_norm}, rho = {}", g.negative_energy, g.rho)
    })?;

    let r = rayleigh_quotient_min(&prob.p, prob.mesh(), &RayleighOptions::default()).map_err(|e| e.to_string())?;
    let lambda = 1.5 * prob.a * r.value;
    let loud = prob.with_lambda(lambda);
    let small = r.minimizer.scaled(1e-3 / sobolev_norm(&r.minimizer, &prob.p).unwrap().value());
    let j_small = energy_j(&small, &loud).unwrap();
    check(j_small < 0.0, || format!("J at the scaled minimizer is {j_small}"))?;
    match verify_mountain_geometry(&loud, &GeometryOptions::default()) {
        Err(Error::GeometryNotFound(_)) => {}
        other => return Err(format!("lambda = {lambda}: expected GeometryNotFound, got {other:?}")),
    }
    Ok(format!(
        "rho = {}, alpha = {:.4}, J(e) = {:.3}, |e| = {e_norm:.3}; lambda = {lambda:.3}: GeometryNotFound",
        g.rho, g.alpha, g.negative_energy
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Luxemburg unit ball", unit_ball),
        ("constant-exponent closed form", constant_closed_form),
        ("norm/modular relations and Hölder bound", modular_relations),
        ("gradient fidelity", gradient_fidelity),
        ("Rayleigh quotient oracle", rayleigh_oracle),
        ("mountain-pass solve on the model problem", mountain_pass_model),
        ("quadratic-part ceiling along trajectories", ceiling_invariant),
        ("symmetry and multiplicity", symmetry_and_multiplicity),
        ("mountain-pass geometry", geometry),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
