//! Multistart mountain-pass search seeded from the nested subspaces
//! `Y_k = span{φ_1, …, φ_k}` of discrete Dirichlet eigenvectors, with
//! solutions grouped into orbits of the symmetry `u ↦ -u`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::geometry::ray_to_negative;
use super::mountain_pass::solve_in_complement;
use super::{MountainPassOptions, SolveReport, Workspace};
use crate::energy::KirchhoffProblem;
use crate::error::{Error, Result};
use crate::linalg::dirichlet_eigenpairs;
use crate::modular::sobolev_norm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplicityOptions {
    pub n_starts: usize,
    /// Largest subspace index `k`.
    pub k_max: usize,
    /// Sobolev-norm distance below which two solutions share an orbit.
    pub distinct_tol: f64,
    pub seed: u64,
    pub solve: MountainPassOptions,
}

impl Default for MultiplicityOptions {
    fn default() -> Self {
        MultiplicityOptions {
            n_starts: 8,
            k_max: 4,
            distinct_tol: 1e-3,
            seed: 0,
            solve: MountainPassOptions::default(),
        }
    }
}

/// Seed of start `i`: the subspace index `k` (0-based) and a direction.
///
/// Starts cycle through `k = 1..=k_max` using the top mode `φ_k` of `Y_k`,
/// alternating sign on every pass; after two passes `φ_k` is perturbed by a
/// random combination of `φ_{k+1}, …, φ_{k_max}`. Every seed is orthogonal
/// to `Y_{k-1}`, the subspace its descent is kept away from.
fn seed_direction(i: usize, modes: &[Vec<f64>], rng: &mut ChaCha8Rng) -> (usize, Vec<f64>) {
    let k_max = modes.len();
    let k = i % k_max;
    let pass = i / k_max;
    if pass < 2 {
        let sign = if pass == 0 { 1.0 } else { -1.0 };
        return (k, modes[k].iter().map(|x| sign * x).collect());
    }
    let mut v = modes[k].clone();
    for mode in &modes[k + 1..] {
        let c: f64 = rng.gen_range(-0.5..0.5);
        v.iter_mut().zip(mode).for_each(|(x, m)| *x += c * m);
    }
    (k, v)
}

/// Distinct orbits plus the starts that did not converge.
#[derive(Debug, Clone)]
pub struct MultiplicityOutcome {
    /// One representative per orbit, sorted by increasing energy.
    pub orbits: Vec<SolveReport>,
    /// `(start index, error)` for every failed start.
    pub failures: Vec<(usize, Error)>,
}

/// Orbits found by [`multiplicity_outcome`]; failed starts are dropped.
pub fn multiplicity_search(prob: &KirchhoffProblem, opts: &MultiplicityOptions) -> Result<Vec<SolveReport>> {
    multiplicity_outcome(prob, opts).map(|o| o.orbits)
}

pub fn multiplicity_outcome(prob: &KirchhoffProblem, opts: &MultiplicityOptions) -> Result<MultiplicityOutcome> {
    let mut outcome = MultiplicityOutcome {
        orbits: Vec::new(),
        failures: Vec::new(),
    };
    if opts.n_starts == 0 {
        return Ok(outcome);
    }
    prob.require_valid()?;
    if prob.a < prob.b {
        return Err(Error::Domain(format!(
            "multiplicity runs require a >= b (got a = {}, b = {})",
            prob.a, prob.b
        )));
    }
    if opts.k_max == 0 {
        return Err(Error::Shape("k_max must be at least 1".into()));
    }
    let ws = Workspace::new(prob);
    let modes: Vec<Vec<f64>> = dirichlet_eigenpairs(prob.mesh(), opts.k_max)
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    if modes.is_empty() {
        return Err(Error::Shape("mesh has no interior vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let seeds: Vec<(usize, Vec<f64>)> = (0..opts.n_starts)
        .map(|i| seed_direction(i, &modes, &mut rng))
        .collect();

    let runs: Vec<Result<SolveReport>> = seeds
        .par_iter()
        .map(|(k, dir)| {
            let e = ray_to_negative(&ws, dir).ok_or(Error::MaxIterations {
                iterations: 60,
                residual: f64::NAN,
            })?;
            solve_in_complement(prob, &ws.grid(e), &opts.solve, &modes[..*k])
        })
        .collect();

    let mut found: Vec<(usize, SolveReport)> = Vec::new();
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok(r) => found.push((i, r)),
            Err(e) => outcome.failures.push((i, e)),
        }
    }
    found.sort_by(|a, b| a.1.energy.total_cmp(&b.1.energy).then(a.0.cmp(&b.0)));

    for (_, report) in found {
        let mut duplicate = false;
        for kept in &outcome.orbits {
            let minus = report.solution.axpy(-1.0, &kept.solution);
            let plus = report.solution.axpy(1.0, &kept.solution);
            let d = sobolev_norm(&minus, &prob.p)?
                .value()
                .min(sobolev_norm(&plus, &prob.p)?.value());
            if d <= opts.distinct_tol {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            outcome.orbits.push(report);
        }
    }
    Ok(outcome)
}
