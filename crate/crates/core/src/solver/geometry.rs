//! Mountain-pass geometry: a sphere `‖u‖ = ρ` on which `J` stays positive,
//! and a far point `e` with `J(e) < 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Workspace;
use crate::discretization::GridFunction;
use crate::energy::KirchhoffProblem;
use crate::error::{Error, Result};
use crate::linalg::dirichlet_eigenpairs;
use crate::modular::sobolev_norm;

/// Doublings of `t` before giving up on a negative-energy point.
const MAX_DOUBLINGS: usize = 60;

/// Searches `t = 1, 2, 4, …` for `J(t·dir) < 0`.
pub(crate) fn ray_to_negative(ws: &Workspace, dir: &[f64]) -> Option<Vec<f64>> {
    let mut t = 1.0;
    for _ in 0..=MAX_DOUBLINGS {
        let u: Vec<f64> = dir.iter().map(|x| t * x).collect();
        if ws.energy(&u) < 0.0 {
            return Some(u);
        }
        t *= 2.0;
    }
    None
}

/// Returns `e = tψ` with `J(e) < 0`, `t` the first power of two that works.
pub fn find_negative_energy_point(prob: &KirchhoffProblem, psi: &GridFunction) -> Result<GridFunction> {
    psi.require_zero_trace()?;
    if psi.is_zero() || psi.values().iter().any(|&x| x < 0.0) {
        return Err(Error::Domain("psi must be nonzero and nonnegative".into()));
    }
    let ws = Workspace::new(prob);
    ray_to_negative(&ws, psi.values())
        .map(|u| ws.grid(u))
        .ok_or(Error::MaxIterations {
            iterations: MAX_DOUBLINGS,
            residual: f64::NAN,
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryOptions {
    pub rho_grid: Vec<f64>,
    pub n_dirs: usize,
    pub seed: u64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            rho_grid: (0..8).map(|k| 0.05 * 2f64.powi(k)).collect(),
            n_dirs: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeometryReport {
    /// Accepted sphere radius `ρ`.
    pub rho: f64,
    /// Smallest sampled `J` on the sphere `‖u‖ = ρ`.
    pub alpha: f64,
    pub directions_tested: usize,
    /// `(ρ, sampled minimum)` for every radius of the grid.
    pub sampled_minima: Vec<(f64, f64)>,
    /// `e` with `J(e) < 0` and `‖e‖ > ρ`.
    pub negative_point: GridFunction,
    pub negative_energy: f64,
}

/// Probe directions: the lowest Dirichlet modes, then random smooth
/// combinations of the first modes, each normalized to `‖d‖ = 1`.
fn probe_directions(prob: &KirchhoffProblem, n_dirs: usize, seed: u64) -> Result<Vec<GridFunction>> {
    let mesh = prob.mesh();
    let n_modes = mesh.n_interior().min(12);
    let modes = dirichlet_eigenpairs(mesh, n_modes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs = Vec::with_capacity(n_dirs);
    for i in 0..n_dirs {
        let raw: Vec<f64> = if i < n_modes.min(n_dirs / 2 + 1) {
            modes[i].1.clone()
        } else {
            let mut v = vec![0.0; mesh.n_vertices()];
            for (k, (_, mode)) in modes.iter().enumerate() {
                let c: f64 = rng.gen_range(-1.0..1.0) / (k + 1) as f64;
                v.iter_mut().zip(mode).for_each(|(x, m)| *x += c * m);
            }
            v
        };
        let d = GridFunction::new(mesh.clone(), raw)?;
        let norm = sobolev_norm(&d, &prob.p)?.value();
        if norm > 0.0 {
            dirs.push(d.scaled(1.0 / norm));
        }
    }
    Ok(dirs)
}

/// Samples `J` on spheres `‖u‖ = ρ` and keeps the largest `ρ` whose sampled
/// minimum is positive. The exponent chain is not enforced here: the check is
/// purely numerical and is also meaningful at borderline exponents.
pub fn verify_mountain_geometry(prob: &KirchhoffProblem, opts: &GeometryOptions) -> Result<GeometryReport> {
    if opts.rho_grid.is_empty() {
        return Err(Error::GeometryNotFound("empty radius grid".into()));
    }
    if let Some(r) = opts.rho_grid.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::Domain(format!("radii must be positive (got {r})")));
    }
    let ws = Workspace::new(prob);
    let dirs = probe_directions(prob, opts.n_dirs, opts.seed)?;
    if dirs.is_empty() {
        return Err(Error::GeometryNotFound("no probe directions".into()));
    }
    let sampled_minima: Vec<(f64, f64)> = opts
        .rho_grid
        .iter()
        .map(|&rho| {
            let min = dirs
                .iter()
                .map(|d| ws.energy(&d.scaled(rho).into_values()))
                .fold(f64::INFINITY, f64::min);
            (rho, min)
        })
        .collect();
    let (rho, alpha) = sampled_minima
        .iter()
        .copied()
        .filter(|&(_, a)| a > 0.0)
        .fold(None, |best: Option<(f64, f64)>, cur| match best {
            Some(b) if b.0 >= cur.0 => Some(b),
            _ => Some(cur),
        })
        .ok_or_else(|| {
            Error::GeometryNotFound(format!(
                "J takes nonpositive values on every sampled sphere (minima {:?})",
                sampled_minima.iter().map(|m| m.1).collect::<Vec<_>>()
            ))
        })?;

    // positive first mode, pushed out until it leaves the ball of radius ρ
    let psi = dirs[0].map(f64::abs);
    let mut e = find_negative_energy_point(prob, &psi)?;
    for _ in 0..MAX_DOUBLINGS {
        if sobolev_norm(&e, &prob.p)?.value() > rho {
            break;
        }
        e = e.scaled(2.0);
    }
    let negative_energy = ws.energy(e.values());
    if !(negative_energy < 0.0) || sobolev_norm(&e, &prob.p)?.value() <= rho {
        return Err(Error::GeometryNotFound("no negative-energy point beyond the sphere".into()));
    }
    Ok(GeometryReport {
        rho,
        alpha,
        directions_tested: dirs.len(),
        sampled_minima,
        negative_point: e,
        negative_energy,
    })
}
