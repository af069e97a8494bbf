//! Mountain-pass solver in the style of Choi and McKenna.
//!
//! The path from `0` to `e` is a polyline. Each iteration locates the
//! maximum of `J` along the polyline (refined inside the top segment by
//! bisection on the directional derivative), inserts it as a node, and moves
//! that node along the negative Sobolev gradient with backtracking. A step is
//! accepted only when it satisfies the Armijo condition at the node and keeps
//! both adjacent segments below the current path maximum, so the recorded
//! path maxima never increase.

use std::fmt::Write as _;

use super::{dot, l2, lerp, Workspace, ARMIJO, MAX_HALVINGS};
use crate::discretization::GridFunction;
use crate::energy::KirchhoffProblem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MountainPassOptions {
    /// Initial number of path nodes, endpoints included.
    pub n_path: usize,
    /// Stopping tolerance on the ℓ² norm of the interior residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MountainPassOptions {
    fn default() -> Self {
        MountainPassOptions {
            n_path: 21,
            tol: 1e-6,
            max_iter: 20_000,
        }
    }
}

/// One row of the iteration log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub path_max_energy: f64,
    pub residual: f64,
    pub a_value: f64,
    pub nonlocal_coefficient: f64,
}

impl IterationRecord {
    /// `a A - (b/2) A²` at the iterate.
    pub fn quadratic_part(&self, prob: &KirchhoffProblem) -> f64 {
        prob.a * self.a_value - 0.5 * prob.b * self.a_value * self.a_value
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: GridFunction,
    /// Critical level `c = J(u*)`.
    pub energy: f64,
    pub residual_norm: f64,
    /// `A(u*)`.
    pub a_value: f64,
    /// `K(u*) = a - b A(u*)`.
    pub nonlocal_coefficient: f64,
    /// `c < a²/(2b)`.
    pub below_ps_ceiling: bool,
    /// Number of descent steps taken.
    pub iterations: usize,
    /// Path maximum before every descent step, plus the final one.
    pub path_energies: Vec<f64>,
    pub trajectory: Vec<IterationRecord>,
}

/// `energy < a²/(2b)`, strictly.
pub fn ps_threshold_check(report: &SolveReport, prob: &KirchhoffProblem) -> bool {
    report.energy < prob.ps_ceiling()
}

#[derive(Debug, Clone, Copy)]
struct SegmentMax {
    tau: f64,
    value: f64,
}

/// Maximum of `τ ↦ J((1-τ)a + τb)` on `[0, 1]`.
fn segment_max(ws: &Workspace, a: &[f64], fa: f64, b: &[f64], fb: f64) -> SegmentMax {
    const SAMPLES: usize = 8;
    let dir: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let slope = |t: f64| dot(&ws.residual(&lerp(a, b, t)).0, &dir);
    let taus: Vec<f64> = (0..=SAMPLES).map(|i| i as f64 / SAMPLES as f64).collect();
    let vals: Vec<f64> = taus
        .iter()
        .enumerate()
        .map(|(i, &t)| match i {
            0 => fa,
            SAMPLES => fb,
            _ => ws.energy(&lerp(a, b, t)),
        })
        .collect();
    let best = (0..=SAMPLES).fold(0, |k, i| if vals[i] > vals[k] { i } else { k });
    let sampled = SegmentMax {
        tau: taus[best],
        value: vals[best],
    };
    let d_best = slope(taus[best]);
    let bracket = if d_best > 0.0 && best < SAMPLES {
        Some((taus[best], taus[best + 1]))
    } else if d_best < 0.0 && best > 0 {
        Some((taus[best - 1], taus[best]))
    } else {
        None
    };
    let Some((mut lo, mut hi)) = bracket else {
        return sampled;
    };
    if !(slope(lo) > 0.0 && slope(hi) < 0.0) {
        return sampled;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = slope(mid);
        if d > 0.0 {
            lo = mid;
        } else if d < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
            break;
        }
    }
    let tau = 0.5 * (lo + hi);
    let value = ws.energy(&lerp(a, b, tau));
    if value >= sampled.value {
        SegmentMax { tau, value }
    } else {
        sampled
    }
}

struct Path {
    nodes: Vec<Vec<f64>>,
    energies: Vec<f64>,
    // maximum on segment (i, i+1)
    segments: Vec<SegmentMax>,
}

impl Path {
    fn straight(ws: &Workspace, e: &[f64], n: usize) -> Self {
        let zero = vec![0.0; e.len()];
        let nodes: Vec<Vec<f64>> = (0..n).map(|i| lerp(&zero, e, i as f64 / (n - 1) as f64)).collect();
        let energies: Vec<f64> = nodes.iter().map(|u| ws.energy(u)).collect();
        let segments = (0..n - 1)
            .map(|i| segment_max(ws, &nodes[i], energies[i], &nodes[i + 1], energies[i + 1]))
            .collect();
        Path {
            nodes,
            energies,
            segments,
        }
    }

    fn top_segment(&self) -> usize {
        (0..self.segments.len()).fold(0, |k, i| {
            if self.segments[i].value > self.segments[k].value {
                i
            } else {
                k
            }
        })
    }

    /// Makes the path maximum a node and returns its index.
    fn locate_max(&mut self) -> usize {
        let j = self.top_segment();
        let SegmentMax { tau, value } = self.segments[j];
        if tau <= 0.0 {
            return j;
        }
        if tau >= 1.0 {
            return j + 1;
        }
        let node = lerp(&self.nodes[j], &self.nodes[j + 1], tau);
        self.nodes.insert(j + 1, node);
        self.energies.insert(j + 1, value);
        self.segments[j] = SegmentMax { tau: 1.0, value };
        self.segments.insert(j + 1, SegmentMax { tau: 0.0, value });
        j + 1
    }
}

pub fn mountain_pass_solve(prob: &KirchhoffProblem, e: &GridFunction, opts: &MountainPassOptions) -> Result<SolveReport> {
    solve_in_complement(prob, e, opts, &[])
}

/// Mountain-pass iteration with descent directions restricted to the
/// `H¹₀`-orthogonal complement of `excluded` (an `H¹₀`-orthonormal family).
/// Convergence is still judged on the full residual, so only genuine
/// critical points are returned.
pub(crate) fn solve_in_complement(
    prob: &KirchhoffProblem,
    e: &GridFunction,
    opts: &MountainPassOptions,
    excluded: &[Vec<f64>],
) -> Result<SolveReport> {
    prob.require_valid()?;
    e.require_zero_trace()?;
    if opts.n_path < 3 {
        return Err(Error::Shape(format!("path needs at least 3 nodes (got {})", opts.n_path)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive (got {})", opts.tol)));
    }
    let ws = Workspace::new(prob);
    let end_energy = ws.energy(e.values());
    if !(end_energy < 0.0) {
        return Err(Error::Domain(format!("path endpoint must have J(e) < 0 (got {end_energy})")));
    }

    let mut path = Path::straight(&ws, e.values(), opts.n_path);
    let mut trajectory = Vec::new();
    let mut path_energies = Vec::new();
    let last = |p: &Path| p.nodes.len() - 1;

    for iteration in 0..=opts.max_iter {
        let m = path.locate_max();
        if m == 0 || m == last(&path) {
            return Err(Error::GeometryNotFound("path maximum sits at an endpoint".into()));
        }
        let top = path.energies[m];
        let (r, a_value) = ws.residual(&path.nodes[m]);
        let residual = l2(&r);
        let k = prob.nonlocal_coefficient(a_value);
        trajectory.push(IterationRecord {
            iteration,
            path_max_energy: top,
            residual,
            a_value,
            nonlocal_coefficient: k,
        });
        path_energies.push(top);
        if !(k > 0.0) {
            return Err(Error::DegenerateCoefficient {
                coefficient: k,
                iteration,
            });
        }
        if residual <= opts.tol {
            let solution = ws.grid(path.nodes.swap_remove(m));
            return Ok(SolveReport {
                solution,
                energy: top,
                residual_norm: residual,
                a_value,
                nonlocal_coefficient: k,
                below_ps_ceiling: top < prob.ps_ceiling(),
                iterations: iteration,
                path_energies,
                trajectory,
            });
        }
        if iteration == opts.max_iter {
            break;
        }

        let mut dir = ws.stiff.riesz(&r);
        if !excluded.is_empty() {
            for basis in excluded {
                let c = ws.stiff.inner(&dir, basis);
                dir.iter_mut().zip(basis).for_each(|(d, b)| *d -= c * b);
            }
            // stationary inside the complement but not in the full space
            if l2(&ws.stiff.apply(&dir)) <= 1e-2 * opts.tol {
                return Err(Error::MaxIterations { iterations: iteration, residual });
            }
        }
        let decrease = dot(&r, &dir);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<f64> = path.nodes[m].iter().zip(&dir).map(|(u, d)| u - step * d).collect();
            let f = ws.energy(&cand);
            if f <= top - ARMIJO * step * decrease {
                let left = segment_max(&ws, &path.nodes[m - 1], path.energies[m - 1], &cand, f);
                let right = segment_max(&ws, &cand, f, &path.nodes[m + 1], path.energies[m + 1]);
                if left.value <= top && right.value <= top {
                    accepted = Some((cand, f, left, right));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((cand, f, left, right)) = accepted else {
            return Err(Error::MaxIterations {
                iterations: iteration,
                residual,
            });
        };
        path.nodes[m] = cand;
        path.energies[m] = f;
        path.segments[m - 1] = left;
        path.segments[m] = right;
    }
    let residual = trajectory.last().map_or(f64::NAN, |r| r.residual);
    Err(Error::MaxIterations {
        iterations: opts.max_iter,
        residual,
    })
}

/// Iteration log as CSV with a header row and 17 significant digits.
pub fn write_iteration_csv(records: &[IterationRecord]) -> String {
    let mut s = String::from("iteration,path_max_energy,residual,a_value,nonlocal_coefficient\n");
    for r in records {
        let _ = writeln!(
            s,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.iteration, r.path_max_energy, r.residual, r.a_value, r.nonlocal_coefficient
        );
    }
    s
}
