//! Minimization of the Rayleigh quotient
//! `R(u) = ∫ |∇u|^{p(x)}/p(x) / ∫ |u|^{p(x)}/p(x)` over zero-trace grid functions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dot, ARMIJO, MAX_HALVINGS};
use crate::discretization::{element_gradient, GridFunction, Mesh};
use crate::error::{shape_check, Error, Result};
use crate::exponents::ExponentField;
use crate::linalg::Stiffness;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighOptions {
    /// Relative stationarity tolerance `‖∇R‖_{H⁻¹} ‖u‖_{H¹₀} / R`.
    pub tol: f64,
    pub max_iter: usize,
    /// Independent random starts; the smallest quotient wins.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RayleighOptions {
    fn default() -> Self {
        RayleighOptions {
            tol: 1e-6,
            max_iter: 20_000,
            restarts: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RayleighResult {
    pub value: f64,
    pub minimizer: GridFunction,
    pub iterations: usize,
}

struct Quotient<'a> {
    p: &'a ExponentField,
    mesh: &'a Mesh,
}

impl Quotient<'_> {
    /// `(numerator, denominator)` of the quotient.
    fn parts(&self, u: &[f64]) -> (f64, f64) {
        let w = self.mesh.centroid_weight();
        let (mut num, mut den) = (0.0, 0.0);
        for e in 0..self.mesh.n_elements() {
            let (p, m) = (self.p[e], self.mesh.measures()[e]);
            let g = element_gradient(self.mesh, e, u);
            num += g[0].hypot(g[1]).powf(p) / p * m;
            let uc: f64 = self.mesh.element(e).iter().map(|&v| u[v]).sum::<f64>() * w;
            den += uc.abs().powf(p) / p * m;
        }
        (num, den)
    }

    fn value(&self, u: &[f64]) -> f64 {
        let (n, d) = self.parts(u);
        n / d
    }

    /// Hat-function gradient of `R`, zero on the boundary.
    fn gradient(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let (num, den) = self.parts(u);
        let r = num / den;
        let w = self.mesh.centroid_weight();
        let mut grad = vec![0.0; u.len()];
        for e in 0..self.mesh.n_elements() {
            let (p, m) = (self.p[e], self.mesh.measures()[e]);
            let g = element_gradient(self.mesh, e, u);
            let mag = g[0].hypot(g[1]);
            let flux = if mag == 0.0 { 0.0 } else { mag.powf(p - 2.0) };
            let el = self.mesh.element(e);
            let uc: f64 = el.iter().map(|&v| u[v]).sum::<f64>() * w;
            let src = if uc == 0.0 { 0.0 } else { uc.abs().powf(p - 2.0) * uc };
            for (&v, dphi) in el.iter().zip(self.mesh.basis_gradients(e)) {
                grad[v] += (flux * (g[0] * dphi[0] + g[1] * dphi[1]) - r * src * w) * m / den;
            }
        }
        for (v, x) in grad.iter_mut().enumerate() {
            if self.mesh.is_boundary(v) {
                *x = 0.0;
            }
        }
        (r, grad)
    }
}

/// `R(u)` for a nonzero zero-trace grid function.
pub fn rayleigh_quotient(u: &GridFunction, p: &ExponentField) -> Result<f64> {
    u.require_zero_trace()?;
    shape_check("exponent field", p.len(), u.mesh().n_elements())?;
    if u.is_zero() {
        return Err(Error::Domain("Rayleigh quotient of the zero function".into()));
    }
    Ok(Quotient { p, mesh: u.mesh() }.value(u.values()))
}

/// Sobolev-gradient descent on `R` with Armijo backtracking from positive random starts.
pub fn rayleigh_quotient_min(p: &ExponentField, mesh: &Arc<Mesh>, opts: &RayleighOptions) -> Result<RayleighResult> {
    shape_check("exponent field", p.len(), mesh.n_elements())?;
    if mesh.n_interior() == 0 {
        return Err(Error::Shape("mesh has no interior vertices".into()));
    }
    let q = Quotient { p, mesh };
    let stiff = Stiffness::new(mesh);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<RayleighResult> = None;
    let mut last_err = None;
    for _ in 0..opts.restarts.max(1) {
        let start: Vec<f64> = (0..mesh.n_vertices())
            .map(|v| if mesh.is_boundary(v) { 0.0 } else { rng.gen_range(0.1..1.0) })
            .collect();
        match descend(&q, &stiff, start, opts) {
            Ok((value, u, iterations)) => {
                if best.as_ref().is_none_or(|b| value < b.value) {
                    best = Some(RayleighResult {
                        value,
                        minimizer: GridFunction::raw(mesh.clone(), u)?,
                        iterations,
                    });
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one start ran"))
}

/// Exact line minimization of `s ↦ R(eˢ u)`; variable exponents make the
/// quotient scale-dependent and this direction is nearly flat.
fn rescale(q: &Quotient, u: &mut [f64]) {
    let f = |s: f64| q.value(&u.iter().map(|x| x * s.exp()).collect::<Vec<_>>());
    let f0 = f(0.0);
    let mut h = 0.05;
    let dir = if f(h) < f0 {
        1.0
    } else if f(-h) < f0 {
        -1.0
    } else {
        return;
    };
    // bracket [a, c] around b with f(b) < f(a), f(b) < f(c)
    let (mut a, mut b, mut fb) = (0.0, dir * h, f(dir * h));
    let mut c = dir * 2.0 * h;
    let mut fc = f(c);
    while fc < fb {
        if c.abs() > 50.0 {
            break;
        }
        a = b;
        b = c;
        fb = fc;
        h *= 2.0;
        c = b + dir * h;
        fc = f(c);
    }
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let s = 0.5 * (lo + hi);
    if f(s) < f0 {
        let t = s.exp();
        u.iter_mut().for_each(|x| *x *= t);
    }
}

fn descend(q: &Quotient, stiff: &Stiffness, mut u: Vec<f64>, opts: &RayleighOptions) -> Result<(f64, Vec<f64>, usize)> {
    let mut stat = f64::INFINITY;
    let mut last_step: Option<f64> = None;
    for it in 0..=opts.max_iter {
        let (r, grad) = q.gradient(&u);
        let dir = stiff.riesz(&grad);
        let slope = dot(&grad, &dir);
        stat = slope.max(0.0).sqrt() * stiff.energy_norm(&u) / r;
        if stat <= opts.tol {
            return Ok((r, u, it));
        }
        if it == opts.max_iter {
            break;
        }
        // the quotient is scale-free for constant p, so steps are taken relative to ‖u‖
        let mut step = last_step.map_or(stiff.energy_norm(&u) / slope.sqrt(), |s| 4.0 * s);
        let mut moved = false;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<f64> = u.iter().zip(&dir).map(|(x, d)| x - step * d).collect();
            let rc = q.value(&cand);
            if rc <= r - ARMIJO * step * slope {
                u = cand;
                moved = true;
                last_step = Some(step);
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
        if !q.p.is_constant() {
            rescale(q, &mut u);
        }
    }
    Err(Error::MaxIterations {
        iterations: opts.max_iter,
        residual: stat,
    })
}
