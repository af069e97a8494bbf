//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use kirchhoff::{ExponentField, GridFunction, KirchhoffProblem, Mesh, NonlinearitySpec};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn interval(n: usize, len: f64) -> Arc<Mesh> {
    Arc::new(Mesh::interval(n, 0.0, len).unwrap())
}

pub fn square(n: usize) -> Arc<Mesh> {
    Arc::new(Mesh::rect(n, n, [0.0, 0.0], [1.0, 1.0]).unwrap())
}

/// Model problem on `(0,1)`: `p ≡ 2`, `q ≡ 4.5`, `a = 1`, `λ = 0`, `θ = 3.2`.
pub fn model_problem(n: usize, b: f64) -> KirchhoffProblem {
    let mesh = interval(n, 1.0);
    let p = ExponentField::constant(2.0, &mesh).unwrap();
    let q = ExponentField::constant(4.5, &mesh).unwrap();
    let g = NonlinearitySpec::pure_power(q, 3.2).unwrap();
    KirchhoffProblem::new(1.0, b, 0.0, p, g, mesh).unwrap()
}

pub fn random_function(mesh: &Arc<Mesh>, rng: &mut impl Rng) -> GridFunction {
    let values = (0..mesh.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridFunction::new(mesh.clone(), values).unwrap()
}

pub fn random_exponent(mesh: &Mesh, lo: f64, hi: f64, rng: &mut impl Rng) -> ExponentField {
    let samples: Vec<f64> = (0..mesh.n_elements()).map(|_| rng.gen_range(lo..hi)).collect();
    ExponentField::build(&samples, mesh).unwrap()
}

/// `k`-th smallest eigenvalue (1-based) of the second-difference matrix
/// `-u''` on `(0, len)` with `n` cells, by Sturm-sequence bisection.
pub fn fd_dirichlet_eigenvalue(n: usize, len: f64, k: usize) -> f64 {
    let h = len / n as f64;
    let diag = 2.0 / (h * h);
    let off = -1.0 / (h * h);
    let m = n - 1;
    // number of eigenvalues strictly below x
    let count_below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..m {
            let sub = if i == 0 { 0.0 } else { off * off / d };
            d = diag - x - sub;
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (0.0, 4.0 / (h * h) + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `Σ w_i |v_i / s|^{p_i} = 1` for `s` by Newton's method in `log s`.
pub fn luxemburg_root(weights: &[f64], values: &[f64], exps: &[f64]) -> f64 {
    let phi = |t: f64| -> (f64, f64) {
        // t = ln s; returns (modular - 1, d/dt)
        let mut f = 0.0;
        let mut df = 0.0;
        for ((w, v), p) in weights.iter().zip(values).zip(exps) {
            if *v == 0.0 {
                continue;
            }
            let term = w * (p * (v.abs().ln() - t)).exp();
            f += term;
            df -= p * term;
        }
        (f - 1.0, df)
    };
    let vmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut t = vmax.ln();
    for _ in 0..200 {
        let (f, df) = phi(t);
        let step = f / df;
        t -= step.clamp(-2.0, 2.0);
        if step.abs() < 1e-15 {
            break;
        }
    }
    t.exp()
}

/// `‖u‖` for `u ≡ c` on `(0,1)` with `p(x) = 2 + x`: root of
/// `∫₀¹ (c/s)^{2+x} dx = 1`, the integral by composite Simpson's rule.
pub fn luxemburg_constant_on_affine(c: f64, panels: usize) -> f64 {
    let weights: Vec<f64> = (0..=panels)
        .map(|i| {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w / (3.0 * panels as f64)
        })
        .collect();
    let exps: Vec<f64> = (0..=panels).map(|i| 2.0 + i as f64 / panels as f64).collect();
    luxemburg_root(&weights, &vec![c; panels + 1], &exps)
}

/// Discrete Euler–Lagrange system of `a A − (b/2)A² − ∫|u|^q/q` for `p ≡ 2`
/// on a uniform grid of `(0, len)`, assembled by hand: element gradients,
/// one-point midpoint rule for the nonlinearity.
pub struct EulerLagrange1d {
    pub n: usize,
    pub h: f64,
    pub a: f64,
    pub b: f64,
    pub q: f64,
}

impl EulerLagrange1d {
    pub fn new(n: usize, len: f64, a: f64, b: f64, q: f64) -> Self {
        EulerLagrange1d {
            n,
            h: len / n as f64,
            a,
            b,
            q,
        }
    }

    fn full(&self, interior: &DVector<f64>) -> Vec<f64> {
        let mut u = vec![0.0; self.n + 1];
        u[1..self.n].copy_from_slice(interior.as_slice());
        u
    }

    fn g(&self, s: f64) -> f64 {
        s.abs().powf(self.q - 2.0) * s
    }

    fn dg(&self, s: f64) -> f64 {
        (self.q - 1.0) * s.abs().powf(self.q - 2.0)
    }

    /// `(L u)_i = (2u_i − u_{i−1} − u_{i+1}) / h`, so that `A = uᵀLu / 2`.
    fn laplacian(&self, u: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.n - 1, |i, _| (2.0 * u[i + 1] - u[i] - u[i + 2]) / self.h)
    }

    pub fn a_value(&self, interior: &DVector<f64>) -> f64 {
        let u = self.full(interior);
        u.windows(2).map(|w| (w[1] - w[0]).powi(2) / self.h).sum::<f64>() / 2.0
    }

    pub fn energy(&self, interior: &DVector<f64>) -> f64 {
        let u = self.full(interior);
        let a_val = self.a_value(interior);
        let prim: f64 = u
            .windows(2)
            .map(|w| self.h * (0.5 * (w[0] + w[1])).abs().powf(self.q) / self.q)
            .sum();
        self.a * a_val - 0.5 * self.b * a_val * a_val - prim
    }

    pub fn residual(&self, interior: &DVector<f64>) -> DVector<f64> {
        let u = self.full(interior);
        let k = self.a - self.b * self.a_value(interior);
        let lu = self.laplacian(&u);
        DVector::from_fn(self.n - 1, |i, _| {
            let (left, right) = (0.5 * (u[i] + u[i + 1]), 0.5 * (u[i + 1] + u[i + 2]));
            k * lu[i] - 0.5 * self.h * (self.g(left) + self.g(right))
        })
    }

    /// `K·L − b (Lu)(Lu)ᵀ − N(u)`.
    pub fn jacobian(&self, interior: &DVector<f64>) -> DMatrix<f64> {
        let u = self.full(interior);
        let m = self.n - 1;
        let k = self.a - self.b * self.a_value(interior);
        let lu = self.laplacian(&u);
        let mut jac = -self.b * &lu * lu.transpose();
        for i in 0..m {
            jac[(i, i)] += 2.0 * k / self.h;
            if i + 1 < m {
                jac[(i, i + 1)] -= k / self.h;
                jac[(i + 1, i)] -= k / self.h;
            }
        }
        for e in 0..self.n {
            // element e joins vertices e and e+1, i.e. interior rows e-1 and e
            let w = 0.25 * self.h * self.dg(0.5 * (u[e] + u[e + 1]));
            let rows: Vec<usize> = [e.checked_sub(1), (e < m).then_some(e)].into_iter().flatten().collect();
            for &r in &rows {
                for &c in &rows {
                    jac[(r, c)] -= w;
                }
            }
        }
        jac
    }

    /// Newton's method on `R(u) = 0` deflated at `known` roots: the update
    /// `δ = −J⁻¹R` is rescaled by `1 / (1 − ∇m·δ / m)` with
    /// `m(u) = Π (1/‖u − r‖² + 1)`.
    pub fn deflated_newton(
        &self,
        start: DVector<f64>,
        known: &[DVector<f64>],
        tol: f64,
        max_iter: usize,
    ) -> Option<DVector<f64>> {
        let mut u = start;
        for _ in 0..max_iter {
            let r = self.residual(&u);
            if r.norm() <= tol {
                return Some(u);
            }
            let delta = self.jacobian(&u).lu().solve(&(-&r))?;
            let mut scale = 1.0;
            if !known.is_empty() {
                // ∇ ln m = Σ −2(u − r)/‖u − r‖⁴ / (1/‖u − r‖² + 1)
                let mut grad_ln_m = DVector::zeros(u.len());
                for root in known {
                    let d = &u - root;
                    let n2 = d.norm_squared();
                    grad_ln_m += d * (-2.0 / (n2 * n2) / (1.0 / n2 + 1.0));
                }
                let denom = 1.0 - grad_ln_m.dot(&delta);
                if denom.abs() > 1e-12 {
                    scale = 1.0 / denom;
                }
            }
            // backtrack on the deflated residual ‖m(u) R(u)‖
            let merit = |x: &DVector<f64>| {
                let m: f64 = known.iter().map(|root| 1.0 / (x - root).norm_squared() + 1.0).product();
                m * self.residual(x).norm()
            };
            let mut step = scale;
            let base = merit(&u);
            let mut next = &u + &delta * step;
            for _ in 0..30 {
                if merit(&next) < base {
                    break;
                }
                step *= 0.5;
                next = &u + &delta * step;
            }
            u = next;
        }
        None
    }

    pub fn to_interior(&self, u: &GridFunction) -> DVector<f64> {
        DVector::from_column_slice(&u.values()[1..self.n])
    }

    pub fn sup_distance(&self, x: &DVector<f64>, u: &GridFunction) -> f64 {
        (x - self.to_interior(u)).amax()
    }

    /// `c·sin(kπx/len)` with `c > 0` the first sign change of
    /// `c ↦ ⟨R(c·s), s⟩`, i.e. the nontrivial critical point along the ray.
    pub fn mode_guess(&self, k: usize) -> DVector<f64> {
        let shape = DVector::from_fn(self.n - 1, |i, _| {
            (k as f64 * std::f64::consts::PI * (i + 1) as f64 / self.n as f64).sin()
        });
        let along = |c: f64| self.residual(&(&shape * c)).dot(&shape);
        let mut lo = 1e-3;
        let mut hi = lo;
        while along(hi) > 0.0 && hi < 1e6 {
            lo = hi;
            hi *= 1.5;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if along(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        shape * (0.5 * (lo + hi))
    }
}
