//! The Kirchhoff energy
//!
//! ```text
//! J(u) = a A(u) - (b/2) A(u)² - λ ∫ |u|^p / p - ∫ G(x, u),   A(u) = ∫ |∇u|^p / p,
//! ```
//!
//! its derivative tested against hat functions, and the power-type
//! nonlinearities `g(x, s) = c |s|^{q(x)-2} s`.

use std::sync::Arc;

use crate::discretization::{element_gradient, GridFunction, Mesh};
use crate::error::{shape_check, Error, Result};
use crate::exponents::{validate_problem_exponents, ExponentField, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearityKind {
    Zero,
    PurePower,
    /// `coefficient · |s|^{q-2} s`, coefficient > 0.
    ScaledPower(f64),
}

/// Odd power nonlinearity with its growth exponent and AR parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearitySpec {
    pub kind: NonlinearityKind,
    pub q: ExponentField,
    /// Ambrosetti–Rabinowitz exponent θ.
    pub theta: f64,
    /// AR threshold `s_A ≥ 0`.
    pub s_a: f64,
}

impl NonlinearitySpec {
    pub fn new(kind: NonlinearityKind, q: ExponentField, theta: f64, s_a: f64) -> Result<Self> {
        if let NonlinearityKind::ScaledPower(c) = kind {
            if !(c > 0.0) {
                return Err(Error::Domain(format!("power coefficient must be positive (got {c})")));
            }
        }
        if !(s_a >= 0.0) {
            return Err(Error::Domain(format!("s_A must be nonnegative (got {s_a})")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain("theta must be finite".into()));
        }
        Ok(NonlinearitySpec { kind, q, theta, s_a })
    }

    pub fn pure_power(q: ExponentField, theta: f64) -> Result<Self> {
        Self::new(NonlinearityKind::PurePower, q, theta, 1.0)
    }

    pub fn coefficient(&self) -> f64 {
        match self.kind {
            NonlinearityKind::Zero => 0.0,
            NonlinearityKind::PurePower => 1.0,
            NonlinearityKind::ScaledPower(c) => c,
        }
    }

    /// `(g(x_e, s), G(x_e, s))` at the exponent sample of element `e`.
    #[inline]
    pub fn eval(&self, e: usize, s: f64) -> (f64, f64) {
        let c = self.coefficient();
        if c == 0.0 || s == 0.0 {
            return (0.0, 0.0);
        }
        let q = self.q[e];
        let abs_pow = s.abs().powf(q - 2.0);
        (c * abs_pow * s, c * abs_pow * s * s / q)
    }
}

/// `(g, G)` at element `e`, see [`NonlinearitySpec::eval`].
pub fn nonlinearity_eval(spec: &NonlinearitySpec, element: usize, s: f64) -> (f64, f64) {
    spec.eval(element, s)
}

/// Constants, exponents and mesh of one problem instance.
#[derive(Debug, Clone)]
pub struct KirchhoffProblem {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub p: ExponentField,
    pub g: NonlinearitySpec,
    mesh: Arc<Mesh>,
}

impl KirchhoffProblem {
    pub fn new(a: f64, b: f64, lambda: f64, p: ExponentField, g: NonlinearitySpec, mesh: Arc<Mesh>) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("need a > 0 and b > 0 (got a = {a}, b = {b})")));
        }
        if !lambda.is_finite() {
            return Err(Error::Domain("lambda must be finite".into()));
        }
        shape_check("exponent p", p.len(), mesh.n_elements())?;
        shape_check("exponent q", g.q.len(), mesh.n_elements())?;
        Ok(KirchhoffProblem {
            a,
            b,
            lambda,
            p,
            g,
            mesh,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    /// `a² / (2b)`: the Palais–Smale ceiling, also the supremum of `aA - (b/2)A²`.
    pub fn ps_ceiling(&self) -> f64 {
        self.a * self.a / (2.0 * self.b)
    }

    /// Nonlocal coefficient `a - b A`.
    pub fn nonlocal_coefficient(&self, a_value: f64) -> f64 {
        self.a - self.b * a_value
    }

    pub fn validate(&self) -> ValidationReport {
        validate_problem_exponents(&self.p, &self.g.q, self.mesh.dim())
            .expect("shapes checked at construction")
    }

    /// Errors unless the exponent chain holds and θ is admissible.
    pub fn require_valid(&self) -> Result<ValidationReport> {
        let report = self.validate();
        if !report.chain_ok {
            let names: Vec<&str> = report
                .failures
                .iter()
                .filter(|f| f.condition.is_chain())
                .map(|f| f.condition.label())
                .collect();
            return Err(Error::Domain(format!("exponent chain violated: {}", names.join(", "))));
        }
        if !report.admits_theta(self.g.theta) {
            return Err(Error::Domain(format!(
                "theta = {} outside the admissible range {}",
                self.g.theta,
                report
                    .theta_interval
                    .map_or("(empty)".to_string(), |iv| format!("{iv} ∩ (-∞, {}]", report.q_lower))
            )));
        }
        Ok(report)
    }

    /// Problem with the same data on a different λ.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        KirchhoffProblem {
            lambda,
            ..self.clone()
        }
    }

    /// Per-term breakdown of `J(u)`.
    pub fn energy_parts(&self, u: &GridFunction) -> Result<EnergyParts> {
        self.check_function(u)?;
        Ok(self.energy_parts_unchecked(u.values()))
    }

    pub(crate) fn energy_parts_unchecked(&self, values: &[f64]) -> EnergyParts {
        let mesh = &*self.mesh;
        let w = mesh.centroid_weight();
        let (mut a_value, mut lower, mut primitive) = (0.0, 0.0, 0.0);
        for e in 0..mesh.n_elements() {
            let m = mesh.measures()[e];
            let p = self.p[e];
            let grad = element_gradient(mesh, e, values);
            a_value += grad[0].hypot(grad[1]).powf(p) / p * m;
            let uc = mesh.element(e).iter().map(|&v| values[v]).sum::<f64>() * w;
            if uc != 0.0 {
                lower += uc.abs().powf(p) / p * m;
                primitive += self.g.eval(e, uc).1 * m;
            }
        }
        EnergyParts {
            a_value,
            lower_order: lower,
            primitive,
        }
    }

    pub(crate) fn energy_unchecked(&self, values: &[f64]) -> f64 {
        self.energy_parts_unchecked(values).energy(self)
    }

    /// Residual vector `⟨J'(u), φ_i⟩` (zero at boundary vertices) and `A(u)`.
    pub(crate) fn residual_unchecked(&self, values: &[f64]) -> (Vec<f64>, f64) {
        let mesh = &*self.mesh;
        let n_el = mesh.n_elements();
        let w = mesh.centroid_weight();
        let mut a_value = 0.0;
        let mut grads = Vec::with_capacity(n_el);
        for e in 0..n_el {
            let p = self.p[e];
            let g = element_gradient(mesh, e, values);
            let mag = g[0].hypot(g[1]);
            a_value += mag.powf(p) / p * mesh.measures()[e];
            // |∇u|^{p-2} ∇u, continuously extended by 0 where ∇u = 0
            let flux = if mag == 0.0 { 0.0 } else { mag.powf(p - 2.0) };
            grads.push([flux * g[0], flux * g[1]]);
        }
        let k = self.nonlocal_coefficient(a_value);
        let mut r = vec![0.0; mesh.n_vertices()];
        for (e, flux) in grads.iter().enumerate() {
            let m = mesh.measures()[e];
            let el = mesh.element(e);
            let uc = el.iter().map(|&v| values[v]).sum::<f64>() * w;
            let source = if uc == 0.0 {
                0.0
            } else {
                self.lambda * uc.abs().powf(self.p[e] - 2.0) * uc + self.g.eval(e, uc).0
            };
            for (&v, dphi) in el.iter().zip(mesh.basis_gradients(e)) {
                r[v] += (k * (flux[0] * dphi[0] + flux[1] * dphi[1]) - source * w) * m;
            }
        }
        for (v, x) in r.iter_mut().enumerate() {
            if mesh.is_boundary(v) {
                *x = 0.0;
            }
        }
        (r, a_value)
    }

    fn check_function(&self, u: &GridFunction) -> Result<()> {
        if !Arc::ptr_eq(u.mesh(), &self.mesh) && **u.mesh() != *self.mesh {
            return Err(Error::Shape("grid function lives on a different mesh".into()));
        }
        u.require_zero_trace()
    }
}

/// `A(u)`, `∫ |u|^p / p` and `∫ G(x, u)` of one function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub a_value: f64,
    pub lower_order: f64,
    pub primitive: f64,
}

impl EnergyParts {
    /// The local part `a A - (b/2) A²`, bounded above by `a²/(2b)`.
    pub fn quadratic_part(&self, prob: &KirchhoffProblem) -> f64 {
        prob.a * self.a_value - 0.5 * prob.b * self.a_value * self.a_value
    }

    pub fn energy(&self, prob: &KirchhoffProblem) -> f64 {
        self.quadratic_part(prob) - prob.lambda * self.lower_order - self.primitive
    }
}

/// `A(u) = ∫ |∇u|^{p(x)} / p(x)`.
pub fn kirchhoff_a(u: &GridFunction, p: &ExponentField) -> Result<f64> {
    u.require_zero_trace()?;
    let mesh = u.mesh();
    shape_check("exponent field", p.len(), mesh.n_elements())?;
    Ok((0..mesh.n_elements())
        .map(|e| {
            let g = element_gradient(mesh, e, u.values());
            g[0].hypot(g[1]).powf(p[e]) / p[e] * mesh.measures()[e]
        })
        .sum())
}

pub fn energy_j(u: &GridFunction, prob: &KirchhoffProblem) -> Result<f64> {
    Ok(prob.energy_parts(u)?.energy(prob))
}

/// Residual `⟨J'(u), φ_i⟩` for every interior hat function; boundary entries are 0.
pub fn gradient_j(u: &GridFunction, prob: &KirchhoffProblem) -> Result<GridFunction> {
    prob.check_function(u)?;
    let (r, _) = prob.residual_unchecked(u.values());
    GridFunction::raw(u.mesh().clone(), r)
}

/// One failed Ambrosetti–Rabinowitz check.
#[derive(Debug, Clone, PartialEq)]
pub enum ArViolation {
    /// `|s| < s_A`: the point is outside the region the condition covers.
    BelowThreshold { s: f64 },
    /// `0 < θ G(x, s) ≤ s g(x, s)` fails.
    Condition { element: usize, s: f64, theta_g: f64, s_g: f64 },
    /// `G(x, s) ≥ C₁ |s|^θ` fails.
    LowerBound { element: usize, s: f64, primitive: f64, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArReport {
    /// `C₁ = min_x G(x, s_A) / s_A^θ`.
    pub c1: f64,
    pub violations: Vec<ArViolation>,
}

impl ArReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn ar_condition_check(spec: &NonlinearitySpec, s_grid: &[f64]) -> ArReport {
    let theta = spec.theta;
    let n_el = spec.q.len();
    // reference level for C₁; s_A = 0 leaves it to the smallest grid point
    let s_ref = if spec.s_a > 0.0 {
        spec.s_a
    } else {
        s_grid
            .iter()
            .map(|s| s.abs())
            .filter(|&s| s > 0.0)
            .fold(f64::INFINITY, f64::min)
    };
    let c1 = if s_ref.is_finite() {
        (0..n_el)
            .map(|e| spec.eval(e, s_ref).1 / s_ref.powf(theta))
            .fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let mut violations = Vec::new();
    for &s in s_grid {
        if s.abs() < spec.s_a {
            violations.push(ArViolation::BelowThreshold { s });
            continue;
        }
        for e in 0..n_el {
            let (g, big_g) = spec.eval(e, s);
            let (theta_g, s_g) = (theta * big_g, s * g);
            if !(0.0 < theta_g && theta_g <= s_g) {
                violations.push(ArViolation::Condition {
                    element: e,
                    s,
                    theta_g,
                    s_g,
                });
            }
            let bound = c1 * s.abs().powf(theta);
            if s.abs() >= s_ref && big_g < bound * (1.0 - 1e-12) {
                violations.push(ArViolation::LowerBound {
                    element: e,
                    s,
                    primitive: big_g,
                    bound,
                });
            }
        }
    }
    ArReport { c1, violations }
}
