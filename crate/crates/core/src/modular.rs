//! Variable-exponent Lebesgue and Sobolev quantities on element samples:
//! the modular `ρ_p(u) = ∫ |u|^{p(x)}`, the Luxemburg norm, the Hölder
//! pairing with the conjugate exponent, and `‖u‖ = |∇u|_{p(·)}`.

use std::fmt;

use crate::discretization::{gradient_magnitudes, quadrature, GridFunction, Mesh};
use crate::error::{shape_check, Result};
use crate::exponents::ExponentField;

/// Value of a modular; always `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ModularValue(f64);

impl ModularValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Value of a norm; always `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NormValue(f64);

impl NormValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ModularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_RTOL: f64 = 1e-12;

fn check_shapes(samples: &[f64], p: &ExponentField, mesh: &Mesh) -> Result<()> {
    shape_check("samples", samples.len(), mesh.n_elements())?;
    shape_check("exponent field", p.len(), mesh.n_elements())
}

/// `∫ |u / scale|^{p(x)}` without shape checks.
fn scaled_modular(samples: &[f64], p: &ExponentField, mesh: &Mesh, scale: f64) -> f64 {
    samples
        .iter()
        .zip(p.values())
        .zip(mesh.measures())
        .map(|((u, p), m)| (u.abs() / scale).powf(*p) * m)
        .sum()
}

pub fn modular(samples: &[f64], p: &ExponentField, mesh: &Mesh) -> Result<ModularValue> {
    check_shapes(samples, p, mesh)?;
    Ok(ModularValue(scaled_modular(samples, p, mesh, 1.0)))
}

/// `inf { μ > 0 : ρ_p(u/μ) ≤ 1 }`.
///
/// `μ ↦ ρ_p(u/μ)` is continuous and strictly decreasing for `u ≠ 0`, so the
/// root is bracketed around `max|u|·|Ω|^{1/p⁻}` and refined by bisection.
pub fn luxemburg_norm(samples: &[f64], p: &ExponentField, mesh: &Mesh) -> Result<NormValue> {
    check_shapes(samples, p, mesh)?;
    Ok(NormValue(luxemburg_unchecked(samples, p, mesh)))
}

pub(crate) fn luxemburg_unchecked(samples: &[f64], p: &ExponentField, mesh: &Mesh) -> f64 {
    let peak = samples.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let excess = |mu: f64| scaled_modular(samples, p, mesh, mu) - 1.0;
    if excess(1.0) == 0.0 {
        return 1.0;
    }
    let s = peak * mesh.total_measure().powf(1.0 / p.lo());
    let (mut lo, mut hi) = (1e-3 * s, 1e3 * s);
    while excess(lo) < 0.0 {
        lo *= 1e-3;
    }
    while excess(hi) > 0.0 {
        hi *= 1e3;
    }
    while hi - lo > LUXEMBURG_RTOL * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match excess(mid) {
            x if x > 0.0 => lo = mid,
            x if x < 0.0 => hi = mid,
            _ => return mid,
        }
    }
    0.5 * (lo + hi)
}

/// `∫ u v` together with the Hölder bound
/// `(1/p⁻ + 1/p'⁻) |u|_{p(·)} |v|_{p'(·)}`, `p' = p/(p-1)` pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPairing {
    pub pairing: f64,
    pub bound: f64,
}

impl HolderPairing {
    pub fn holds(&self) -> bool {
        self.pairing.abs() <= self.bound
    }
}

pub fn holder_pairing(u: &[f64], v: &[f64], p: &ExponentField, mesh: &Mesh) -> Result<HolderPairing> {
    check_shapes(u, p, mesh)?;
    check_shapes(v, p, mesh)?;
    let conj = p.conjugate();
    let products: Vec<f64> = u.iter().zip(v).map(|(a, b)| a * b).collect();
    let pairing = quadrature(&products, mesh);
    let constant = 1.0 / p.lo() + 1.0 / conj.lo();
    let bound = constant * luxemburg_unchecked(u, p, mesh) * luxemburg_unchecked(v, &conj, mesh);
    Ok(HolderPairing { pairing, bound })
}

/// `‖u‖ = |∇u|_{p(·)}` for a zero-trace grid function.
pub fn sobolev_norm(u: &GridFunction, p: &ExponentField) -> Result<NormValue> {
    u.require_zero_trace()?;
    let mags = gradient_magnitudes(u);
    luxemburg_norm(&mags, p, u.mesh())
}

/// Which norm/modular power inequality was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `|u| > 1 ⇒ |u|^{p⁻} ≤ ρ(u) ≤ |u|^{p⁺}`
    AboveOne,
    /// `|u| < 1 ⇒ |u|^{p⁺} ≤ ρ(u) ≤ |u|^{p⁻}`
    BelowOne,
    /// `|u| ⋛ 1 ⇔ ρ(u) ⋛ 1`
    UnitComparison,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub norm: f64,
    pub modular: f64,
    pub violations: Vec<Relation>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Slack absorbing the bisection tolerance in the power inequalities.
const RELATION_RTOL: f64 = 1e-9;

pub fn check_modular_norm_relations(u: &[f64], p: &ExponentField, mesh: &Mesh) -> Result<RelationReport> {
    let rho = modular(u, p, mesh)?.value();
    let norm = luxemburg_norm(u, p, mesh)?.value();
    let (lo, hi) = (p.lo(), p.hi());
    let within = |lower: f64, x: f64, upper: f64| {
        lower * (1.0 - RELATION_RTOL) <= x && x <= upper * (1.0 + RELATION_RTOL)
    };
    let mut violations = Vec::new();
    if norm > 1.0 && !within(norm.powf(lo), rho, norm.powf(hi)) {
        violations.push(Relation::AboveOne);
    }
    if norm < 1.0 && !within(norm.powf(hi), rho, norm.powf(lo)) {
        violations.push(Relation::BelowOne);
    }
    // strict comparisons with 1 must agree outside the bisection band
    let (n_tol, r_tol) = (RELATION_RTOL, RELATION_RTOL * hi);
    let disagree = (norm > 1.0 + n_tol && rho <= 1.0)
        || (norm < 1.0 - n_tol && rho >= 1.0)
        || (rho > 1.0 + r_tol && norm <= 1.0)
        || (rho < 1.0 - r_tol && norm >= 1.0);
    if disagree {
        violations.push(Relation::UnitComparison);
    }
    Ok(RelationReport {
        norm,
        modular: rho,
        violations,
    })
}
