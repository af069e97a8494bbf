//! Variable exponent fields sampled per element, and the structural
//! conditions tying the diffusion exponent `p(·)` to the growth exponent
//! `q(·)` and the Ambrosetti–Rabinowitz exponent `θ`.

use std::fmt;

use crate::discretization::Mesh;
use crate::error::{shape_check, Error, Result};

/// An exponent function sampled at element centroids, with cached extrema.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentField {
    values: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl ExponentField {
    /// Builds a field from raw per-element samples; every sample must exceed 1.
    pub fn from_samples(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("exponent field needs at least one sample".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(**v > 1.0) || !v.is_finite()) {
            return Err(Error::Domain(format!("exponent must exceed 1 (got {bad})")));
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ExponentField { values, lo, hi })
    }

    /// Builds a field on `mesh`, checking one sample per element.
    pub fn build(samples: &[f64], mesh: &Mesh) -> Result<Self> {
        shape_check("exponent samples", samples.len(), mesh.n_elements())?;
        Self::from_samples(samples.to_vec())
    }

    pub fn constant(value: f64, mesh: &Mesh) -> Result<Self> {
        Self::from_samples(vec![value; mesh.n_elements()])
    }

    /// `c0 + c1·x` evaluated at element centroids (x is the first coordinate).
    pub fn affine(c0: f64, c1: f64, mesh: &Mesh) -> Result<Self> {
        let values = (0..mesh.n_elements())
            .map(|e| c0 + c1 * mesh.centroid(e)[0])
            .collect();
        Self::from_samples(values)
    }

    /// Elementwise image under `f`; the result is revalidated.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_samples(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise conjugate exponent `p / (p - 1)`.
    pub fn conjugate(&self) -> Self {
        self.map(|p| p / (p - 1.0))
            .expect("conjugate of an exponent > 1 exceeds 1")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Infimum `p⁻`.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Supremum `p⁺`.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_constant(&self) -> bool {
        self.lo == self.hi
    }
}

impl std::ops::Index<usize> for ExponentField {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.values[e]
    }
}

/// Critical Sobolev exponent `N p / (N - p)` sampled elementwise.
///
/// Only the subcritical regime `p < N` is accepted here; see
/// [`validate_problem_exponents`] for how `p ≥ N` enters the exponent chain.
pub fn critical_exponent(p: &ExponentField, dimension: usize) -> Result<ExponentField> {
    let n = dimension as f64;
    if let Some(bad) = p.values().iter().find(|&&v| v >= n) {
        return Err(Error::Domain(format!(
            "supercritical exponent sample: p = {bad} >= N = {dimension}"
        )));
    }
    p.map(|v| n * v / (n - v))
}

/// Pointwise critical exponent, `+∞` where `p ≥ N`.
fn critical_value(p: f64, dimension: usize) -> f64 {
    let n = dimension as f64;
    if p < n {
        n * p / (n - p)
    } else {
        f64::INFINITY
    }
}

/// Named structural conditions on `(p, q, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `1 < p⁻`
    PLowerAboveOne,
    /// `p⁺ < 2p⁻`
    PUpperBelowTwicePLower,
    /// `2p⁻ < q⁻`
    TwicePLowerBelowQLower,
    /// `q(x) < p*(x)` at every element
    QBelowCritical,
    /// `(p⁺)² < 2(p⁻)²`, i.e. the θ interval is nonempty
    ThetaIntervalEmpty,
}

impl Condition {
    /// Whether the condition is part of the exponent chain proper.
    pub fn is_chain(self) -> bool {
        !matches!(self, Condition::ThetaIntervalEmpty)
    }

    pub fn label(self) -> &'static str {
        match self {
            Condition::PLowerAboveOne => "1 < p⁻",
            Condition::PUpperBelowTwicePLower => "p⁺ < 2p⁻",
            Condition::TwicePLowerBelowQLower => "2p⁻ < q⁻",
            Condition::QBelowCritical => "q(x) < p*(x)",
            Condition::ThetaIntervalEmpty => "theta interval empty",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub condition: Condition,
    pub detail: String,
}

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OpenInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Outcome of checking the exponent chain
/// `1 < p⁻ ≤ p(x) ≤ p⁺ < 2p⁻ < q⁻ ≤ q(x) < p*(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub chain_ok: bool,
    pub theta_interval: Option<OpenInterval>,
    pub failures: Vec<Failure>,
    /// `q⁻`, the upper cap on θ for power nonlinearities.
    pub q_lower: f64,
}

impl ValidationReport {
    pub fn has(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    /// True when the chain holds and the θ interval is nonempty.
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Whether `theta` lies in `(p⁺, 2(p⁻)²/p⁺) ∩ (-∞, q⁻]`.
    pub fn admits_theta(&self, theta: f64) -> bool {
        self.theta_interval
            .is_some_and(|iv| iv.contains(theta) && theta <= self.q_lower)
    }

    /// `min(q⁻, 2(p⁻)²/p⁺ − 10⁻⁶)`.
    pub fn default_theta(&self) -> Option<f64> {
        self.theta_interval
            .map(|iv| self.q_lower.min(iv.hi - 1e-6))
            .filter(|&t| self.admits_theta(t))
    }
}

pub fn validate_problem_exponents(
    p: &ExponentField,
    q: &ExponentField,
    dimension: usize,
) -> Result<ValidationReport> {
    shape_check("growth exponent q", q.len(), p.len())?;
    let (p_lo, p_hi, q_lo) = (p.lo(), p.hi(), q.lo());
    let mut failures = Vec::new();
    let mut fail = |condition, detail: String| failures.push(Failure { condition, detail });

    if !(1.0 < p_lo) {
        fail(Condition::PLowerAboveOne, format!("p⁻ = {p_lo}"));
    }
    if !(p_hi < 2.0 * p_lo) {
        fail(
            Condition::PUpperBelowTwicePLower,
            format!("p⁺ = {p_hi}, 2p⁻ = {}", 2.0 * p_lo),
        );
    }
    if !(2.0 * p_lo < q_lo) {
        fail(
            Condition::TwicePLowerBelowQLower,
            format!("2p⁻ = {}, q⁻ = {q_lo}", 2.0 * p_lo),
        );
    }
    let offending = p
        .values()
        .iter()
        .zip(q.values())
        .position(|(&pe, &qe)| !(qe < critical_value(pe, dimension)));
    if let Some(e) = offending {
        fail(
            Condition::QBelowCritical,
            format!(
                "element {e}: q = {}, p* = {}",
                q[e],
                critical_value(p[e], dimension)
            ),
        );
    }

    let theta_hi = 2.0 * p_lo * p_lo / p_hi;
    let theta_interval = if p_hi * p_hi < 2.0 * p_lo * p_lo {
        Some(OpenInterval { lo: p_hi, hi: theta_hi })
    } else {
        fail(
            Condition::ThetaIntervalEmpty,
            format!("(p⁺)² = {}, 2(p⁻)² = {}", p_hi * p_hi, 2.0 * p_lo * p_lo),
        );
        None
    };

    let chain_ok = !failures.iter().any(|f| f.condition.is_chain());
    Ok(ValidationReport {
        chain_ok,
        theta_interval,
        failures,
        q_lower: q_lo,
    })
}
