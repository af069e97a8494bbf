//! Critical-point machinery for the Kirchhoff energy: Rayleigh-quotient
//! eigenvalue estimation, mountain-pass geometry, the mountain-pass solver
//! with Palais–Smale ceiling monitoring, and the symmetric multiplicity search.

mod geometry;
mod mountain_pass;
mod multiplicity;
mod rayleigh;

pub use geometry::{find_negative_energy_point, verify_mountain_geometry, GeometryOptions, GeometryReport};
pub use mountain_pass::{
    mountain_pass_solve, ps_threshold_check, write_iteration_csv, IterationRecord, MountainPassOptions, SolveReport,
};
pub use multiplicity::{multiplicity_outcome, multiplicity_search, MultiplicityOptions, MultiplicityOutcome};
pub use rayleigh::{rayleigh_quotient, rayleigh_quotient_min, RayleighOptions, RayleighResult};

use crate::discretization::GridFunction;
use crate::energy::KirchhoffProblem;
use crate::linalg::Stiffness;

/// Armijo sufficient-decrease constant.
pub(crate) const ARMIJO: f64 = 1e-4;
/// Halvings before a backtracking search gives up.
pub(crate) const MAX_HALVINGS: usize = 60;

/// Problem plus the `H¹₀` operator used for Sobolev gradients.
pub(crate) struct Workspace<'a> {
    pub prob: &'a KirchhoffProblem,
    pub stiff: Stiffness,
}

impl<'a> Workspace<'a> {
    pub fn new(prob: &'a KirchhoffProblem) -> Self {
        Workspace {
            prob,
            stiff: Stiffness::new(prob.mesh()),
        }
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        self.prob.energy_unchecked(u)
    }

    pub fn residual(&self, u: &[f64]) -> (Vec<f64>, f64) {
        self.prob.residual_unchecked(u)
    }

    pub fn grid(&self, values: Vec<f64>) -> GridFunction {
        GridFunction::raw(self.prob.mesh().clone(), values).expect("vertex-sized vector")
    }
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}
