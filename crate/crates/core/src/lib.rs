//! Numerical toolkit for the nonlocal p(x)-Kirchhoff problem
//!
//! ```text
//! -(a - b ∫ |∇u|^p(x) / p(x)) Δ_p(x) u = λ |u|^{p(x)-2} u + g(x, u)   in Ω,
//!                                    u = 0                           on ∂Ω,
//! ```
//!
//! discretized with piecewise-linear elements on 1-D and 2-D meshes.
//!
//! The crate is organized bottom-up:
//!
//! * [`exponents`]: variable exponent fields and the structural exponent chain.
//! * [`discretization`]: meshes, zero-trace grid functions, gradients, quadrature.
//! * [`modular`]: modular, Luxemburg norm, Hölder pairing, Sobolev norm.
//! * [`energy`]: the energy functional `J`, its derivative and the nonlinearity catalog.
//! * [`solver`]: Rayleigh quotient, mountain-pass geometry and solver, multiplicity search.
//! * [`cli`]: flat `key = value` configuration and batch runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod discretization;
pub mod energy;
mod error;
pub mod exponents;
pub mod linalg;
pub mod modular;
pub mod solver;

pub use discretization::{GridFunction, Mesh};
pub use energy::{KirchhoffProblem, NonlinearityKind, NonlinearitySpec};
pub use error::{Error, Result};
pub use exponents::{ExponentField, ValidationReport};
