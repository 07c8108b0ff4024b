//! A small, deterministic linear and mixed-integer programming kernel.
//!
//! Problems are dense-factored, so this is meant for master problems with at
//! most a few hundred rows. Solves are single-threaded and self-contained;
//! independent problems may be solved concurrently.

mod lp;
mod mip;
mod model;
mod simplex;

pub use lp::{solve_lp, LpSolution, LpStatus};
pub use mip::{solve_mip, Limit, MipOptions, MipResult, MipStatus};
pub use model::{LinearProgram, Relation, Row};

/// Primal feasibility tolerance.
pub const TOL_FEAS: f64 = 1e-7;
/// Reduced-cost optimality tolerance.
pub const TOL_OPT: f64 = 1e-7;
/// Complementary slackness tolerance used by verification code.
pub const TOL_CS: f64 = 1e-6;
/// Integrality tolerance.
pub const TOL_INT: f64 = 1e-6;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SolveError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
}

/// Backend seam so that another solver can stand in for the built-in kernel.
pub trait LpBackend: Send + Sync {
    fn solve_lp(&self, lp: &LinearProgram) -> Result<LpSolution, SolveError>;
    fn solve_mip(&self, lp: &LinearProgram, options: &MipOptions) -> Result<MipResult, SolveError>;
}

/// The built-in simplex / branch-and-bound kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct Builtin;

impl LpBackend for Builtin {
    fn solve_lp(&self, lp: &LinearProgram) -> Result<LpSolution, SolveError> {
        solve_lp(lp)
    }

    fn solve_mip(&self, lp: &LinearProgram, options: &MipOptions) -> Result<MipResult, SolveError> {
        solve_mip(lp, options)
    }
}
