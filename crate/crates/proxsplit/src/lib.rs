//! Proximal splitting for composite objectives `f(x) + h(x) - g(x)` —
//! a smooth (possibly nonconvex) term, a nonsmooth prox-friendly term, and
//! a subtracted continuous convex term — plus a deterministic problem kit
//! for sparse-recovery experiments.
//!
//! The solver in [`solver`] interleaves a backward (proximal) evaluation of
//! the concave part, through its Fenchel conjugate, with Douglas–Rachford
//! style updates of the remaining two terms. [`cs`] instantiates the model
//! for `0.5 ||Ax - b||^2 + lambda ||x||_1 - lambda ||x||_2`, [`generate`]
//! builds seeded benchmark instances, and [`baseline`] provides a proximal
//! difference-of-convex reference solver for parity checks.

pub mod baseline;
pub mod cs;
pub mod error;
pub mod fileio;
pub mod generate;
pub mod linalg;
pub mod model;
pub mod prox;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::{Cholesky, DenseMatrix, DenseVector};
pub use model::{
    objective_value, relative_change, BenchReport, ConvergenceTrace, IterateState, RunOutcome,
    SolverParams, SplittingProblem, StopReason, TraceRow,
};
pub use solver::{
    bdr_solve, bdr_step, descent_delta, heuristic_gamma_update, lyapunov_value, stationarity_gap,
    step_size_bound, BdrResult,
};
