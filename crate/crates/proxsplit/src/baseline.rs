//! Proximal difference-of-convex baseline used for solution-quality parity
//! checks against the splitting solver.
//!
//! Each iteration linearizes the concave part at the current point and takes
//! one proximal-gradient step of length `1/ell`:
//!
//! ```text
//! z+ = soft_threshold(u - (grad_f(u) - xi) / ell, lambda / ell),
//! xi in d(lambda_l2 ||.||)(z),  u = z + beta (z - z_prev)  (optional momentum)
//! ```
//!
//! Momentum follows the usual accelerated t-sequence and restarts whenever
//! the objective increases.

use crate::cs::CsProblem;
use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::model::{
    objective_value, relative_change, ConvergenceTrace, SplittingProblem, StopReason, TraceRow,
};
use crate::prox::soft_threshold;

#[derive(Debug, Clone)]
pub struct DcaResult {
    pub z: DenseVector,
    pub objective: f64,
    pub iterations: usize,
    pub terminated_by: StopReason,
    pub trace: ConvergenceTrace,
}

/// Runs the baseline from the origin with the same stopping rule as the
/// splitting solver (`||z+ - z|| / ||z|| < tol`, capped at `max_iter`).
pub fn baseline_pdca_solve(
    problem: &CsProblem,
    lambda: f64,
    ell: f64,
    tol: f64,
    max_iter: usize,
    extrapolate: bool,
) -> Result<DcaResult> {
    if ell <= 0.0 {
        return Err(Error::invalid("ell", "baseline step needs ell > 0"));
    }
    if tol <= 0.0 {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let d = problem.dim();
    let mut z = DenseVector::zeros(d);
    let mut z_prev = z.clone();
    let mut objective = objective_value(problem, &z);
    let mut theta = 1.0f64;
    let mut trace = ConvergenceTrace::new();
    let mut terminated_by = StopReason::MaxIter;
    let mut iterations = 0;

    for n in 1..=max_iter {
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = if extrapolate {
            (theta - 1.0) / theta_next
        } else {
            0.0
        };
        let u = z.add_scaled(&z.sub(&z_prev), beta);

        let xi = problem.subgrad_g(&z);
        let grad = problem.grad_f(&u);
        let step_arg = u.add_scaled(&grad.sub(&xi), -1.0 / ell);
        let z_next = soft_threshold(&step_arg, lambda / ell)?;

        let rel = relative_change(&z_next, &z)?;
        let objective_next = objective_value(problem, &z_next);
        trace.push(TraceRow {
            n,
            lyapunov: f64::NAN,
            objective_at_z: objective_next,
            dx: z_next.dist(&z),
            dz: z_next.dist(&z),
            dw: 0.0,
            rel_change: rel,
            gamma_used: 1.0 / ell,
        });

        if objective_next > objective {
            theta = 1.0; // momentum restart
        } else {
            theta = theta_next;
        }
        objective = objective_next;
        z_prev = z;
        z = z_next;
        iterations = n;

        if rel < tol {
            terminated_by = StopReason::Tolerance;
            break;
        }
    }

    Ok(DcaResult {
        objective,
        z,
        iterations,
        terminated_by,
        trace,
    })
}
