//! The backward-Douglas–Rachford (BDR) iteration.
//!
//! One step maps `(x, y, z, w)` to
//!
//! ```text
//! x+ = prox_{gamma f}(y)
//! w+ = (v - prox_{tau g}(v)) / tau,   v = tau w + z
//! z+ = prox_{gamma h}(2 x+ - y + gamma w+)
//! y+ = y + nu (z+ - x+)
//! ```
//!
//! The dual `w`-step is the prox of `g*/tau` at `w + z/tau`, written through
//! the Moreau decomposition so only `prox_g` is ever needed. Fixed-step runs
//! require `gamma` below [`step_size_bound`]; the merit function
//! [`lyapunov_value`] then decreases by at least
//! `delta/2 ||dx||^2 + tau/2 ||dw||^2` per iteration.

use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::model::{
    objective_value, relative_change, ConvergenceTrace, IterateState, SolverParams, SplittingProblem,
    StopReason, TraceRow, DIVERGENCE_LIMIT,
};

/// Admissible step-size bound
/// `(-nu rho + sqrt(nu^2 rho^2 + 8 (2 - nu) ell^2)) / (4 ell^2)`,
/// `+inf` when `ell = 0`.
pub fn step_size_bound(nu: f64, rho: f64, ell: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 2.0) {
        return Err(Error::invalid("nu", format!("{nu} not in (0, 2)")));
    }
    if rho < 0.0 {
        return Err(Error::invalid("rho", "must be nonnegative"));
    }
    if ell < 0.0 {
        return Err(Error::invalid("ell", "must be nonnegative"));
    }
    if ell == 0.0 {
        return Ok(f64::INFINITY);
    }
    let disc = nu * nu * rho * rho + 8.0 * (2.0 - nu) * ell * ell;
    Ok((-nu * rho + disc.sqrt()) / (4.0 * ell * ell))
}

/// Descent coefficient `delta = (2 - nu - nu rho gamma - 2 ell^2 gamma^2) / (nu gamma)`.
///
/// Positive exactly when `gamma` is below [`step_size_bound`]; zero at the
/// bound itself.
pub fn descent_delta(nu: f64, rho: f64, ell: f64, gamma: f64) -> f64 {
    debug_assert!(gamma > 0.0, "descent_delta needs gamma > 0");
    (2.0 - nu - nu * rho * gamma - 2.0 * ell * ell * gamma * gamma) / (nu * gamma)
}

/// Merit function of a state:
///
/// ```text
/// f(x) + h(z) + g*(w) - <w, z>
///   + (||x - y||^2 - ||y - z||^2) / (2 gamma) + (1 - nu)/gamma ||x - z||^2
/// ```
///
/// Errors when `w` lies outside the domain of `g*`.
pub fn lyapunov_value(
    state: &IterateState,
    problem: &dyn SplittingProblem,
    params: &SolverParams,
) -> Result<f64> {
    lyapunov_with(state, problem, params.gamma, params.nu)
}

fn lyapunov_with(
    state: &IterateState,
    problem: &dyn SplittingProblem,
    gamma: f64,
    nu: f64,
) -> Result<f64> {
    let g_conj = problem.eval_g_conj(&state.w);
    if !g_conj.is_finite() {
        return Err(Error::ConjugateDomain {
            detail: format!("||w|| = {:.6e}", state.w.norm()),
        });
    }
    let coupling = state.w.dot(&state.z);
    let xy = state.x.dist(&state.y);
    let yz = state.y.dist(&state.z);
    let xz = state.x.dist(&state.z);
    Ok(problem.eval_f(&state.x) + problem.eval_h(&state.z) + g_conj - coupling
        + (xy * xy - yz * yz) / (2.0 * gamma)
        + (1.0 - nu) / gamma * xz * xz)
}

/// One iteration at the step size in `params`.
pub fn bdr_step(
    state: &IterateState,
    problem: &dyn SplittingProblem,
    params: &SolverParams,
) -> Result<IterateState> {
    step_with_gamma(state, problem, params, params.gamma)
}

fn step_with_gamma(
    state: &IterateState,
    problem: &dyn SplittingProblem,
    params: &SolverParams,
    gamma: f64,
) -> Result<IterateState> {
    if params.tau <= 0.0 {
        return Err(Error::invalid(
            "tau",
            "the dual update is set-valued at tau = 0; use tau > 0",
        ));
    }
    let x_next = problem.prox_f(&state.y, gamma)?;

    let v = state.z.add_scaled(&state.w, params.tau);
    let w_next = v.sub(&problem.prox_g(&v, params.tau)).scale(1.0 / params.tau);

    let arg = x_next
        .scale(2.0)
        .sub(&state.y)
        .add_scaled(&w_next, gamma);
    let z_next = problem.prox_h(&arg, gamma);

    let y_next = state.y.add_scaled(&z_next.sub(&x_next), params.nu);

    Ok(IterateState {
        x: x_next,
        y: y_next,
        z: z_next,
        w: w_next,
        n: state.n + 1,
    })
}

/// Step-size backoff used with `adapt_gamma`: halve toward `0.9999 gamma0`
/// whenever `gamma` is still above `gamma0` and the `x` sequence misbehaves
/// (`||x_next - x_prev|| > 1000/n` or `||x_prev|| > 1e10`).
pub fn heuristic_gamma_update(
    gamma: f64,
    gamma0: f64,
    n: usize,
    x_prev: &DenseVector,
    x_next: &DenseVector,
) -> f64 {
    debug_assert!(n >= 1, "heuristic update needs n >= 1");
    if gamma > gamma0
        && (x_next.dist(x_prev) > 1000.0 / n as f64 || x_prev.norm() > 1e10)
    {
        (gamma / 2.0).max(0.9999 * gamma0)
    } else {
        gamma
    }
}

/// Scalar stationarity measure `||x - z|| / gamma` of a state.
pub fn stationarity_gap(state: &IterateState, params: &SolverParams) -> f64 {
    state.x.dist(&state.z) / params.gamma
}

/// Outcome of a full solver run.
#[derive(Debug, Clone)]
pub struct BdrResult {
    pub state: IterateState,
    pub trace: ConvergenceTrace,
    pub terminated_by: StopReason,
    pub stationarity_gap: f64,
    /// Step size in effect at termination (differs from `params.gamma` only
    /// in adaptive mode).
    pub final_gamma: f64,
}

/// Runs the iteration from `init` until the relative change of `z` drops
/// below `params.tol` or `params.max_iter` steps have been taken.
///
/// Fixed-step mode validates `gamma` against [`step_size_bound`] and aborts
/// with [`Error::Diverged`] if any iterate norm passes 1e12. Adaptive mode
/// instead shrinks `gamma` via [`heuristic_gamma_update`].
pub fn bdr_solve(
    problem: &dyn SplittingProblem,
    params: &SolverParams,
    init: IterateState,
) -> Result<BdrResult> {
    params.validate()?;
    if init.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            got: init.dim(),
        });
    }
    let mut gamma = params.gamma;
    if !params.adapt_gamma {
        let bound = step_size_bound(params.nu, params.rho, params.ell)?;
        if gamma >= bound {
            return Err(Error::invalid(
                "gamma",
                format!("{gamma} is not below the admissible bound {bound}"),
            ));
        }
    }

    let mut state = init;
    let mut trace = ConvergenceTrace::new();
    let mut terminated_by = StopReason::MaxIter;

    while state.n < params.max_iter {
        let step_index = state.n;
        let next = step_with_gamma(&state, problem, params, gamma)?;

        let dx = next.x.dist(&state.x);
        let dz = next.z.dist(&state.z);
        let dw = next.w.dist(&state.w);
        let rel = relative_change(&next.z, &state.z)?;
        let lyapunov = if params.monitor_lyapunov {
            lyapunov_with(&next, problem, gamma, params.nu)?
        } else {
            f64::NAN
        };
        trace.push(TraceRow {
            n: next.n,
            lyapunov,
            objective_at_z: objective_value(problem, &next.z),
            dx,
            dz,
            dw,
            rel_change: rel,
            gamma_used: gamma,
        });

        if !params.adapt_gamma {
            let norm = next.max_norm();
            if norm > DIVERGENCE_LIMIT {
                return Err(Error::Diverged {
                    iter: next.n,
                    norm,
                });
            }
        } else if step_index >= 1 {
            gamma = heuristic_gamma_update(gamma, params.gamma0, step_index, &state.x, &next.x);
        }

        // a zero-to-zero z step is 0/0 in the stopping ratio and carries no
        // convergence information (the origin init starts exactly there)
        let informative = dz > 0.0 || state.z.norm() > 0.0;
        let converged = informative && rel < params.tol;
        state = next;
        if converged {
            terminated_by = StopReason::Tolerance;
            break;
        }
    }

    if terminated_by == StopReason::Tolerance && !state.is_finite() {
        return Err(Error::Diverged {
            iter: state.n,
            norm: f64::INFINITY,
        });
    }

    let gap = state.x.dist(&state.z) / gamma;
    Ok(BdrResult {
        state,
        trace,
        terminated_by,
        stationarity_gap: gap,
        final_gamma: gamma,
    })
}
