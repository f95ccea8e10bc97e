//! Problem abstraction, solver parameters, iterate state, and run records.

use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Guard used in place of `||z_old||` when the previous iterate is the
/// origin, so the stopping ratio never divides by zero.
pub const REL_CHANGE_GUARD: f64 = 1e-300;

/// Iterate norms above this abort a fixed-step run as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// A composite objective `f(x) + h(x) - g(x)` exposed through the
/// evaluations the splitting iteration needs:
///
/// * `f` differentiable, `rho`-weakly convex, with `ell`-Lipschitz gradient;
/// * `h` lower semicontinuous with a cheap prox;
/// * `g` finite-valued convex, accessed through its prox and conjugate.
pub trait SplittingProblem: Sync {
    /// Ambient dimension d.
    fn dim(&self) -> usize;

    fn eval_f(&self, x: &DenseVector) -> f64;
    fn grad_f(&self, x: &DenseVector) -> DenseVector;
    /// `argmin_u f(u) + ||u - y||^2 / (2 gamma)`.
    fn prox_f(&self, y: &DenseVector, gamma: f64) -> Result<DenseVector>;

    fn eval_h(&self, x: &DenseVector) -> f64;
    /// `argmin_u h(u) + ||u - v||^2 / (2 gamma)`.
    fn prox_h(&self, v: &DenseVector, gamma: f64) -> DenseVector;

    fn eval_g(&self, x: &DenseVector) -> f64;
    /// `argmin_u kappa g(u) + ||u - v||^2 / 2`.
    fn prox_g(&self, v: &DenseVector, kappa: f64) -> DenseVector;
    /// Convex conjugate `g*(w)`; `+inf` outside its domain.
    fn eval_g_conj(&self, w: &DenseVector) -> f64;

    /// Lipschitz constant of `grad f`.
    fn lipschitz_ell(&self) -> f64;
    /// Weak-convexity modulus of `f` (0 when `f` is convex).
    fn weak_convexity_rho(&self) -> f64;
}

/// `f(x) + h(x) - g(x)`. Returns `+inf` when `h(x) = +inf`.
pub fn objective_value(problem: &dyn SplittingProblem, x: &DenseVector) -> f64 {
    problem.eval_f(x) + problem.eval_h(x) - problem.eval_g(x)
}

/// Stopping ratio `||z_new - z_old|| / max(||z_old||, guard)`.
pub fn relative_change(z_new: &DenseVector, z_old: &DenseVector) -> Result<f64> {
    if z_new.len() != z_old.len() {
        return Err(Error::DimensionMismatch {
            expected: z_old.len(),
            got: z_new.len(),
        });
    }
    Ok(z_new.dist(z_old) / z_old.norm().max(REL_CHANGE_GUARD))
}

/// Parameters of a solver run.
///
/// `gamma` is the prox step size, `tau` the dual prox weight, `nu` the
/// relaxation factor in `(0, 2)`, and `(rho, ell)` the curvature data of
/// the smooth term. With `adapt_gamma` off, `gamma` must stay below the
/// admissible bound [`crate::solver::step_size_bound`]; with it on, runs
/// start at `k_factor * gamma0` and back off via
/// [`crate::solver::heuristic_gamma_update`].
#[derive(Debug, Clone)]
pub struct SolverParams {
    pub gamma: f64,
    pub tau: f64,
    pub nu: f64,
    pub rho: f64,
    pub ell: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub adapt_gamma: bool,
    pub gamma0: f64,
    pub k_factor: f64,
    /// Record the merit-function value in the trace (costs one `f` and one
    /// `g*` evaluation per iteration).
    pub monitor_lyapunov: bool,
}

pub const DEFAULT_TAU: f64 = 20.0;
pub const DEFAULT_NU: f64 = 1.4;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 3000;
pub const DEFAULT_K_FACTOR: f64 = 10.0;
/// Step-size margin below the admissible bound in fixed-step mode.
pub const GAMMA_MARGIN: f64 = 1e-10;

impl SolverParams {
    /// Fixed-step parameters with `gamma` just below the admissible bound.
    ///
    /// When `ell = 0` the bound is infinite and `gamma` defaults to 1.
    pub fn fixed_step(nu: f64, rho: f64, ell: f64) -> Result<Self> {
        let bound = crate::solver::step_size_bound(nu, rho, ell)?;
        let gamma = if bound.is_finite() {
            bound - GAMMA_MARGIN
        } else {
            1.0
        };
        let params = Self {
            gamma,
            tau: DEFAULT_TAU,
            nu,
            rho,
            ell,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            adapt_gamma: false,
            gamma0: gamma,
            k_factor: DEFAULT_K_FACTOR,
            monitor_lyapunov: false,
        };
        params.validate()?;
        Ok(params)
    }

    /// Adaptive parameters starting at `k_factor * gamma0`.
    pub fn adaptive(gamma0: f64, k_factor: f64, rho: f64, ell: f64) -> Result<Self> {
        if gamma0 <= 0.0 {
            return Err(Error::invalid("gamma0", "must be positive"));
        }
        if k_factor <= 0.0 {
            return Err(Error::invalid("k_factor", "must be positive"));
        }
        let params = Self {
            gamma: k_factor * gamma0,
            tau: DEFAULT_TAU,
            nu: DEFAULT_NU,
            rho,
            ell,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            adapt_gamma: true,
            gamma0,
            k_factor,
            monitor_lyapunov: false,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < 2.0) {
            return Err(Error::invalid("nu", format!("{} not in (0, 2)", self.nu)));
        }
        if self.tau < 0.0 {
            return Err(Error::invalid("tau", "must be nonnegative"));
        }
        if self.gamma <= 0.0 {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        if self.tol <= 0.0 {
            return Err(Error::invalid("tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be positive"));
        }
        if self.rho < 0.0 {
            return Err(Error::invalid("rho", "must be nonnegative"));
        }
        if self.ell < 0.0 {
            return Err(Error::invalid("ell", "must be nonnegative"));
        }
        Ok(())
    }
}

/// The iterate quadruple of the splitting scheme.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub x: DenseVector,
    pub y: DenseVector,
    pub z: DenseVector,
    pub w: DenseVector,
    /// Iteration counter; 0 for an initial state.
    pub n: usize,
}

impl IterateState {
    pub fn new(x: DenseVector, y: DenseVector, z: DenseVector, w: DenseVector) -> Result<Self> {
        let d = x.len();
        for (name, v) in [("y", &y), ("z", &z), ("w", &w)] {
            if v.len() != d {
                return Err(Error::invalid(
                    "state",
                    format!("{name} has length {}, expected {d}", v.len()),
                ));
            }
        }
        Ok(Self { x, y, z, w, n: 0 })
    }

    /// All four vectors at the origin.
    pub fn origin(d: usize) -> Self {
        Self {
            x: DenseVector::zeros(d),
            y: DenseVector::zeros(d),
            z: DenseVector::zeros(d),
            w: DenseVector::zeros(d),
            n: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn max_norm(&self) -> f64 {
        self.x
            .norm()
            .max(self.y.norm())
            .max(self.z.norm())
            .max(self.w.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.w.is_finite()
    }
}

/// One recorded iteration.
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub n: usize,
    /// Merit-function value; NaN when the monitor is off.
    pub lyapunov: f64,
    pub objective_at_z: f64,
    pub dx: f64,
    pub dz: f64,
    pub dw: f64,
    pub rel_change: f64,
    pub gamma_used: f64,
}

/// Per-iteration records of a solver run.
#[derive(Debug, Clone, Default)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
}

impl ConvergenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Checks that the recorded merit values never increase by more than
    /// `slack * (1 + |value|)` between consecutive rows (rows with NaN are
    /// ignored).
    pub fn lyapunov_nonincreasing(&self, slack: f64) -> bool {
        self.rows
            .windows(2)
            .filter(|w| w[0].lyapunov.is_finite() && w[1].lyapunov.is_finite())
            .all(|w| w[1].lyapunov <= w[0].lyapunov + slack * (1.0 + w[0].lyapunov.abs()))
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    MaxIter,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Tolerance => "tolerance",
            StopReason::MaxIter => "max_iter",
        }
    }
}

/// Outcome of one benchmark run (a diverged solve is recorded, not fatal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Tolerance,
    MaxIter,
    Diverged,
}

impl RunOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunOutcome::Tolerance => "tolerance",
            RunOutcome::MaxIter => "max_iter",
            RunOutcome::Diverged => "diverged",
        }
    }
}

impl From<StopReason> for RunOutcome {
    fn from(s: StopReason) -> Self {
        match s {
            StopReason::Tolerance => RunOutcome::Tolerance,
            StopReason::MaxIter => RunOutcome::MaxIter,
        }
    }
}

/// Per-run benchmark record.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub case_id: String,
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub seed: u64,
    pub iterations: usize,
    pub error_vs_ground_truth: f64,
    /// `+inf` encodes a perfect reconstruction.
    pub snr_db: f64,
    pub wall_time_s: f64,
    pub terminated_by: RunOutcome,
}
