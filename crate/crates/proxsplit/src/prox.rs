//! Closed-form proximal operators and the cached quadratic prox.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, DenseMatrix, DenseVector};
use crate::rng::Rng;

/// Componentwise soft shrinkage: `sign(v_i) * max(|v_i| - kappa, 0)`.
///
/// This is the prox of `kappa * ||.||_1`.
pub fn soft_threshold(v: &DenseVector, kappa: f64) -> Result<DenseVector> {
    if kappa < 0.0 {
        return Err(Error::invalid("kappa", "soft threshold needs kappa >= 0"));
    }
    Ok(DenseVector::from_slice(
        &v.iter()
            .map(|&t| t.signum() * (t.abs() - kappa).max(0.0))
            .collect::<Vec<_>>(),
    )
    .expect("finite inputs stay finite"))
}

/// Prox of `kappa * ||.||_2`: shrinks the radius by `kappa`, mapping
/// everything inside the `kappa`-ball to the origin.
pub fn prox_l2_norm(v: &DenseVector, kappa: f64) -> DenseVector {
    debug_assert!(kappa >= 0.0, "prox_l2_norm needs kappa >= 0");
    let norm = v.norm();
    if norm > kappa {
        v.scale(1.0 - kappa / norm)
    } else {
        DenseVector::zeros(v.len())
    }
}

/// Dual update of the concave part for `g = lambda * ||.||_2`:
/// with `v = tau w + z`, returns `min(lambda / ||v||, 1/tau) * v`
/// (the zero vector when `v = 0`).
pub fn w_update(
    w: &DenseVector,
    z: &DenseVector,
    tau: f64,
    lambda: f64,
) -> Result<DenseVector> {
    if tau <= 0.0 {
        return Err(Error::invalid("tau", "closed-form dual update needs tau > 0"));
    }
    if lambda <= 0.0 {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    if w.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            got: z.len(),
        });
    }
    let v = z.add_scaled(w, tau);
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(DenseVector::zeros(v.len()));
    }
    let scale = (lambda / norm).min(1.0 / tau);
    Ok(v.scale(scale))
}

/// Which system the quadratic prox factorizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRoute {
    /// `(A^T A + I/gamma)` in coefficient space (d x d).
    Direct,
    /// `(I + gamma A A^T)` in measurement space (m x m), applied through
    /// the Woodbury identity. Cheaper whenever m < d.
    Woodbury,
}

/// Cached factorization for `argmin_x 0.5 ||A x - b||^2 + ||x - y||^2 / (2 gamma)`.
///
/// Built once per `gamma` and reused across iterations; a step-size change
/// requires a fresh cache.
#[derive(Debug, Clone)]
pub struct QuadraticProxCache {
    a: Arc<DenseMatrix>,
    at_b: DenseVector,
    gamma: f64,
    route: FactorRoute,
    chol: Cholesky,
}

impl QuadraticProxCache {
    /// Picks the cheaper factorization automatically (m x m vs d x d).
    pub fn new(a: Arc<DenseMatrix>, b: &DenseVector, gamma: f64) -> Result<Self> {
        let route = if a.rows() < a.cols() {
            FactorRoute::Woodbury
        } else {
            FactorRoute::Direct
        };
        Self::with_route(a, b, gamma, route)
    }

    pub fn with_route(
        a: Arc<DenseMatrix>,
        b: &DenseVector,
        gamma: f64,
        route: FactorRoute,
    ) -> Result<Self> {
        if gamma <= 0.0 {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        let at_b = a.tr_matvec(b);
        let chol = match route {
            FactorRoute::Direct => {
                let mut gmat = a.gram();
                gmat.add_diagonal(1.0 / gamma);
                Cholesky::factor(&gmat)?
            }
            FactorRoute::Woodbury => {
                let mut gmat = a.outer_gram();
                gmat.scale_in_place(gamma);
                gmat.add_diagonal(1.0);
                Cholesky::factor(&gmat)?
            }
        };
        Ok(Self {
            a,
            at_b,
            gamma,
            route,
            chol,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn route(&self) -> FactorRoute {
        self.route
    }
}

/// Evaluates the cached quadratic prox at `y`.
///
/// Direct route: solve `(A^T A + I/gamma) x = A^T b + y / gamma`.
/// Woodbury route: with `r = gamma A^T b + y`,
/// `x = r - gamma A^T (I + gamma A A^T)^{-1} A r`.
pub fn prox_quadratic(
    cache: &QuadraticProxCache,
    y: &DenseVector,
    gamma: f64,
) -> Result<DenseVector> {
    if gamma != cache.gamma {
        return Err(Error::StaleCache {
            cache_gamma: cache.gamma,
            gamma,
        });
    }
    if y.len() != cache.a.cols() {
        return Err(Error::DimensionMismatch {
            expected: cache.a.cols(),
            got: y.len(),
        });
    }
    match cache.route {
        FactorRoute::Direct => {
            let rhs = cache.at_b.add_scaled(y, 1.0 / gamma);
            Ok(cache.chol.solve(&rhs))
        }
        FactorRoute::Woodbury => {
            let r = y.add_scaled(&cache.at_b, gamma);
            let ar = cache.a.matvec(&r);
            let s = cache.chol.solve(&ar);
            let ats = cache.a.tr_matvec(&s);
            Ok(r.add_scaled(&ats, -gamma))
        }
    }
}

pub const POWER_ITER_DEFAULT_ITERS: usize = 1000;
pub const POWER_ITER_DEFAULT_TOL: f64 = 1e-10;
/// Fixed seed of the deterministic start vector. A structured start such as
/// all-ones sits in an invariant subspace for whole matrix families
/// (column-normalized 2x2 Gram matrices, DCT selections without the DC row)
/// and then converges to the wrong eigenvalue; a seeded direction is just as
/// reproducible and has no exact-alignment failure mode.
const POWER_ITER_START_SEED: u64 = 0x5EED_0F_A11;

/// Largest eigenvalue of `A^T A` by power iteration with a Rayleigh
/// quotient, from a fixed seeded start vector (results are deterministic).
pub fn power_iteration_ell(a: &DenseMatrix, iters: usize, tol: f64) -> f64 {
    assert!(iters >= 1, "power iteration needs iters >= 1");
    assert!(tol > 0.0, "power iteration needs tol > 0");
    if a.max_abs() == 0.0 {
        return 0.0;
    }
    let d = a.cols();
    let mut rng = Rng::new(POWER_ITER_START_SEED);
    let raw = DenseVector::from_vec_unchecked(rng.normal_vec(d));
    let mut v = raw.scale(1.0 / raw.norm());
    let mut lambda = 0.0f64;
    for k in 0..iters {
        let av = a.matvec(&v);
        let atav = a.tr_matvec(&av);
        let next_lambda = v.dot(&atav);
        let norm = atav.norm();
        if norm < 1e-300 {
            // the start vector lies in the null space up to rounding; the
            // quotient seen so far is the best available estimate
            return lambda.max(0.0);
        }
        v = atav.scale(1.0 / norm);
        if k > 0 && (next_lambda - lambda).abs() <= tol * next_lambda.abs().max(1e-300) {
            return next_lambda;
        }
        lambda = next_lambda;
    }
    lambda
}

/// [`power_iteration_ell`] with the default budget and tolerance.
pub fn largest_gram_eigenvalue(a: &DenseMatrix) -> f64 {
    power_iteration_ell(a, POWER_ITER_DEFAULT_ITERS, POWER_ITER_DEFAULT_TOL)
}
