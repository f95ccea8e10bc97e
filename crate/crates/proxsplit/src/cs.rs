//! The sparse-recovery problem family
//! `0.5 ||A x - b||^2 + lambda_l1 ||x||_1 - lambda_l2 ||x||_2`.
//!
//! With both weights equal this is the l1-minus-l2 regularized least-squares
//! model; with `lambda_l2 = 0` it degenerates to the lasso.

use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::model::SplittingProblem;
use crate::prox::{
    largest_gram_eigenvalue, prox_l2_norm, prox_quadratic, soft_threshold, QuadraticProxCache,
};

/// Relative slack when deciding membership of `w` in the dual ball; absorbs
/// the rounding of the closed-form dual update, whose outputs can exceed the
/// radius by a few ulps.
const CONJ_DOMAIN_SLACK: f64 = 1e-9;

pub struct CsProblem {
    a: Arc<DenseMatrix>,
    b: DenseVector,
    lambda_l1: f64,
    lambda_l2: f64,
    ell: f64,
    // factorization for the smooth prox, rebuilt whenever gamma changes
    cache: RwLock<Option<QuadraticProxCache>>,
}

impl CsProblem {
    /// Standard instance: both regularization weights set to `lambda`, and
    /// the gradient Lipschitz constant estimated by power iteration.
    pub fn new(a: DenseMatrix, b: DenseVector, lambda: f64) -> Result<Self> {
        Self::with_weights(a, b, lambda, lambda)
    }

    pub fn with_weights(
        a: DenseMatrix,
        b: DenseVector,
        lambda_l1: f64,
        lambda_l2: f64,
    ) -> Result<Self> {
        if lambda_l1 <= 0.0 {
            return Err(Error::invalid("lambda_l1", "must be positive"));
        }
        if lambda_l2 < 0.0 {
            return Err(Error::invalid("lambda_l2", "must be nonnegative"));
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        let ell = largest_gram_eigenvalue(&a);
        Ok(Self {
            a: Arc::new(a),
            b,
            lambda_l1,
            lambda_l2,
            ell,
            cache: RwLock::new(None),
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &DenseVector {
        &self.b
    }

    pub fn lambda_l1(&self) -> f64 {
        self.lambda_l1
    }

    pub fn lambda_l2(&self) -> f64 {
        self.lambda_l2
    }

    /// A subgradient of `lambda_l2 ||.||_2` at `z` (the zero vector at the
    /// origin, where the subdifferential is the whole ball).
    pub fn subgrad_g(&self, z: &DenseVector) -> DenseVector {
        let norm = z.norm();
        if norm == 0.0 {
            DenseVector::zeros(z.len())
        } else {
            z.scale(self.lambda_l2 / norm)
        }
    }

    fn residual(&self, x: &DenseVector) -> DenseVector {
        self.a.matvec(x).sub(&self.b)
    }
}

impl SplittingProblem for CsProblem {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn eval_f(&self, x: &DenseVector) -> f64 {
        0.5 * self.residual(x).norm_sq()
    }

    fn grad_f(&self, x: &DenseVector) -> DenseVector {
        self.a.tr_matvec(&self.residual(x))
    }

    fn prox_f(&self, y: &DenseVector, gamma: f64) -> Result<DenseVector> {
        {
            let guard = self.cache.read().expect("prox cache lock poisoned");
            if let Some(cache) = guard.as_ref() {
                if cache.gamma() == gamma {
                    return prox_quadratic(cache, y, gamma);
                }
            }
        }
        let mut guard = self.cache.write().expect("prox cache lock poisoned");
        let stale = guard.as_ref().map(|c| c.gamma() != gamma).unwrap_or(true);
        if stale {
            *guard = Some(QuadraticProxCache::new(self.a.clone(), &self.b, gamma)?);
        }
        prox_quadratic(guard.as_ref().expect("just set"), y, gamma)
    }

    fn eval_h(&self, x: &DenseVector) -> f64 {
        self.lambda_l1 * x.norm_l1()
    }

    fn prox_h(&self, v: &DenseVector, gamma: f64) -> DenseVector {
        soft_threshold(v, gamma * self.lambda_l1).expect("gamma and lambda are nonnegative")
    }

    fn eval_g(&self, x: &DenseVector) -> f64 {
        self.lambda_l2 * x.norm()
    }

    fn prox_g(&self, v: &DenseVector, kappa: f64) -> DenseVector {
        prox_l2_norm(v, kappa * self.lambda_l2)
    }

    fn eval_g_conj(&self, w: &DenseVector) -> f64 {
        // conjugate of lambda ||.|| is the indicator of the lambda-ball
        if w.norm() <= self.lambda_l2 * (1.0 + CONJ_DOMAIN_SLACK) + f64::MIN_POSITIVE {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn lipschitz_ell(&self) -> f64 {
        self.ell
    }

    fn weak_convexity_rho(&self) -> f64 {
        0.0
    }
}
