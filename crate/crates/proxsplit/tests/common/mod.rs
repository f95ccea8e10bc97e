//! Brute-force oracles backing the contract tests. Test-tree only, never
//! part of the shipped API, and deliberately independent of the library's
//! own numerical paths.

// each test binary compiles this module and uses a different subset
#![allow(dead_code)]

use proxsplit::{DenseMatrix, DenseVector};

/// Search box for [`grid_minimize`].
pub struct GridSpec {
    /// Per-dimension inclusive bounds.
    pub bounds: Vec<(f64, f64)>,
    /// Coarse scan step.
    pub resolution: f64,
    /// Number of step halvings during refinement.
    pub depth: usize,
}

/// Exhaustive grid scan followed by coordinate pattern-search refinement.
/// Supports at most 3 dimensions; accuracy ~ `resolution / 2^depth` per
/// coordinate for coordinate-wise well-behaved objectives.
pub fn grid_minimize<F: Fn(&[f64]) -> f64>(f: F, spec: &GridSpec) -> (Vec<f64>, f64) {
    let dims = spec.bounds.len();
    assert!(
        (1..=3).contains(&dims),
        "grid_minimize: unsupported dimension {dims}"
    );
    assert!(spec.resolution > 0.0);

    let steps: Vec<usize> = spec
        .bounds
        .iter()
        .map(|(lo, hi)| ((hi - lo) / spec.resolution).ceil() as usize + 1)
        .collect();

    let mut best_point = vec![0.0; dims];
    let mut best_value = f64::INFINITY;
    let mut idx = vec![0usize; dims];
    'scan: loop {
        let point: Vec<f64> = idx
            .iter()
            .zip(&spec.bounds)
            .map(|(&i, (lo, hi))| (lo + i as f64 * spec.resolution).min(*hi))
            .collect();
        let value = f(&point);
        if value < best_value {
            best_value = value;
            best_point = point;
        }
        // odometer increment
        for k in 0..dims {
            idx[k] += 1;
            if idx[k] < steps[k] {
                continue 'scan;
            }
            idx[k] = 0;
        }
        break;
    }

    // pattern search: move along coordinates, halving the step on failure
    let mut step = spec.resolution;
    let floor = spec.resolution / (2.0f64).powi(spec.depth as i32);
    while step > floor {
        let mut improved = false;
        for k in 0..dims {
            for dir in [-1.0, 1.0] {
                let mut cand = best_point.clone();
                cand[k] = (cand[k] + dir * step).clamp(spec.bounds[k].0, spec.bounds[k].1);
                let value = f(&cand);
                if value < best_value {
                    best_value = value;
                    best_point = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best_point, best_value)
}

/// Brute-force prox: minimizes `phi(u) + ||u - v||^2 / (2 gamma)` over a box
/// guaranteed to contain the minimizer. Test oracle for closed-form proxes.
pub fn prox_generic_oracle<F: Fn(&[f64]) -> f64>(
    phi: F,
    v: &DenseVector,
    gamma: f64,
) -> DenseVector {
    let dims = v.len();
    assert!(
        (1..=3).contains(&dims),
        "prox_generic_oracle: unsupported dimension {dims}"
    );
    // phi >= 0 and phi(v) finite give ||u* - v|| <= sqrt(2 gamma phi(v))
    let radius = (2.0 * gamma * phi(v.as_slice())).sqrt() + 1.0;
    let spec = GridSpec {
        bounds: v.iter().map(|&vi| (vi - radius, vi + radius)).collect(),
        resolution: (radius / 50.0).max(1e-3),
        depth: 45,
    };
    let objective = |u: &[f64]| {
        let dist_sq: f64 = u
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        phi(u) + dist_sq / (2.0 * gamma)
    };
    let (point, _) = grid_minimize(objective, &spec);
    DenseVector::from_slice(&point).unwrap()
}

/// Central finite differences of a scalar function.
pub fn finite_diff_gradient<F: Fn(&DenseVector) -> f64>(
    f: F,
    x: &DenseVector,
    step: f64,
) -> DenseVector {
    assert!(step > 0.0);
    let mut grad = vec![0.0; x.len()];
    let mut bumped = x.to_vec();
    for (i, gi) in grad.iter_mut().enumerate() {
        let orig = bumped[i];
        bumped[i] = orig + step;
        let plus = f(&DenseVector::from_slice(&bumped).unwrap());
        bumped[i] = orig - step;
        let minus = f(&DenseVector::from_slice(&bumped).unwrap());
        bumped[i] = orig;
        *gi = (plus - minus) / (2.0 * step);
    }
    DenseVector::from_slice(&grad).unwrap()
}

/// Golden-section search for a unimodal scalar function on `[a, b]`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
/// Independent oracle for the power-iteration estimate.
pub fn jacobi_max_eigenvalue(sym: &DenseMatrix) -> f64 {
    let n = sym.rows();
    assert_eq!(n, sym.cols(), "jacobi: matrix not square");
    let mut a: Vec<f64> = sym.as_slice().to_vec();
    let at = |a: &Vec<f64>, i: usize, j: usize| a[i * n + j];
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += at(&a, p, q).abs();
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = at(&a, p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = at(&a, p, p);
                let aqq = at(&a, q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = at(&a, k, p);
                    let akq = at(&a, k, q);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = at(&a, p, k);
                    let aqk = at(&a, q, k);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| at(&a, i, i)).fold(f64::NEG_INFINITY, f64::max)
}

/// Dense LU solve with partial pivoting. Independent oracle for the
/// factorization-based quadratic prox.
pub fn lu_solve(mat: &DenseMatrix, rhs: &DenseVector) -> DenseVector {
    let n = mat.rows();
    assert_eq!(n, mat.cols(), "lu_solve: matrix not square");
    assert_eq!(n, rhs.len());
    let mut a: Vec<f64> = mat.as_slice().to_vec();
    let mut x: Vec<f64> = rhs.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut pivot = k;
        for i in (k + 1)..n {
            if a[perm[i] * n + k].abs() > a[perm[pivot] * n + k].abs() {
                pivot = i;
            }
        }
        perm.swap(k, pivot);
        let pk = perm[k];
        let diag = a[pk * n + k];
        assert!(diag.abs() > 1e-300, "lu_solve: singular matrix");
        for i in (k + 1)..n {
            let pi = perm[i];
            let factor = a[pi * n + k] / diag;
            a[pi * n + k] = factor;
            for j in (k + 1)..n {
                a[pi * n + j] -= factor * a[pk * n + j];
            }
        }
    }
    // forward substitution on the permuted system
    let mut y = vec![0.0; n];
    for i in 0..n {
        let pi = perm[i];
        let mut acc = x[pi];
        for j in 0..i {
            acc -= a[pi * n + j] * y[j];
        }
        y[i] = acc;
    }
    for i in (0..n).rev() {
        let pi = perm[i];
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= a[pi * n + j] * x[j];
        }
        x[i] = acc / a[pi * n + i];
    }
    DenseVector::from_slice(&x).unwrap()
}

/// Least-squares line fit; returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}
