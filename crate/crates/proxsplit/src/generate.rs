//! Deterministic construction of experiment instances: DCT transforms,
//! Gaussian and partial-DCT sensing matrices, sparse ground truths, noisy
//! measurements, incomplete-signal reconstruction instances, and synthetic
//! test signals.
//!
//! Every generator is a pure function of its dimensions and a 64-bit seed;
//! repeated calls are bitwise identical.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::rng::{derive_seed, Rng};

/// Default measurement-noise scale.
pub const DEFAULT_NOISE_SIGMA: f64 = 1e-3;
/// Default regularization weight.
pub const DEFAULT_LAMBDA: f64 = 0.1;

/// Orthonormal DCT-II matrix `D` (d x d):
/// `D[0][j] = sqrt(1/d)`, `D[k][j] = sqrt(2/d) cos(pi (2j+1) k / (2d))`.
///
/// The synthesis (inverse) transform is `D^T`.
pub fn dct_matrix(d: usize) -> DenseMatrix {
    assert!(d >= 1, "dct_matrix needs d >= 1");
    let mut data = vec![0.0; d * d];
    let c0 = (1.0 / d as f64).sqrt();
    let ck = (2.0 / d as f64).sqrt();
    for j in 0..d {
        data[j] = c0;
    }
    for k in 1..d {
        for j in 0..d {
            data[k * d + j] =
                ck * (std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2.0 * d as f64)).cos();
        }
    }
    DenseMatrix::from_vec_unchecked(d, d, data)
}

/// One entry of the DCT-II matrix without materializing it.
#[inline]
fn dct_entry(d: usize, k: usize, j: usize) -> f64 {
    if k == 0 {
        (1.0 / d as f64).sqrt()
    } else {
        (2.0 / d as f64).sqrt()
            * (std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2.0 * d as f64)).cos()
    }
}

/// Analysis transform `D u` (dense O(d^2) product, computed on the fly).
pub fn apply_dct(u: &DenseVector) -> DenseVector {
    let d = u.len();
    let mut out = vec![0.0; d];
    for (k, ok) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..d {
            acc += dct_entry(d, k, j) * u[j];
        }
        *ok = acc;
    }
    DenseVector::from_vec_unchecked(out)
}

/// Synthesis transform `D^T x`.
pub fn apply_idct(x: &DenseVector) -> DenseVector {
    let d = x.len();
    let mut out = vec![0.0; d];
    for k in 0..d {
        let xk = x[k];
        if xk == 0.0 {
            continue;
        }
        for (j, oj) in out.iter_mut().enumerate() {
            *oj += dct_entry(d, k, j) * xk;
        }
    }
    DenseVector::from_vec_unchecked(out)
}

/// i.i.d. standard-normal matrix, entries drawn in row-major order.
pub fn gaussian_matrix_raw(m: usize, d: usize, seed: u64) -> DenseMatrix {
    assert!(m >= 1 && d >= 1, "gaussian matrix needs m, d >= 1");
    let mut rng = Rng::new(seed);
    DenseMatrix::from_vec_unchecked(m, d, rng.normal_vec(m * d))
}

/// Gaussian sensing matrix with orthonormalized rows (`A A^T = I`), so the
/// largest eigenvalue of `A^T A` is exactly 1, matching the spectral profile
/// of the partial-DCT matrices. Requires `m <= d`; for `m > d` the rows
/// cannot be orthonormal and columns are scaled to unit norm instead.
pub fn gaussian_matrix(m: usize, d: usize, seed: u64) -> DenseMatrix {
    let raw = gaussian_matrix_raw(m, d, seed);
    if m > d {
        return unit_column_matrix(raw);
    }
    // rows of L^{-1} A are orthonormal when A A^T = L L^T
    let chol = crate::linalg::Cholesky::factor(&raw.outer_gram())
        .expect("a Gaussian draw has full row rank");
    let lower = chol.lower();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<f64> = raw.row(i).to_vec();
        for k in 0..i {
            let lik = lower[i * m + k];
            let prev = &rows[k];
            for (r, p) in row.iter_mut().zip(prev) {
                *r -= lik * p;
            }
        }
        let diag = lower[i * m + i];
        for r in &mut row {
            *r /= diag;
        }
        rows.push(row);
    }
    let mut data = Vec::with_capacity(m * d);
    for row in rows {
        data.extend_from_slice(&row);
    }
    DenseMatrix::from_vec_unchecked(m, d, data)
}

fn unit_column_matrix(raw: DenseMatrix) -> DenseMatrix {
    let (m, d) = (raw.rows(), raw.cols());
    let mut data = raw.as_slice().to_vec();
    for j in 0..d {
        let mut norm_sq = 0.0;
        for i in 0..m {
            norm_sq += data[i * d + j] * data[i * d + j];
        }
        let norm = norm_sq.sqrt();
        if norm > 0.0 {
            for i in 0..m {
                data[i * d + j] /= norm;
            }
        }
    }
    DenseMatrix::from_vec_unchecked(m, d, data)
}

/// Partial DCT sensing matrix: `m` distinct rows of [`dct_matrix`] chosen
/// uniformly without replacement. Rows are orthonormal, so the largest
/// eigenvalue of `A^T A` is exactly 1.
pub fn pdct_matrix(m: usize, d: usize, seed: u64) -> Result<DenseMatrix> {
    if m > d {
        return Err(Error::invalid(
            "m",
            format!("cannot select {m} distinct rows from a {d}-point transform"),
        ));
    }
    if m == 0 || d == 0 {
        return Err(Error::invalid("m", "dimensions must be positive"));
    }
    let mut rng = Rng::new(seed);
    let rows = rng.sample_without_replacement(d, m);
    let mut data = vec![0.0; m * d];
    for (i, &k) in rows.iter().enumerate() {
        for j in 0..d {
            data[i * d + j] = dct_entry(d, k, j);
        }
    }
    Ok(DenseMatrix::from_vec_unchecked(m, d, data))
}

/// Sparse vector with `s` nonzeros on a uniform random support, values
/// i.i.d. standard normal.
pub fn sparse_ground_truth(d: usize, s: usize, seed: u64) -> Result<DenseVector> {
    if s == 0 || s > d {
        return Err(Error::invalid(
            "s",
            format!("sparsity {s} not in 1..={d}"),
        ));
    }
    let mut rng = Rng::new(seed);
    let support = rng.sample_without_replacement(d, s);
    let mut values = vec![0.0; d];
    for &idx in &support {
        values[idx] = rng.standard_normal();
    }
    Ok(DenseVector::from_vec_unchecked(values))
}

/// Noisy measurements `b = A x_g + sigma z`, `z` i.i.d. standard normal in
/// measurement space.
pub fn make_measurements(
    a: &DenseMatrix,
    x_g: &DenseVector,
    sigma: f64,
    seed: u64,
) -> Result<DenseVector> {
    if x_g.len() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: x_g.len(),
        });
    }
    if sigma < 0.0 {
        return Err(Error::invalid("sigma", "must be nonnegative"));
    }
    let mut b = a.matvec(x_g);
    if sigma > 0.0 {
        let mut rng = Rng::new(seed);
        let noise = DenseVector::from_vec_unchecked(rng.normal_vec(a.rows()));
        b = b.add_scaled(&noise, sigma);
    }
    Ok(b)
}

/// `round(rate * d)` distinct observation indices, sorted ascending.
pub fn random_mask(d: usize, rate: f64, seed: u64) -> Result<Vec<usize>> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid("rate", format!("{rate} not in (0, 1]")));
    }
    let k = (rate * d as f64).round() as usize;
    if k == 0 {
        return Err(Error::invalid("rate", "selects no samples"));
    }
    let mut rng = Rng::new(seed);
    let mut mask = rng.sample_without_replacement(d, k);
    mask.sort_unstable();
    Ok(mask)
}

/// An incomplete, noisy observation of a signal.
#[derive(Debug, Clone)]
pub struct ReconstructionSpec {
    /// Ground-truth time series `u` (length d).
    pub signal: DenseVector,
    /// Sorted distinct indices of the observed entries.
    pub mask: Vec<usize>,
    /// Standard deviation of the observation noise.
    pub noise_sigma: f64,
    /// Seed for the noise stream.
    pub seed: u64,
}

impl ReconstructionSpec {
    pub fn sampling_rate(&self) -> f64 {
        self.mask.len() as f64 / self.signal.len() as f64
    }
}

/// What produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Gaussian,
    Pdct,
    Reconstruction,
}

impl InstanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InstanceKind::Gaussian => "gaussian",
            InstanceKind::Pdct => "pdct",
            InstanceKind::Reconstruction => "reconstruction",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(InstanceKind::Gaussian),
            "pdct" => Some(InstanceKind::Pdct),
            "reconstruction" => Some(InstanceKind::Reconstruction),
            _ => None,
        }
    }
}

/// A concrete sparse-recovery instance: sensing matrix, measurements,
/// regularization weight, and (when synthetic) the ground truth.
#[derive(Debug, Clone)]
pub struct CsInstance {
    pub a: DenseMatrix,
    pub b: DenseVector,
    pub lambda: f64,
    pub ground_truth: Option<DenseVector>,
    pub seed: u64,
    pub kind: InstanceKind,
}

/// Builds `A = S Psi` (selection of inverse-DCT rows) and noisy observed
/// entries from `spec`. Solving the sparse model in coefficient space and
/// applying [`apply_idct`] to the solution reconstructs the signal.
pub fn make_reconstruction_instance(spec: &ReconstructionSpec, lambda: f64) -> Result<CsInstance> {
    let d = spec.signal.len();
    if spec.mask.is_empty() {
        return Err(Error::invalid("mask", "no observed entries"));
    }
    for pair in spec.mask.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid("mask", "indices must be strictly increasing"));
        }
    }
    if *spec.mask.last().unwrap() >= d {
        return Err(Error::invalid("mask", "index out of range"));
    }
    if lambda <= 0.0 {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let m = spec.mask.len();
    // row i of A is row mask[i] of Psi = D^T, i.e. A[i][j] = D[j][mask[i]]
    let mut data = vec![0.0; m * d];
    for (i, &r) in spec.mask.iter().enumerate() {
        for j in 0..d {
            data[i * d + j] = dct_entry(d, j, r);
        }
    }
    let a = DenseMatrix::from_vec_unchecked(m, d, data);

    let mut rng = Rng::new(spec.seed);
    let mut b = vec![0.0; m];
    for (bi, &r) in b.iter_mut().zip(&spec.mask) {
        *bi = spec.signal[r] + spec.noise_sigma * rng.standard_normal();
    }
    let b = DenseVector::from_vec_unchecked(b);

    Ok(CsInstance {
        a,
        b,
        lambda,
        ground_truth: Some(apply_dct(&spec.signal)),
        seed: spec.seed,
        kind: InstanceKind::Reconstruction,
    })
}

/// Families of synthetic test signals, stand-ins for smooth voltage-like
/// and nonsmooth load-like time series. Both are numerically sparse under
/// the DCT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    SmoothSinusoid,
    PiecewiseLoad,
}

impl SignalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignalKind::SmoothSinusoid => "smooth_sinusoid",
            SignalKind::PiecewiseLoad => "piecewise_load",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "smooth_sinusoid" => Some(SignalKind::SmoothSinusoid),
            "piecewise_load" => Some(SignalKind::PiecewiseLoad),
            _ => None,
        }
    }
}

/// Seeded synthetic signal of length `d >= 8`.
pub fn synthetic_signal(kind: SignalKind, d: usize, seed: u64) -> Result<DenseVector> {
    if d < 8 {
        return Err(Error::invalid("d", "synthetic signals need d >= 8"));
    }
    let mut rng = Rng::new(seed);
    let n = d as f64;
    let mut u = vec![0.0; d];
    match kind {
        SignalKind::SmoothSinusoid => {
            // fundamental plus two harmonics near spectral bins; the seeded
            // detuning and phase jitter control how far from exactly sparse
            // the spectrum is (real voltage traces sit in the same regime)
            let k1 = rng.range(n / 60.0, n / 20.0).round().max(2.0);
            let comps = [
                (k1, 1.0),
                (2.0 * k1, 0.12 * (1.0 + rng.uniform())),
                (3.0 * k1, 0.05 * (1.0 + rng.uniform())),
            ];
            for (k, amp) in comps {
                if 2.0 * k >= n {
                    continue;
                }
                let f = k + rng.range(-0.3, 0.3);
                let phase = rng.range(-0.5, 0.5);
                for (j, uj) in u.iter_mut().enumerate() {
                    *uj += amp
                        * (std::f64::consts::PI * f * (2 * j + 1) as f64 / (2.0 * n) + phase)
                            .cos();
                }
            }
        }
        SignalKind::PiecewiseLoad => {
            let base = rng.range(0.8, 1.3);
            let trend_cycles = rng.range(1.0, 3.0);
            let trend_amp = rng.range(0.2, 0.5);
            let trend_phase = rng.range(0.0, std::f64::consts::TAU);
            let days = rng.range(8.0, 16.0).round();
            let daily = [
                (days, rng.range(0.3, 0.6)),
                (2.0 * days, rng.range(0.1, 0.25)),
                (3.0 * days, rng.range(0.03, 0.1)),
            ];
            let daily_phases = [
                rng.range(0.0, std::f64::consts::TAU),
                rng.range(0.0, std::f64::consts::TAU),
                rng.range(0.0, std::f64::consts::TAU),
            ];
            for (j, uj) in u.iter_mut().enumerate() {
                let t = (j as f64 + 0.5) / n;
                let mut v = base
                    + trend_amp * (std::f64::consts::TAU * trend_cycles * t + trend_phase).cos();
                for ((freq, amp), phase) in daily.iter().zip(&daily_phases) {
                    v += amp * (std::f64::consts::TAU * freq * t + phase).cos();
                }
                *uj = v;
            }
            // slope changes at a few random instants make the signal nonsmooth
            for _ in 0..4 {
                let t_k = rng.uniform();
                let slope = rng.range(-0.6, 0.6);
                for (j, uj) in u.iter_mut().enumerate() {
                    let t = (j as f64 + 0.5) / n;
                    if t > t_k {
                        *uj += slope * (t - t_k);
                    }
                }
            }
        }
    }
    Ok(DenseVector::from_vec_unchecked(u))
}

/// Dimensions of one benchmark case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseSpec {
    pub id: usize,
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub kind: InstanceKind,
}

/// The 20 benchmark sizes: cases 1-10 use Gaussian matrices with
/// `(m, d, s) = (360k, 1280k, 40k)`, cases 11-20 use partial-DCT matrices.
pub fn table_case(id: usize) -> Result<CaseSpec> {
    const PDCT_M: [usize; 10] = [360, 4320, 4680, 5040, 5400, 5760, 6120, 6480, 6840, 7200];
    match id {
        1..=10 => Ok(CaseSpec {
            id,
            m: 360 * id,
            d: 1280 * id,
            s: 40 * id,
            kind: InstanceKind::Gaussian,
        }),
        11..=20 => {
            let k = id - 10;
            Ok(CaseSpec {
                id,
                m: PDCT_M[k - 1],
                d: 1280 * k,
                s: 40 * k,
                kind: InstanceKind::Pdct,
            })
        }
        _ => Err(Error::invalid("case", format!("{id} not in 1..=20"))),
    }
}

/// Shrinks a case by `scale`, preserving the m/d and s/d ratios up to
/// rounding (every dimension stays at least 1).
pub fn scaled_case(case: CaseSpec, scale: f64) -> CaseSpec {
    if scale == 1.0 {
        return case;
    }
    let shrink = |v: usize| ((v as f64 * scale).round() as usize).max(1);
    CaseSpec {
        id: case.id,
        m: shrink(case.m),
        d: shrink(case.d),
        s: shrink(case.s),
        kind: case.kind,
    }
}

/// Builds one synthetic instance of a case. Sub-streams for the matrix,
/// ground truth, and noise are derived from `seed` so they never overlap.
pub fn build_case_instance(
    case: &CaseSpec,
    lambda: f64,
    sigma: f64,
    seed: u64,
) -> Result<CsInstance> {
    let a = match case.kind {
        InstanceKind::Gaussian => gaussian_matrix(case.m, case.d, derive_seed(seed, &[1])),
        InstanceKind::Pdct => pdct_matrix(case.m, case.d, derive_seed(seed, &[1]))?,
        InstanceKind::Reconstruction => {
            return Err(Error::invalid(
                "case",
                "reconstruction instances are built from a ReconstructionSpec",
            ))
        }
    };
    let x_g = sparse_ground_truth(case.d, case.s, derive_seed(seed, &[2]))?;
    let b = make_measurements(&a, &x_g, sigma, derive_seed(seed, &[3]))?;
    Ok(CsInstance {
        a,
        b,
        lambda,
        ground_truth: Some(x_g),
        seed,
        kind: case.kind,
    })
}
