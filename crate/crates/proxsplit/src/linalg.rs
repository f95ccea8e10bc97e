//! Dense vectors and matrices with the handful of kernels the solver needs.
//!
//! Everything is `f64` and row-major. Problem sizes in scope stay below
//! ~13k columns, so dense storage and O(n^2)/O(n^3) kernels are fine.

use crate::error::{Error, Result};

/// Dense column vector. Entries are guaranteed finite on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    values: Vec<f64>,
}

impl DenseVector {
    /// Builds a vector, rejecting NaN/Inf entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    /// Internal constructor for arithmetic results. Finiteness of outputs is
    /// the caller's responsibility (the solver guards iterate norms instead).
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Euclidean distance `||self - other||` without an intermediate allocation.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dist: length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        Self::from_vec_unchecked(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "sub: length mismatch");
        Self::from_vec_unchecked(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_vec_unchecked(self.values.iter().map(|a| c * a).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Self {
        assert_eq!(self.len(), other.len(), "add_scaled: length mismatch");
        Self::from_vec_unchecked(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.values.clone()
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Dense row-major matrix. Entries are guaranteed finite on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { data, rows, cols })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { data, rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: vec![0.0; rows * cols],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `A x`.
    pub fn matvec(&self, x: &DenseVector) -> DenseVector {
        assert_eq!(self.cols, x.len(), "matvec: dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for (i, oi) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.as_slice()) {
                acc += a * b;
            }
            *oi = acc;
        }
        DenseVector::from_vec_unchecked(out)
    }

    /// `A^T x`.
    pub fn tr_matvec(&self, x: &DenseVector) -> DenseVector {
        assert_eq!(self.rows, x.len(), "tr_matvec: dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = self.row(i);
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        DenseVector::from_vec_unchecked(out)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.at(i, j);
            }
        }
        DenseMatrix::from_vec_unchecked(self.cols, self.rows, data)
    }

    /// Gram matrix `A^T A` (cols x cols).
    pub fn gram(&self) -> DenseMatrix {
        let d = self.cols;
        let mut g = vec![0.0; d * d];
        for i in 0..self.rows {
            let row = self.row(i);
            for (j, &rj) in row.iter().enumerate() {
                if rj == 0.0 {
                    continue;
                }
                let gj = &mut g[j * d..(j + 1) * d];
                for (gk, &rk) in gj.iter_mut().zip(row) {
                    *gk += rj * rk;
                }
            }
        }
        DenseMatrix::from_vec_unchecked(d, d, g)
    }

    /// Outer Gram matrix `A A^T` (rows x rows).
    pub fn outer_gram(&self) -> DenseMatrix {
        let m = self.rows;
        let mut g = vec![0.0; m * m];
        for i in 0..m {
            let ri = self.row(i);
            for j in i..m {
                let rj = self.row(j);
                let mut acc = 0.0;
                for (a, b) in ri.iter().zip(rj) {
                    acc += a * b;
                }
                g[i * m + j] = acc;
                g[j * m + i] = acc;
            }
        }
        DenseMatrix::from_vec_unchecked(m, m, g)
    }

    /// Adds `c` to every diagonal entry (square matrices only).
    pub fn add_diagonal(&mut self, c: f64) {
        assert_eq!(self.rows, self.cols, "add_diagonal: matrix not square");
        for i in 0..self.rows {
            self.data[i * self.cols + i] += c;
        }
    }

    pub fn scale_in_place(&mut self, c: f64) {
        for v in &mut self.data {
            *v *= c;
        }
    }
}

/// Cholesky factorization `G = L L^T` of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    pub fn factor(g: &DenseMatrix) -> Result<Self> {
        assert_eq!(g.rows(), g.cols(), "cholesky: matrix not square");
        let n = g.rows();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = g.at(j, j);
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let dj = diag.sqrt();
            l[j * n + j] = dj;
            for i in (j + 1)..n {
                let mut acc = g.at(i, j);
                for k in 0..j {
                    acc -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = acc / dj;
            }
        }
        Ok(Self { dim: n, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major lower-triangular factor (upper part is zero).
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Solves `L L^T x = rhs`.
    pub fn solve(&self, rhs: &DenseVector) -> DenseVector {
        assert_eq!(self.dim, rhs.len(), "cholesky solve: dimension mismatch");
        let n = self.dim;
        let l = &self.lower;
        let mut x = rhs.to_vec();
        // forward: L u = rhs
        for i in 0..n {
            let mut acc = x[i];
            for k in 0..i {
                acc -= l[i * n + k] * x[k];
            }
            x[i] = acc / l[i * n + i];
        }
        // backward: L^T x = u
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in (i + 1)..n {
                acc -= l[k * n + i] * x[k];
            }
            x[i] = acc / l[i * n + i];
        }
        DenseVector::from_vec_unchecked(x)
    }
}
