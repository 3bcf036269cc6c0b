//! Dense linear algebra, the seeded random source, covariance estimation and
//! dominant-eigenvalue extraction.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("matrix entry {i}"),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact panics on a zero chunk size
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        self.iter_rows().map(|r| dot(r, v)).collect()
    }

    /// Largest absolute difference between `m[i][j]` and `m[j][i]`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Population covariance `(1/N) Σ (y - ȳ)(y - ȳ)ᵗ`, computed in two passes.
pub fn sample_covariance<P: AsRef<[f64]>>(points: &[P]) -> Result<Matrix> {
    if points.len() < 2 {
        return Err(Error::Degenerate(format!(
            "covariance needs at least 2 points, got {}",
            points.len()
        )));
    }
    let d = points[0].as_ref().len();
    // accumulate relative to the first point so identical inputs give exact zeros
    let origin = points[0].as_ref();
    let mut mean = vec![0.0; d];
    for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != d {
            return Err(Error::Shape(format!(
                "point {i} has dimension {}, expected {d}",
                p.len()
            )));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("covariance point {i}"),
            });
        }
        for ((m, v), o) in mean.iter_mut().zip(p).zip(origin) {
            *m += v - o;
        }
    }
    let inv_n = 1.0 / points.len() as f64;
    mean.iter_mut().for_each(|m| *m *= inv_n);

    let mut cov = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for p in points {
        for (((c, v), m), o) in centered.iter_mut().zip(p.as_ref()).zip(&mean).zip(origin) {
            *c = (v - o) - m;
        }
        for i in 0..d {
            for j in i..d {
                cov[(i, j)] += centered[i] * centered[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] * inv_n;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

pub const POWER_ITERATION_TOLERANCE: f64 = 1e-10;
pub const POWER_ITERATION_MAX_ITERS: usize = 10_000;

/// Largest eigenvalue of a symmetric matrix.
///
/// Power iteration on the matrix itself finds the eigenvalue of largest
/// magnitude; when that one is negative a second pass runs on the shifted
/// matrix `M + |λ|I`, whose dominant eigenvalue is `λ_max + |λ|`.
pub fn lambda_max(m: &Matrix) -> Result<f64> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "lambda_max needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "lambda_max input".into(),
        });
    }
    let scale = m.max_abs().max(1.0);
    if m.asymmetry() > 1e-9 * scale {
        return Err(Error::Validation(format!(
            "matrix is not symmetric (asymmetry {:e})",
            m.asymmetry()
        )));
    }
    if m.rows() == 0 {
        return Err(Error::Degenerate("empty matrix".into()));
    }
    if m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let dominant = power_iteration(m, 0.0)?;
    if dominant >= 0.0 {
        return Ok(dominant);
    }
    let shift = -dominant;
    Ok(power_iteration(m, shift)? - shift)
}

/// Dominant eigenvalue of `m + shift·I`.
fn power_iteration(m: &Matrix, shift: f64) -> Result<f64> {
    let d = m.rows();
    // fixed, non-symmetric start so it is unlikely to be orthogonal to the top eigenvector
    let mut v: Vec<f64> = (0..d).map(|i| 1.0 + 0.37 * i as f64 / d as f64).collect();
    normalize(&mut v);
    let mut rayleigh = f64::NAN;
    let mut next = vec![0.0; d];
    for _ in 0..POWER_ITERATION_MAX_ITERS {
        for (i, out) in next.iter_mut().enumerate() {
            *out = dot(m.row(i), &v) + shift * v[i];
        }
        let estimate = dot(&v, &next);
        let len = norm(&next);
        if len == 0.0 {
            return Ok(0.0);
        }
        next.iter_mut().for_each(|x| *x /= len);
        std::mem::swap(&mut v, &mut next);
        if (estimate - rayleigh).abs() <= POWER_ITERATION_TOLERANCE * estimate.abs().max(1e-300) {
            return Ok(estimate);
        }
        rayleigh = estimate;
    }
    Err(Error::NotConverged {
        iterations: POWER_ITERATION_MAX_ITERS,
        last_estimate: rayleigh,
        last_vector: v,
    })
}

fn normalize(v: &mut [f64]) {
    let len = norm(v);
    if len > 0.0 {
        v.iter_mut().for_each(|x| *x /= len);
    }
}

/// Seeded, reproducible random source.
///
/// Independent streams can be split off with [`SeededRng::stream`]; draws on
/// one stream never perturb another, so model initialisation, data sampling
/// and shuffling stay decoupled.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A fresh generator on stream `id` of the same seed.
    pub fn stream(seed: u64, id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(id);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform_range(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
