//! Eigenvalue helpers for crisp matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// A complex eigenvalue as a `(re, im)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Above this dimension the spectral radius comes from repeated squaring
    /// instead of a dense eigensolve.
    pub dense_max_dim: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { dense_max_dim: 64 }
    }
}

/// All eigenvalues of a square matrix, or `None` if the eigensolver fails.
pub fn eigenvalues(m: &DMatrix<f64>) -> Option<Vec<Eigenvalue>> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    let f = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let ev = f.eigenvalues().ok()?;
    Some(
        ev.iter()
            .map(|c| Eigenvalue { re: c.re, im: c.im })
            .collect(),
    )
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    spectral_radius_with(m, SpectralConfig::default())
}

pub fn spectral_radius_with(m: &DMatrix<f64>, cfg: SpectralConfig) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    if m.nrows() <= cfg.dense_max_dim {
        if let Some(ev) = eigenvalues(m) {
            return ev.iter().map(Eigenvalue::modulus).fold(0.0, f64::max);
        }
    }
    gelfand_radius(m, 48)
}

/// `lim ||A^k||^(1/k)` estimated with `squarings` normalised squarings.
pub fn gelfand_radius(m: &DMatrix<f64>, squarings: u32) -> f64 {
    let norm = |a: &DMatrix<f64>| a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let n0 = norm(m);
    if n0 == 0.0 {
        return 0.0;
    }
    let mut b = m / n0;
    // A^(2^s) = exp(log_c) * b
    let mut log_c = n0.ln();
    for s in 0..squarings {
        let sq = &b * &b;
        let nrm = norm(&sq);
        if nrm == 0.0 {
            return 0.0;
        }
        log_c = 2.0 * log_c + nrm.ln();
        b = sq / nrm;
        if s + 1 == squarings {
            return (log_c / 2f64.powi(s as i32 + 1)).exp();
        }
    }
    n0
}

/// `(A + A^T) / 2`.
pub fn sym_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// `(A - A^T) / 2`.
pub fn skew_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a - a.transpose()) * 0.5
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn symmetric_extremes(s: &DMatrix<f64>) -> (f64, f64) {
    if s.nrows() == 0 {
        return (0.0, 0.0);
    }
    let ev = SymmetricEigen::new(s.clone()).eigenvalues;
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
