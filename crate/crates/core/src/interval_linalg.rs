//! Interval vectors and matrices.
//!
//! Products are computed entry by entry from the four endpoint products, so
//! [`IntervalMatrix::matvec`] returns the exact range of `U z` over the two
//! boxes. Crisp products go through [`mat_vec`] and [`mat_mul`], which sum in
//! a fixed order so that the non-negative fast path and the general interval
//! path agree bit for bit.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::interval::{Interval, ORDER_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("lower bound exceeds upper bound at ({row}, {col}): {lo} > {hi}")]
    Unordered {
        row: usize,
        col: usize,
        lo: f64,
        hi: f64,
    },
    #[error("entry ({row}, {col}) is not finite")]
    NotFinite { row: usize, col: usize },
    #[error("power envelope needs a non-negative lower bound; entry ({row}, {col}) is {value}")]
    NegativeLowerBound { row: usize, col: usize, value: f64 },
    #[error(
        "{free} non-degenerate entries give 2^{free} vertices, above the budget of 2^{max_free}; sample members instead"
    )]
    VertexBudgetExceeded { free: usize, max_free: usize },
}

/// `m * v`, summing each row left to right.
pub fn mat_vec(m: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    let (rows, cols) = m.shape();
    debug_assert_eq!(cols, v.len());
    DVector::from_fn(rows, |i, _| {
        let mut acc = 0.0;
        for j in 0..cols {
            acc += m[(i, j)] * v[j];
        }
        acc
    })
}

/// `a * b`, summing each entry left to right.
pub fn mat_mul(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, inner) = a.shape();
    let cols = b.ncols();
    debug_assert_eq!(inner, b.nrows());
    DMatrix::from_fn(rows, cols, |i, j| {
        let mut acc = 0.0;
        for k in 0..inner {
            acc += a[(i, k)] * b[(k, j)];
        }
        acc
    })
}

/// A box `[lo, hi]` in `R^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector {
    pub lo: DVector<f64>,
    pub hi: DVector<f64>,
}

impl IntervalVector {
    pub fn new(lo: DVector<f64>, hi: DVector<f64>) -> Result<Self, LinalgError> {
        if lo.len() != hi.len() {
            return Err(LinalgError::DimensionMismatch(lo.len(), hi.len()));
        }
        for i in 0..lo.len() {
            if !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(LinalgError::NotFinite { row: i, col: 0 });
            }
            if lo[i] > hi[i] + ORDER_TOL {
                return Err(LinalgError::Unordered {
                    row: i,
                    col: 0,
                    lo: lo[i],
                    hi: hi[i],
                });
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn from_intervals(cuts: &[Interval]) -> Self {
        Self {
            lo: DVector::from_iterator(cuts.len(), cuts.iter().map(|c| c.lo)),
            hi: DVector::from_iterator(cuts.len(), cuts.iter().map(|c| c.hi)),
        }
    }

    pub fn point(z: DVector<f64>) -> Self {
        Self {
            lo: z.clone(),
            hi: z,
        }
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    pub fn get(&self, i: usize) -> Interval {
        Interval {
            lo: self.lo[i],
            hi: self.hi[i],
        }
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn encloses(&self, other: &IntervalVector) -> bool {
        self.len() == other.len() && (0..self.len()).all(|i| self.get(i).encloses(&other.get(i)))
    }

    pub fn contains_point(&self, z: &DVector<f64>, tol: f64) -> bool {
        z.len() == self.len() && (0..self.len()).all(|i| self.get(i).contains_with_tol(z[i], tol))
    }

    /// Largest coordinate magnitude over the box.
    pub fn sup_norm(&self) -> f64 {
        self.intervals().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn max_width(&self) -> f64 {
        self.intervals().map(|c| c.width()).fold(0.0, f64::max)
    }
}

/// An interval matrix `[lo, hi]`, ordered entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    pub lo: DMatrix<f64>,
    pub hi: DMatrix<f64>,
}

/// Midpoint/radius form of an interval matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MidRad {
    pub center: DMatrix<f64>,
    pub radius: DMatrix<f64>,
}

impl IntervalMatrix {
    pub fn new(lo: DMatrix<f64>, hi: DMatrix<f64>) -> Result<Self, LinalgError> {
        if lo.shape() != hi.shape() {
            return Err(LinalgError::DimensionMismatch(lo.len(), hi.len()));
        }
        for j in 0..lo.ncols() {
            for i in 0..lo.nrows() {
                let (l, h) = (lo[(i, j)], hi[(i, j)]);
                if !l.is_finite() || !h.is_finite() {
                    return Err(LinalgError::NotFinite { row: i, col: j });
                }
                if l > h {
                    return Err(LinalgError::Unordered {
                        row: i,
                        col: j,
                        lo: l,
                        hi: h,
                    });
                }
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn crisp(m: DMatrix<f64>) -> Self {
        Self {
            lo: m.clone(),
            hi: m,
        }
    }

    /// Builds an `n x n` matrix from row-major entry intervals.
    pub fn from_fn<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Interval,
    {
        let mut lo = DMatrix::zeros(n, n);
        let mut hi = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = f(i, j);
                lo[(i, j)] = c.lo;
                hi[(i, j)] = c.hi;
            }
        }
        Self { lo, hi }
    }

    pub fn nrows(&self) -> usize {
        self.lo.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.lo.ncols()
    }

    pub fn dim(&self) -> usize {
        self.lo.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.lo.is_square()
    }

    pub fn ensure_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.nrows())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            })
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Interval {
        Interval {
            lo: self.lo[(i, j)],
            hi: self.hi[(i, j)],
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.lo == self.hi
    }

    /// `true` when every member matrix lies in `other`.
    pub fn encloses(&self, other: &IntervalMatrix) -> bool {
        self.lo.shape() == other.lo.shape()
            && self.lo.iter().zip(other.lo.iter()).all(|(a, b)| a <= b)
            && self.hi.iter().zip(other.hi.iter()).all(|(a, b)| a >= b)
    }

    pub fn contains_matrix(&self, m: &DMatrix<f64>) -> bool {
        m.shape() == self.lo.shape()
            && m.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// First entry of the lower bound below zero, if any.
    pub fn first_negative_lower(&self) -> Option<(usize, usize, f64)> {
        first_where(&self.lo, |v| v < 0.0)
    }

    /// First entry of the upper bound above zero, if any.
    pub fn first_positive_upper(&self) -> Option<(usize, usize, f64)> {
        first_where(&self.hi, |v| v > 0.0)
    }

    pub fn mid_rad(&self) -> MidRad {
        MidRad {
            center: (&self.lo + &self.hi) * 0.5,
            radius: (&self.hi - &self.lo) * 0.5,
        }
    }

    /// Exact box of `{ U z : U in self, z in v }`.
    pub fn matvec(&self, v: &IntervalVector) -> Result<IntervalVector, LinalgError> {
        if self.ncols() != v.len() {
            return Err(LinalgError::DimensionMismatch(self.ncols(), v.len()));
        }
        let rows = self.nrows();
        let mut lo = DVector::zeros(rows);
        let mut hi = DVector::zeros(rows);
        for i in 0..rows {
            let mut acc_lo = 0.0;
            let mut acc_hi = 0.0;
            for j in 0..self.ncols() {
                let p = self.entry(i, j) * v.get(j);
                acc_lo += p.lo;
                acc_hi += p.hi;
            }
            lo[i] = acc_lo;
            hi[i] = acc_hi;
        }
        Ok(IntervalVector { lo, hi })
    }

    /// `[lo^k, hi^k]`, which brackets `{U^k}` when `lo >= 0`.
    pub fn power_envelope_nonneg(&self, k: usize) -> Result<IntervalMatrix, LinalgError> {
        let n = self.ensure_square()?;
        if let Some((row, col, value)) = self.first_negative_lower() {
            return Err(LinalgError::NegativeLowerBound { row, col, value });
        }
        let mut lo = DMatrix::identity(n, n);
        let mut hi = DMatrix::identity(n, n);
        for _ in 0..k {
            lo = mat_mul(&self.lo, &lo);
            hi = mat_mul(&self.hi, &hi);
        }
        Ok(IntervalMatrix { lo, hi })
    }

    /// Number of entries with `lo < hi`.
    pub fn free_entries(&self) -> usize {
        self.lo
            .iter()
            .zip(self.hi.iter())
            .filter(|(l, h)| l < h)
            .count()
    }

    /// Every matrix whose entries sit at an endpoint. Degenerate entries do
    /// not branch, so a crisp matrix has exactly one vertex.
    pub fn vertices(&self, budget: VertexBudget) -> Result<Vertices<'_>, LinalgError> {
        let free_idx: Vec<(usize, usize)> = (0..self.ncols())
            .flat_map(|j| (0..self.nrows()).map(move |i| (i, j)))
            .filter(|&(i, j)| self.lo[(i, j)] < self.hi[(i, j)])
            .collect();
        if free_idx.len() > budget.max_free_entries {
            return Err(LinalgError::VertexBudgetExceeded {
                free: free_idx.len(),
                max_free: budget.max_free_entries,
            });
        }
        Ok(Vertices {
            matrix: self,
            count: 1u64 << free_idx.len(),
            free_idx,
            next: 0,
        })
    }

    /// Entrywise uniform member.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            sample_in(self.lo[(i, j)], self.hi[(i, j)], rng)
        })
    }
}

fn first_where(m: &DMatrix<f64>, pred: impl Fn(f64) -> bool) -> Option<(usize, usize, f64)> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if pred(m[(i, j)]) {
                return Some((i, j, m[(i, j)]));
            }
        }
    }
    None
}

/// Uniform draw in `[lo, hi]` that never leaves the interval.
pub fn sample_in<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.gen();
    (lo + u * (hi - lo)).clamp(lo, hi)
}

/// Uniform point of a box.
pub fn sample_box<R: Rng + ?Sized>(b: &IntervalVector, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(b.len(), |i, _| sample_in(b.lo[i], b.hi[i], rng))
}

/// Cap on vertex enumeration, as the number of non-degenerate entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexBudget {
    pub max_free_entries: usize,
}

impl Default for VertexBudget {
    fn default() -> Self {
        Self {
            max_free_entries: 16,
        }
    }
}

pub struct Vertices<'a> {
    matrix: &'a IntervalMatrix,
    free_idx: Vec<(usize, usize)>,
    count: u64,
    next: u64,
}

impl Vertices<'_> {
    pub fn count(&self) -> u64 {
        self.count
    }
}

impl Iterator for Vertices<'_> {
    type Item = DMatrix<f64>;

    fn next(&mut self) -> Option<DMatrix<f64>> {
        if self.next >= self.count {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut m = self.matrix.lo.clone();
        for (bit, &(i, j)) in self.free_idx.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m[(i, j)] = self.matrix.hi[(i, j)];
            }
        }
        Some(m)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Vertices<'_> {}

/// Gershgorin discs of a crisp square matrix as `(center, radius)` per row.
pub fn gershgorin_rows(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
    (0..m.nrows())
        .map(|i| {
            let radius = (0..m.ncols())
                .filter(|&j| j != i)
                .map(|j| m[(i, j)].abs())
                .sum();
            (m[(i, i)], radius)
        })
        .collect()
}
