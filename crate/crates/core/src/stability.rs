//! Sufficient stability tests for interval matrices.
//!
//! Every positive verdict ([`Status::AsymptoticallyStable`] or
//! [`Status::Stable`]) comes from a closed-form sufficient condition that
//! covers every member of the interval matrix. Strict inequalities are
//! evaluated with no slack. The sampled falsifier can only disprove the
//! hypothesis that all members are Schur stable; when it finds nothing it
//! reports [`Status::Inconclusive`].

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::interval_linalg::{IntervalMatrix, LinalgError, VertexBudget};
use crate::spectral::{self, SpectralConfig};

/// Slack above 1 that a sampled spectral radius must exceed to count as a
/// counterexample.
pub const FALSIFY_TOL: f64 = 1e-9;
/// Tolerance for the zero block and unit corner of a transformed matrix.
pub const BLOCK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StabilityError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("transform has dimension {got}, expected {expected}")]
    TransformDimension { expected: usize, got: usize },
    #[error(
        "transform is singular or ill-conditioned (condition number {condition:e}, cap {cap:e})"
    )]
    IllConditionedTransform { condition: f64, cap: f64 },
    #[error("Rayleigh cross-check box {rayleigh:?} escapes the closed-form box {closed:?}")]
    CrossCheckFailed {
        closed: EigenBox,
        rayleigh: EigenBox,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    AsymptoticallyStable,
    /// Stable but not asymptotically stable (a simple eigenvalue may sit on
    /// the unit circle).
    Stable,
    Inconclusive,
    Falsified,
}

impl Status {
    pub fn is_decisive(self) -> bool {
        !matches!(self, Status::Inconclusive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    GershgorinNonneg,
    GershgorinNonpos,
    EigenBox,
    Marginal,
    SampledFalsifier,
    Analyze,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalCase {
    /// Non-negative members, reduced upper bound checked row by row.
    Nonneg,
    /// Non-positive members, reduced lower bound checked row by row.
    Nonpos,
    /// Reduced interval matrix checked with the eigenvalue box.
    Interval,
}

/// Supporting data attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A bound matrix has an entry of the wrong sign.
    SignViolation {
        row: usize,
        col: usize,
        value: f64,
    },
    /// A row sum condition failed (or, on success, the tightest row).
    Row {
        row: usize,
        off_diagonal_sum: f64,
        bound: f64,
    },
    EigenBox {
        eigen_box: EigenBox,
        corner_moduli: [f64; 4],
    },
    UnstableMatrix {
        matrix: Vec<Vec<f64>>,
        spectral_radius: f64,
    },
    SampledRadii {
        vertices: usize,
        samples: usize,
        max_spectral_radius: f64,
    },
    MarginalReduction {
        case: MarginalCase,
        reduced_lo: Vec<Vec<f64>>,
        reduced_hi: Vec<Vec<f64>>,
    },
    Requirements {
        failed: Vec<String>,
    },
    SubReports(Vec<StabilityVerdict>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub status: Status,
    pub criterion: Criterion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl StabilityVerdict {
    fn new(status: Status, criterion: Criterion, witness: Witness) -> Self {
        Self {
            status,
            criterion,
            witness: Some(witness),
        }
    }

    /// Exit status for the command line: 0 stable, 2 falsified, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::AsymptoticallyStable | Status::Stable => 0,
            Status::Falsified => 2,
            Status::Inconclusive => 3,
        }
    }
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

/// `(row, off_diagonal_sum, bound)`.
type RowHit = (usize, f64, f64);

/// Rows of `m` that fail `sum_{j != i} m_ij < 1 - m_ii`, as
/// `(row, off_diagonal_sum, 1 - m_ii)`; also returns the row with least slack.
fn row_condition(
    m: &DMatrix<f64>,
    holds: impl Fn(f64, f64) -> bool,
    bound_of: impl Fn(f64) -> f64,
) -> (Option<RowHit>, Option<RowHit>) {
    let mut tightest: Option<RowHit> = None;
    for i in 0..m.nrows() {
        let off: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)]).sum();
        let bound = bound_of(m[(i, i)]);
        if !holds(off, bound) {
            return (Some((i, off, bound)), None);
        }
        let slack = (bound - off).abs();
        if tightest.is_none_or(|(_, o, b)| slack < (b - o).abs()) {
            tightest = Some((i, off, bound));
        }
    }
    (None, tightest)
}

/// Row test for `lo >= 0`: every row of `hi` must satisfy
/// `sum_{j != i} hi_ij < 1 - hi_ii`.
pub fn gershgorin_nonneg_test(h: &IntervalMatrix) -> Result<StabilityVerdict, StabilityError> {
    h.ensure_square()?;
    let c = Criterion::GershgorinNonneg;
    if let Some((row, col, value)) = h.first_negative_lower() {
        return Ok(StabilityVerdict::new(
            Status::Inconclusive,
            c,
            Witness::SignViolation { row, col, value },
        ));
    }
    Ok(row_verdict(
        c,
        row_condition(&h.hi, |off, b| off < b, |d| 1.0 - d),
    ))
}

/// Row test for `hi <= 0`: every row of `lo` must satisfy
/// `sum_{j != i} lo_ij > -1 - lo_ii`.
pub fn gershgorin_nonpos_test(h: &IntervalMatrix) -> Result<StabilityVerdict, StabilityError> {
    h.ensure_square()?;
    let c = Criterion::GershgorinNonpos;
    if let Some((row, col, value)) = h.first_positive_upper() {
        return Ok(StabilityVerdict::new(
            Status::Inconclusive,
            c,
            Witness::SignViolation { row, col, value },
        ));
    }
    Ok(row_verdict(
        c,
        row_condition(&h.lo, |off, b| off > b, |d| -1.0 - d),
    ))
}

fn row_verdict(
    c: Criterion,
    (failed, tightest): (Option<RowHit>, Option<RowHit>),
) -> StabilityVerdict {
    match (failed, tightest) {
        (Some((row, off_diagonal_sum, bound)), _) => StabilityVerdict::new(
            Status::Inconclusive,
            c,
            Witness::Row {
                row,
                off_diagonal_sum,
                bound,
            },
        ),
        (None, Some((row, off_diagonal_sum, bound))) => StabilityVerdict::new(
            Status::AsymptoticallyStable,
            c,
            Witness::Row {
                row,
                off_diagonal_sum,
                bound,
            },
        ),
        // 0x0 matrix
        (None, None) => StabilityVerdict {
            status: Status::AsymptoticallyStable,
            criterion: c,
            witness: None,
        },
    }
}

/// Rectangle in the complex plane holding every eigenvalue of every member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenBox {
    pub r_lo: f64,
    pub r_hi: f64,
    pub i_lo: f64,
    pub i_hi: f64,
}

impl EigenBox {
    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.r_lo <= re && re <= self.r_hi && self.i_lo <= im && im <= self.i_hi
    }

    pub fn encloses(&self, other: &EigenBox, tol: f64) -> bool {
        self.r_lo - tol <= other.r_lo
            && other.r_hi <= self.r_hi + tol
            && self.i_lo - tol <= other.i_lo
            && other.i_hi <= self.i_hi + tol
    }

    /// Moduli at `(r_lo, i_lo)`, `(r_lo, i_hi)`, `(r_hi, i_lo)`, `(r_hi, i_hi)`.
    pub fn corner_moduli(&self) -> [f64; 4] {
        [
            self.r_lo.hypot(self.i_lo),
            self.r_lo.hypot(self.i_hi),
            self.r_hi.hypot(self.i_lo),
            self.r_hi.hypot(self.i_hi),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBoxConfig {
    /// Random starts for the Rayleigh-quotient cross-check; 0 disables it.
    pub cross_check_starts: usize,
    pub cross_check_iters: usize,
    pub seed: u64,
}

impl Default for EigenBoxConfig {
    fn default() -> Self {
        Self {
            cross_check_starts: 0,
            cross_check_iters: 200,
            seed: 0,
        }
    }
}

/// Closed-form eigenvalue box from the midpoint/radius form.
///
/// With `sym(A) = (A + A^T)/2`, `C` the centre and `R` the radius:
/// the real parts lie in `[lmin(sym C) - lmax(sym R), lmax(sym C) + lmax(sym R)]`
/// and the imaginary parts in `[-i, i]` with
/// `i = lmax([[0, S], [S^T, 0]]) + lmax(sym R)`, `S` the skew part of `C`.
pub fn eigen_box_bounds(
    h: &IntervalMatrix,
    cfg: &EigenBoxConfig,
) -> Result<EigenBox, StabilityError> {
    let n = h.ensure_square()?;
    let mr = h.mid_rad();
    let (c_min, c_max) = spectral::symmetric_extremes(&spectral::sym_part(&mr.center));
    let (_, r_max) = spectral::symmetric_extremes(&spectral::sym_part(&mr.radius));
    let r_max = r_max.max(0.0);
    let skew = spectral::skew_part(&mr.center);
    let mut embed = DMatrix::zeros(2 * n, 2 * n);
    embed.view_mut((0, n), (n, n)).copy_from(&skew);
    embed.view_mut((n, 0), (n, n)).copy_from(&skew.transpose());
    let (_, s_max) = spectral::symmetric_extremes(&embed);
    let i_hi = s_max.max(0.0) + r_max;
    let closed = EigenBox {
        r_lo: c_min - r_max,
        r_hi: c_max + r_max,
        i_lo: -i_hi,
        i_hi,
    };
    if cfg.cross_check_starts > 0 {
        let rayleigh = rayleigh_box(h, cfg);
        if !closed.encloses(
            &rayleigh,
            1e-10 * (1.0 + closed.r_hi.abs().max(closed.r_lo.abs()) + i_hi),
        ) {
            return Err(StabilityError::CrossCheckFailed { closed, rayleigh });
        }
    }
    Ok(closed)
}

fn unit<R: Rng>(dim: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

fn signum0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Multi-start projected (sub)gradient ascent of `f` on the unit sphere.
/// Every evaluation is at a feasible point, so the result never exceeds the
/// true maximum.
fn sphere_max<F, G>(dim: usize, cfg: &EigenBoxConfig, seed_offset: u64, f: F, grad: G) -> f64
where
    F: Fn(&DVector<f64>) -> f64,
    G: Fn(&DVector<f64>) -> DVector<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ seed_offset);
    let mut best = f64::NEG_INFINITY;
    for start in 0..cfg.cross_check_starts {
        let mut x = if start < dim {
            // deterministic coordinate starts catch axis-aligned optima
            let mut e = DVector::zeros(dim);
            e[start] = 1.0;
            e
        } else {
            unit(dim, &mut rng)
        };
        let mut step = 0.5;
        let mut fx = f(&x);
        best = best.max(fx);
        for _ in 0..cfg.cross_check_iters {
            let g = grad(&x);
            let cand = &x + &g * step;
            let nrm = cand.norm();
            if nrm == 0.0 {
                break;
            }
            let cand = cand / nrm;
            let fc = f(&cand);
            if fc > fx {
                x = cand;
                fx = fc;
                best = best.max(fx);
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
    }
    best
}

/// The Rayleigh-quotient forms of the eigenvalue box, maximised numerically.
///
/// `r_lo = min x'Cx - |x|'R|x|`, `r_hi = max x'Cx + |x|'R|x|` over unit `x`,
/// `i_hi = max x1'(C - C')x2 + R o |x1 x2' - x2 x1'|` over unit `[x1; x2]`,
/// and `i_lo = -i_hi`.
pub fn rayleigh_box(h: &IntervalMatrix, cfg: &EigenBoxConfig) -> EigenBox {
    let n = h.dim();
    let mr = h.mid_rad();
    let c = &mr.center;
    let r = &mr.radius;
    let c_sym2 = c + c.transpose();
    let r_sym2 = r + r.transpose();
    let quad = |x: &DVector<f64>| x.dot(&(c * x));
    let abs_quad = |x: &DVector<f64>| {
        let a = x.abs();
        a.dot(&(r * &a))
    };
    let abs_grad = |x: &DVector<f64>| {
        let a = x.abs();
        let g = &r_sym2 * &a;
        DVector::from_fn(n, |i, _| signum0(x[i]) * g[i])
    };

    let r_hi = sphere_max(
        n,
        cfg,
        1,
        |x| quad(x) + abs_quad(x),
        |x| &c_sym2 * x + abs_grad(x),
    );
    let r_lo = -sphere_max(
        n,
        cfg,
        2,
        |x| -(quad(x) - abs_quad(x)),
        |x| -(&c_sym2 * x) + abs_grad(x),
    );

    let k = c - c.transpose();
    let split = |z: &DVector<f64>| (z.rows(0, n).into_owned(), z.rows(n, n).into_owned());
    let sign_matrix = |x1: &DVector<f64>, x2: &DVector<f64>| {
        DMatrix::from_fn(n, n, |i, j| {
            r[(i, j)] * signum0(x1[i] * x2[j] - x2[i] * x1[j])
        })
    };
    let imag = |z: &DVector<f64>| {
        let (x1, x2) = split(z);
        let mut spread = 0.0;
        for i in 0..n {
            for j in 0..n {
                spread += r[(i, j)] * (x1[i] * x2[j] - x2[i] * x1[j]).abs();
            }
        }
        x1.dot(&(&k * &x2)) + spread
    };
    let imag_grad = |z: &DVector<f64>| {
        let (x1, x2) = split(z);
        let e = sign_matrix(&x1, &x2);
        let m = &k + &e - e.transpose();
        let g1 = &m * &x2;
        let g2 = m.transpose() * &x1;
        let mut g = DVector::zeros(2 * n);
        g.rows_mut(0, n).copy_from(&g1);
        g.rows_mut(n, n).copy_from(&g2);
        g
    };
    let i_hi = sphere_max(2 * n, cfg, 3, imag, imag_grad).max(0.0);
    EigenBox {
        r_lo,
        r_hi,
        i_lo: -i_hi,
        i_hi,
    }
}

/// Strict corner-modulus test. The modulus is convex, so its maximum over
/// the rectangle is at a corner.
pub fn condeig_check(b: &EigenBox) -> StabilityVerdict {
    let corner_moduli = b.corner_moduli();
    let max = corner_moduli.iter().copied().fold(0.0, f64::max);
    let status = if max < 1.0 {
        Status::AsymptoticallyStable
    } else {
        Status::Inconclusive
    };
    StabilityVerdict::new(
        status,
        Criterion::EigenBox,
        Witness::EigenBox {
            eigen_box: *b,
            corner_moduli,
        },
    )
}

/// Eigenvalue box followed by the corner test.
pub fn eigen_box_test(
    h: &IntervalMatrix,
    cfg: &EigenBoxConfig,
) -> Result<StabilityVerdict, StabilityError> {
    Ok(condeig_check(&eigen_box_bounds(h, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalConfig {
    pub max_condition: f64,
}

impl Default for MarginalConfig {
    fn default() -> Self {
        Self {
            max_condition: 1e12,
        }
    }
}

/// Splits `m` as `[[M*, *], [0, 1]]` or `[[M*, 0], [*, 1]]` and returns `M*`.
fn reduce_block(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = m.nrows();
    if (m[(n - 1, n - 1)] - 1.0).abs() > BLOCK_TOL {
        return None;
    }
    let last_row_zero = (0..n - 1).all(|j| m[(n - 1, j)].abs() <= BLOCK_TOL);
    let last_col_zero = (0..n - 1).all(|i| m[(i, n - 1)].abs() <= BLOCK_TOL);
    if last_row_zero || last_col_zero {
        Some(m.view((0, 0), (n - 1, n - 1)).into_owned())
    } else {
        None
    }
}

/// `sum_j |m_ij| < 1` for every row, which bounds every Gershgorin disc
/// inside the open unit disc. For non-negative rows this is the usual
/// `sum_{j != i} m_ij < 1 - m_ii`.
fn strict_abs_rows(m: &DMatrix<f64>) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).map(|j| m[(i, j)].abs()).sum::<f64>() < 1.0)
}

/// Marginal stability through a caller-supplied similarity transform `t`.
///
/// Three routes are tried in order, keeping the first that succeeds:
/// non-negative members with the transformed upper bound in block form and
/// its reduced block passing the row test; the non-positive mirror on the
/// lower bound; and both transformed bounds in block form with the reduced
/// interval passing the eigenvalue-box test.
pub fn marginal_test(
    h: &IntervalMatrix,
    t: &DMatrix<f64>,
    cfg: &MarginalConfig,
) -> Result<StabilityVerdict, StabilityError> {
    let n = h.ensure_square()?;
    if t.shape() != (n, n) {
        return Err(StabilityError::TransformDimension {
            expected: n,
            got: t.nrows().max(t.ncols()),
        });
    }
    let sv = t.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if condition.is_nan() || condition > cfg.max_condition {
        return Err(StabilityError::IllConditionedTransform {
            condition,
            cap: cfg.max_condition,
        });
    }
    let t_inv = t
        .clone()
        .try_inverse()
        .ok_or(StabilityError::IllConditionedTransform {
            condition,
            cap: cfg.max_condition,
        })?;
    let lo_t = &t_inv * &h.lo * t;
    let hi_t = &t_inv * &h.hi * t;
    let red_lo = reduce_block(&lo_t);
    let red_hi = reduce_block(&hi_t);
    let mut failed = Vec::new();

    let success = |case, lo: &DMatrix<f64>, hi: &DMatrix<f64>| {
        StabilityVerdict::new(
            Status::Stable,
            Criterion::Marginal,
            Witness::MarginalReduction {
                case,
                reduced_lo: to_rows(lo),
                reduced_hi: to_rows(hi),
            },
        )
    };

    if h.first_negative_lower().is_none() {
        match &red_hi {
            None => failed.push(
                "nonneg: transformed upper bound is not in block form with unit corner".into(),
            ),
            Some(r) if strict_abs_rows(r) => return Ok(success(MarginalCase::Nonneg, r, r)),
            Some(_) => failed.push("nonneg: reduced upper bound fails the strict row test".into()),
        }
    } else {
        failed.push("nonneg: lower bound has a negative entry".to_string());
    }

    if h.first_positive_upper().is_none() {
        match &red_lo {
            None => failed.push(
                "nonpos: transformed lower bound is not in block form with unit corner".into(),
            ),
            Some(r) if strict_abs_rows(r) => return Ok(success(MarginalCase::Nonpos, r, r)),
            Some(_) => failed.push("nonpos: reduced lower bound fails the strict row test".into()),
        }
    } else {
        failed.push("nonpos: upper bound has a positive entry".to_string());
    }

    match (&red_lo, &red_hi) {
        (Some(a), Some(b)) => {
            let lo = a.zip_map(b, f64::min);
            let hi = a.zip_map(b, f64::max);
            let reduced = IntervalMatrix::new(lo.clone(), hi.clone())?;
            let v = eigen_box_test(&reduced, &EigenBoxConfig::default())?;
            if v.status == Status::AsymptoticallyStable {
                return Ok(success(MarginalCase::Interval, &lo, &hi));
            }
            failed.push("interval: reduced eigenvalue box reaches the unit circle".into());
        }
        _ => failed.push(
            "interval: both transformed bounds must be in block form with unit corner".into(),
        ),
    }

    Ok(StabilityVerdict::new(
        Status::Inconclusive,
        Criterion::Marginal,
        Witness::Requirements { failed },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalsifierConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub budget: VertexBudget,
    pub spectral: SpectralConfig,
}

impl Default for FalsifierConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            seed: 0,
            budget: VertexBudget::default(),
            spectral: SpectralConfig::default(),
        }
    }
}

/// RNG for sample `index`; each sample owns a stream so results do not
/// depend on scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Spectral radii of the vertices (or just `lo` and `hi` when the vertex
/// budget is exceeded) followed by `n_samples` random members.
pub struct SampledRadii {
    pub vertices: Vec<DMatrix<f64>>,
    pub radii: Vec<f64>,
}

impl SampledRadii {
    /// Member `idx` in the order of `radii`.
    pub fn member(&self, h: &IntervalMatrix, seed: u64, idx: usize) -> DMatrix<f64> {
        let nv = self.vertices.len();
        if idx < nv {
            self.vertices[idx].clone()
        } else {
            h.sample(&mut sample_rng(seed, (idx - nv) as u64))
        }
    }

    /// Largest radius with its index; the lowest index wins ties.
    pub fn max(&self) -> (usize, f64) {
        self.radii
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, br), (i, r)| {
                if r > br {
                    (i, r)
                } else {
                    (bi, br)
                }
            })
    }
}

pub fn sampled_radii(
    h: &IntervalMatrix,
    cfg: &FalsifierConfig,
) -> Result<SampledRadii, StabilityError> {
    h.ensure_square()?;
    let vertices: Vec<DMatrix<f64>> = match h.vertices(cfg.budget) {
        Ok(v) => v.collect(),
        Err(LinalgError::VertexBudgetExceeded { .. }) => vec![h.lo.clone(), h.hi.clone()],
        Err(e) => return Err(e.into()),
    };
    let mut out = SampledRadii {
        vertices,
        radii: Vec::new(),
    };
    out.radii = (0..out.vertices.len() + cfg.n_samples)
        .into_par_iter()
        .map(|idx| spectral::spectral_radius_with(&out.member(h, cfg.seed, idx), cfg.spectral))
        .collect();
    Ok(out)
}

/// Searches vertices and random members for a spectral radius above
/// `1 + FALSIFY_TOL`. Reports the member with the largest radius (lowest
/// index on ties: vertices first, then samples in order).
pub fn sampled_falsifier(
    h: &IntervalMatrix,
    cfg: &FalsifierConfig,
) -> Result<StabilityVerdict, StabilityError> {
    let sampled = sampled_radii(h, cfg)?;
    let (worst, max_radius) = sampled.max();
    if max_radius > 1.0 + FALSIFY_TOL {
        Ok(StabilityVerdict::new(
            Status::Falsified,
            Criterion::SampledFalsifier,
            Witness::UnstableMatrix {
                matrix: to_rows(&sampled.member(h, cfg.seed, worst)),
                spectral_radius: max_radius,
            },
        ))
    } else {
        Ok(StabilityVerdict::new(
            Status::Inconclusive,
            Criterion::SampledFalsifier,
            Witness::SampledRadii {
                vertices: sampled.vertices.len(),
                samples: cfg.n_samples,
                max_spectral_radius: max_radius,
            },
        ))
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub transform: Option<DMatrix<f64>>,
    pub eigen_box: EigenBoxConfig,
    pub marginal: MarginalConfig,
    pub falsifier: FalsifierConfig,
}

/// Runs the tests in order and returns the first decisive verdict:
/// non-negative rows, non-positive rows, eigenvalue box, marginal (when a
/// transform is given), sampled falsifier. Otherwise `Inconclusive` with
/// every sub-report attached.
pub fn analyze(
    h: &IntervalMatrix,
    opts: &AnalyzeOptions,
) -> Result<StabilityVerdict, StabilityError> {
    let mut reports = vec![gershgorin_nonneg_test(h)?, gershgorin_nonpos_test(h)?];
    reports.push(eigen_box_test(h, &opts.eigen_box)?);
    if let Some(t) = &opts.transform {
        reports.push(marginal_test(h, t, &opts.marginal)?);
    }
    if let Some(v) = reports.iter().find(|v| v.status.is_decisive()) {
        return Ok(v.clone());
    }
    let f = sampled_falsifier(h, &opts.falsifier)?;
    if f.status.is_decisive() {
        return Ok(f);
    }
    reports.push(f);
    Ok(StabilityVerdict::new(
        Status::Inconclusive,
        Criterion::Analyze,
        Witness::SubReports(reports),
    ))
}
