//! Level-wise simulation of linear stationary fuzzy difference inclusions
//! `x(k+1) in [H]^a x(k)`.
//!
//! For non-negative systems the attainable set at each level is bounded
//! exactly by the endpoint recursions `lo^k x0.lo` and `hi^k x0.hi`. Sign
//! indefinite systems only get the box over-approximation from
//! [`interval_propagate`], or Monte Carlo trajectories.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fuzzy_num::{validate_nested, FuzzyError, FuzzyNumber, FuzzyVector};
use crate::interval::Interval;
use crate::interval_linalg::{mat_vec, sample_box, IntervalMatrix, IntervalVector, LinalgError};
use crate::stability::sample_rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("H must be {n}x{n}; row {row} has {len} entries")]
    RaggedMatrix { n: usize, row: usize, len: usize },
    #[error("x0 has {got} components, expected {expected}")]
    StateDimension { expected: usize, got: usize },
    #[error("invalid alpha grid: {0}")]
    AlphaGrid(String),
    #[error(
        "exact envelope needs lo(H) >= 0 at alpha {alpha}, but H[{row}][{col}] has lower bound {value}; \
         use Monte Carlo trajectories or the interval over-approximation"
    )]
    NegativeMatrixLowerBound {
        alpha: f64,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error(
        "exact envelope needs lo(x0) >= 0 at alpha {alpha}, but x0[{index}] has lower bound {value}; \
         use Monte Carlo trajectories or the interval over-approximation"
    )]
    NegativeStateLowerBound {
        alpha: f64,
        index: usize,
        value: f64,
    },
}

impl SimError {
    /// Sign conditions of the exact envelope, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            SimError::NegativeMatrixLowerBound { .. } | SimError::NegativeStateLowerBound { .. }
        )
    }
}

/// `{0, 0.1, ..., 1}`.
pub fn default_alphas() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Sorted, unique, inside `[0, 1]`, and containing both 0 and 1.
pub fn check_alpha_grid(alphas: &[f64]) -> Result<(), SimError> {
    if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(SimError::AlphaGrid("levels must lie in [0, 1]".into()));
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::AlphaGrid(
            "levels must be strictly increasing".into(),
        ));
    }
    if alphas.first() != Some(&0.0) || alphas.last() != Some(&1.0) {
        return Err(SimError::AlphaGrid("levels must include 0 and 1".into()));
    }
    Ok(())
}

/// `x(k+1) = H x(k)` with fuzzy `H` and fuzzy initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    n: usize,
    h: Vec<Vec<FuzzyNumber>>,
    x0: FuzzyVector,
    alphas: Vec<f64>,
}

impl FuzzySystem {
    pub fn new(
        h: Vec<Vec<FuzzyNumber>>,
        x0: FuzzyVector,
        alphas: Option<Vec<f64>>,
    ) -> Result<Self, SimError> {
        let n = h.len();
        for (row, r) in h.iter().enumerate() {
            if r.len() != n {
                return Err(SimError::RaggedMatrix {
                    n,
                    row,
                    len: r.len(),
                });
            }
        }
        if x0.len() != n {
            return Err(SimError::StateDimension {
                expected: n,
                got: x0.len(),
            });
        }
        let alphas = alphas.unwrap_or_else(default_alphas);
        check_alpha_grid(&alphas)?;
        Ok(Self { n, h, x0, alphas })
    }

    pub fn crisp(h: &DMatrix<f64>, x0: &DVector<f64>) -> Result<Self, SimError> {
        let rows = (0..h.nrows())
            .map(|i| {
                (0..h.ncols())
                    .map(|j| FuzzyNumber::crisp(h[(i, j)]))
                    .collect()
            })
            .collect();
        let x0 = FuzzyVector::new(x0.iter().map(|&v| FuzzyNumber::crisp(v)).collect());
        Self::new(rows, x0, None)
    }

    pub fn with_alphas(mut self, alphas: Vec<f64>) -> Result<Self, SimError> {
        check_alpha_grid(&alphas)?;
        self.alphas = alphas;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[Vec<FuzzyNumber>] {
        &self.h
    }

    pub fn x0(&self) -> &FuzzyVector {
        &self.x0
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn x0_cut(&self, alpha: f64) -> Result<IntervalVector, SimError> {
        Ok(self.x0.cut(alpha)?)
    }

    /// Sign conditions of the exact envelope at `alpha`.
    pub fn check_envelope_preconditions(
        &self,
        alpha: f64,
    ) -> Result<(IntervalMatrix, IntervalVector), SimError> {
        let m = level_matrix(self, alpha)?;
        if let Some((row, col, value)) = m.first_negative_lower() {
            return Err(SimError::NegativeMatrixLowerBound {
                alpha,
                row,
                col,
                value,
            });
        }
        let x = self.x0_cut(alpha)?;
        if let Some(index) = (0..x.len()).find(|&i| x.lo[i] < 0.0) {
            return Err(SimError::NegativeStateLowerBound {
                alpha,
                index,
                value: x.lo[index],
            });
        }
        Ok((m, x))
    }
}

/// Entrywise alpha-cut of `H`.
pub fn level_matrix(sys: &FuzzySystem, alpha: f64) -> Result<IntervalMatrix, SimError> {
    let n = sys.n;
    let mut lo = DMatrix::zeros(n, n);
    let mut hi = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = sys.h[i][j].cut(alpha)?;
            lo[(i, j)] = c.lo;
            hi[(i, j)] = c.hi;
        }
    }
    Ok(IntervalMatrix::new(lo, hi)?)
}

/// Boxes `steps[k]` for `k = 0..=K` at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTrajectory {
    pub alpha: f64,
    pub steps: Vec<IntervalVector>,
}

/// Exact attainable-set bounds for a non-negative system:
/// `steps[k] = [lo^k x0.lo, hi^k x0.hi]`.
pub fn envelope_propagate(
    sys: &FuzzySystem,
    alpha: f64,
    k: usize,
) -> Result<EnvelopeTrajectory, SimError> {
    let (m, x) = sys.check_envelope_preconditions(alpha)?;
    let mut steps = Vec::with_capacity(k + 1);
    steps.push(x);
    for _ in 0..k {
        let prev = steps.last().expect("non-empty");
        let next = IntervalVector::new(mat_vec(&m.lo, &prev.lo), mat_vec(&m.hi, &prev.hi))?;
        steps.push(next);
    }
    Ok(EnvelopeTrajectory { alpha, steps })
}

/// Box over-approximation for any signs: each step is the exact box of
/// `{U z : U in [H]^a, z in previous box}`. Wrapping makes it grow with k.
pub fn interval_propagate(
    sys: &FuzzySystem,
    alpha: f64,
    k: usize,
) -> Result<EnvelopeTrajectory, SimError> {
    let m = level_matrix(sys, alpha)?;
    let mut steps = vec![sys.x0_cut(alpha)?];
    for _ in 0..k {
        let next = m.matvec(steps.last().expect("non-empty"))?;
        steps.push(next);
    }
    Ok(EnvelopeTrajectory { alpha, steps })
}

/// Envelopes for every grid level, in grid order.
pub fn envelopes(sys: &FuzzySystem, k: usize) -> Result<Vec<EnvelopeTrajectory>, SimError> {
    sys.alphas
        .par_iter()
        .map(|&a| envelope_propagate(sys, a, k))
        .collect()
}

/// Fuzzy attainable sets: at each step, the per-level boxes stacked into a
/// fuzzy vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyAttainable {
    pub envelopes: Vec<EnvelopeTrajectory>,
    pub steps: Vec<FuzzyVector>,
}

pub fn assemble_fuzzy_attainable(sys: &FuzzySystem, k: usize) -> Result<FuzzyAttainable, SimError> {
    let envelopes = envelopes(sys, k)?;
    let steps = (0..=k)
        .map(|step| {
            let levels: Vec<(f64, IntervalVector)> = envelopes
                .iter()
                .map(|e| (e.alpha, e.steps[step].clone()))
                .collect();
            validate_nested(&levels)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FuzzyAttainable { envelopes, steps })
}

/// Transition envelopes `[lo^k, hi^k]` for `k = 0..=K`.
pub fn transition_envelope(
    sys: &FuzzySystem,
    alpha: f64,
    k: usize,
) -> Result<Vec<IntervalMatrix>, SimError> {
    let (m, _) = sys.check_envelope_preconditions(alpha)?;
    let mut out = Vec::with_capacity(k + 1);
    out.push(IntervalMatrix::crisp(DMatrix::identity(sys.n, sys.n)));
    for _ in 0..k {
        let prev = out.last().expect("non-empty");
        let next = IntervalMatrix::new(
            crate::interval_linalg::mat_mul(&m.lo, &prev.lo),
            crate::interval_linalg::mat_mul(&m.hi, &prev.hi),
        )?;
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum McMode {
    /// One member matrix per trajectory.
    Constant,
    /// A fresh member matrix at every step.
    Timevarying,
}

/// `[x0, U x0, U^2 x0, ...]` up to step `k`.
pub fn simulate_crisp(u: &DMatrix<f64>, x0: &DVector<f64>, k: usize) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(x0.clone());
    for _ in 0..k {
        let next = mat_vec(u, out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

/// Random solutions of the inclusion at level `alpha`. Run `j` draws from
/// its own stream of `seed`, so the output does not depend on threading.
pub fn mc_trajectories(
    sys: &FuzzySystem,
    alpha: f64,
    k: usize,
    n: usize,
    seed: u64,
    mode: McMode,
) -> Result<Vec<Vec<DVector<f64>>>, SimError> {
    let m = level_matrix(sys, alpha)?;
    let x = sys.x0_cut(alpha)?;
    Ok((0..n)
        .into_par_iter()
        .map(|j| mc_run(&m, &x, k, seed, j as u64, mode))
        .collect())
}

/// One Monte Carlo run; exposed so callers can mix levels per run.
pub fn mc_run(
    m: &IntervalMatrix,
    x0: &IntervalVector,
    k: usize,
    seed: u64,
    run: u64,
    mode: McMode,
) -> Vec<DVector<f64>> {
    let mut rng = sample_rng(seed, run);
    let start = sample_box(x0, &mut rng);
    match mode {
        McMode::Constant => simulate_crisp(&m.sample(&mut rng), &start, k),
        McMode::Timevarying => {
            let mut out = Vec::with_capacity(k + 1);
            out.push(start);
            for _ in 0..k {
                let u = m.sample(&mut rng);
                let next = mat_vec(&u, out.last().expect("non-empty"));
                out.push(next);
            }
            out
        }
    }
}

/// Outcome of checking trajectories against an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub trajectories: usize,
    pub states_checked: usize,
    pub inside: usize,
    pub outside: usize,
    /// Largest distance by which any coordinate left its interval.
    pub max_violation: f64,
}

impl ContainmentReport {
    pub fn merge(self, other: ContainmentReport) -> ContainmentReport {
        ContainmentReport {
            trajectories: self.trajectories + other.trajectories,
            states_checked: self.states_checked + other.states_checked,
            inside: self.inside + other.inside,
            outside: self.outside + other.outside,
            max_violation: self.max_violation.max(other.max_violation),
        }
    }
}

/// Counts states outside the envelope by more than `tol`.
pub fn containment(
    env: &EnvelopeTrajectory,
    runs: &[Vec<DVector<f64>>],
    tol: f64,
) -> ContainmentReport {
    let mut r = ContainmentReport {
        trajectories: runs.len(),
        ..Default::default()
    };
    for run in runs {
        for (state, bx) in run.iter().zip(&env.steps) {
            r.states_checked += 1;
            let mut worst: f64 = 0.0;
            for i in 0..state.len() {
                worst = worst.max(bx.lo[i] - state[i]).max(state[i] - bx.hi[i]);
            }
            r.max_violation = r.max_violation.max(worst);
            if worst > tol {
                r.outside += 1;
            } else {
                r.inside += 1;
            }
        }
    }
    r
}

/// Shortest decimal form of `v` rounded to 12 significant digits.
pub fn fmt_sig12(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

/// Envelope CSV with header `k,alpha,i,lo,hi`, ordered by step, then level,
/// then coordinate. Coordinates are numbered from 1.
pub fn write_envelope_csv<W: Write + ?Sized>(
    w: &mut W,
    envs: &[EnvelopeTrajectory],
) -> io::Result<()> {
    writeln!(w, "k,alpha,i,lo,hi")?;
    let horizon = envs.iter().map(|e| e.steps.len()).max().unwrap_or(0);
    for k in 0..horizon {
        for e in envs {
            if let Some(b) = e.steps.get(k) {
                for i in 0..b.len() {
                    writeln!(
                        w,
                        "{},{},{},{},{}",
                        k,
                        fmt_sig12(e.alpha),
                        i + 1,
                        fmt_sig12(b.lo[i]),
                        fmt_sig12(b.hi[i])
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Monte Carlo CSV with header `run,k,i,value`; coordinates numbered from 1.
pub fn write_mc_csv<W: Write + ?Sized>(w: &mut W, runs: &[Vec<DVector<f64>>]) -> io::Result<()> {
    writeln!(w, "run,k,i,value")?;
    for (r, run) in runs.iter().enumerate() {
        for (k, state) in run.iter().enumerate() {
            for (i, v) in state.iter().enumerate() {
                writeln!(w, "{},{},{},{}", r, k, i + 1, fmt_sig12(*v))?;
            }
        }
    }
    Ok(())
}

/// Per-level widths of the last box of each envelope.
pub fn final_widths(envs: &[EnvelopeTrajectory]) -> Vec<(f64, Vec<f64>)> {
    envs.iter()
        .map(|e| {
            let last = e.steps.last().expect("non-empty");
            (
                e.alpha,
                last.intervals().map(|c: Interval| c.width()).collect(),
            )
        })
        .collect()
}
