//! Fuzzy numbers represented by a finite stack of nested alpha-cuts.
//!
//! A [`FuzzyNumber`] stores its cuts at a strictly increasing grid of alpha
//! levels running from `0` (the support) to `1` (the core). Between listed
//! levels the cut endpoints are linear in alpha, so every cut, sum and scalar
//! multiple is exact. Triangular numbers ([`Tfn`]) are the two-level case.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalError, ORDER_TOL};
use crate::interval_linalg::IntervalVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuzzyError {
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("a fuzzy number needs at least the levels 0 and 1")]
    TooFewLevels,
    #[error("first level must be alpha = 0, found {0}")]
    FirstAlphaNotZero(f64),
    #[error("last level must be alpha = 1, found {0}")]
    LastAlphaNotOne(f64),
    #[error("alpha levels must be strictly increasing: {prev} followed by {next}")]
    AlphaNotIncreasing { prev: f64, next: f64 },
    #[error("cut at alpha {upper_alpha} is not contained in the cut at alpha {lower_alpha}")]
    NotNested { lower_alpha: f64, upper_alpha: f64 },
    #[error(
        "stacking violation: box at alpha {upper_alpha} is not inside the box at alpha {lower_alpha} (coordinate {coordinate})"
    )]
    StackingViolation {
        lower_alpha: f64,
        upper_alpha: f64,
        coordinate: usize,
    },
    #[error("triangular number must satisfy l <= c <= r, got {{{l}, {c}, {r}}}")]
    UnorderedTriple { l: f64, c: f64, r: f64 },
    #[error("approximate product needs non-negative supports, got left endpoints {a} and {b}")]
    NegativeSupport { a: f64, b: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

fn check_alpha(alpha: f64) -> Result<(), FuzzyError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(FuzzyError::AlphaOutOfRange(alpha))
    }
}

/// Triangular fuzzy number `{l, c, r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tfn {
    pub l: f64,
    pub c: f64,
    pub r: f64,
}

impl Tfn {
    pub fn new(l: f64, c: f64, r: f64) -> Result<Self, FuzzyError> {
        if !(l.is_finite() && c.is_finite() && r.is_finite()) {
            return Err(IntervalError::NotFinite { lo: l, hi: r }.into());
        }
        if l <= c && c <= r {
            Ok(Self { l, c, r })
        } else {
            Err(FuzzyError::UnorderedTriple { l, c, r })
        }
    }

    pub fn crisp(v: f64) -> Self {
        Self { l: v, c: v, r: v }
    }

    /// The alpha-cut `[c - (1-a)(c-l), c + (1-a)(r-c)]`.
    ///
    /// Levels 0 and 1 return `[l, r]` and `[c, c]` exactly.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        check_alpha(alpha)?;
        Ok(Interval {
            lo: lerp_up(self.l, self.c, alpha),
            hi: lerp_down(self.r, self.c, alpha),
        })
    }

    /// Approximate product `{a_l b_l, a_c b_c, a_r b_r}`, defined only for
    /// non-negative supports.
    ///
    /// The true product is not triangular; this agrees with it at levels 0
    /// and 1 and is linear in between.
    pub fn mul_approx(&self, other: &Tfn) -> Result<Tfn, FuzzyError> {
        if self.l < 0.0 || other.l < 0.0 {
            return Err(FuzzyError::NegativeSupport {
                a: self.l,
                b: other.l,
            });
        }
        Ok(Tfn {
            l: self.l * other.l,
            c: self.c * other.c,
            r: self.r * other.r,
        })
    }

    pub fn to_fuzzy(self) -> FuzzyNumber {
        FuzzyNumber::from(self)
    }
}

/// `from + t (to - from)` for `from <= to`, clamped so it is monotone in `t`
/// and exact at `t = 0` and `t = 1`.
fn lerp_up(from: f64, to: f64, t: f64) -> f64 {
    if t <= 0.0 {
        from
    } else if t >= 1.0 {
        to
    } else {
        (from + t * (to - from)).clamp(from, to)
    }
}

/// Mirror of [`lerp_up`] for a decreasing endpoint (`from >= to`).
fn lerp_down(from: f64, to: f64, t: f64) -> f64 {
    if t <= 0.0 {
        from
    } else if t >= 1.0 {
        to
    } else {
        (from - t * (from - to)).clamp(to, from)
    }
}

/// One entry of the level stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub alpha: f64,
    pub cut: Interval,
}

/// A fuzzy number given by nested cuts on a finite alpha grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FuzzyJson", into = "FuzzyJson")]
pub struct FuzzyNumber {
    levels: Vec<Level>,
}

impl From<Tfn> for FuzzyNumber {
    fn from(t: Tfn) -> Self {
        FuzzyNumber {
            levels: vec![
                Level {
                    alpha: 0.0,
                    cut: Interval { lo: t.l, hi: t.r },
                },
                Level {
                    alpha: 1.0,
                    cut: Interval::point(t.c),
                },
            ],
        }
    }
}

impl FuzzyNumber {
    /// Validates and stores a level stack.
    pub fn from_levels<I>(levels: I) -> Result<Self, FuzzyError>
    where
        I: IntoIterator<Item = (f64, Interval)>,
    {
        let levels: Vec<Level> = levels
            .into_iter()
            .map(|(alpha, cut)| Level { alpha, cut })
            .collect();
        if levels.len() < 2 {
            return Err(FuzzyError::TooFewLevels);
        }
        for lvl in &levels {
            check_alpha(lvl.alpha)?;
            Interval::new(lvl.cut.lo, lvl.cut.hi)?;
        }
        if levels[0].alpha != 0.0 {
            return Err(FuzzyError::FirstAlphaNotZero(levels[0].alpha));
        }
        let last = levels[levels.len() - 1].alpha;
        if last != 1.0 {
            return Err(FuzzyError::LastAlphaNotOne(last));
        }
        for w in levels.windows(2) {
            if w[1].alpha <= w[0].alpha {
                return Err(FuzzyError::AlphaNotIncreasing {
                    prev: w[0].alpha,
                    next: w[1].alpha,
                });
            }
            if !w[0].cut.encloses_with_tol(&w[1].cut, ORDER_TOL) {
                return Err(FuzzyError::NotNested {
                    lower_alpha: w[0].alpha,
                    upper_alpha: w[1].alpha,
                });
            }
        }
        Ok(Self { levels })
    }

    pub fn crisp(v: f64) -> Self {
        Tfn::crisp(v).into()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn alphas(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.alpha)
    }

    pub fn support(&self) -> Interval {
        self.levels[0].cut
    }

    pub fn core(&self) -> Interval {
        self.levels[self.levels.len() - 1].cut
    }

    pub fn is_crisp(&self) -> bool {
        let s = self.support();
        s.lo == s.hi
    }

    /// Returns the triple when this number is triangular.
    pub fn as_tfn(&self) -> Option<Tfn> {
        match self.levels.as_slice() {
            [s, c] if c.cut.lo == c.cut.hi => Some(Tfn {
                l: s.cut.lo,
                c: c.cut.lo,
                r: s.cut.hi,
            }),
            _ => None,
        }
    }

    /// The alpha-cut, interpolated linearly between grid levels.
    pub fn cut(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        check_alpha(alpha)?;
        // first level with level.alpha >= alpha
        let idx = self.levels.partition_point(|l| l.alpha < alpha);
        let upper = self.levels[idx];
        if upper.alpha == alpha || idx == 0 {
            return Ok(upper.cut);
        }
        let lower = self.levels[idx - 1];
        let t = (alpha - lower.alpha) / (upper.alpha - lower.alpha);
        Ok(Interval {
            lo: lerp_up(lower.cut.lo, upper.cut.lo.max(lower.cut.lo), t),
            hi: lerp_down(lower.cut.hi, upper.cut.hi.min(lower.cut.hi), t),
        })
    }

    /// Membership grade of `p`: the largest alpha whose cut contains `p`,
    /// or 0 outside the support.
    pub fn membership(&self, p: f64) -> f64 {
        let support = self.support();
        if !support.contains(p) {
            return 0.0;
        }
        // The left endpoint is nondecreasing in alpha, so {alpha : lo(alpha) <= p}
        // is an initial segment [0, a*]; likewise for the right endpoint.
        let mut left_sup: f64 = 0.0;
        let mut right_sup: f64 = 0.0;
        for w in self.levels.windows(2) {
            let (a0, a1) = (w[0].alpha, w[1].alpha);
            let (l0, l1) = (w[0].cut.lo, w[1].cut.lo);
            if l1 <= p {
                left_sup = left_sup.max(a1);
            } else if l0 <= p {
                left_sup = left_sup.max(a0 + (p - l0) / (l1 - l0) * (a1 - a0));
            }
            let (h0, h1) = (w[0].cut.hi, w[1].cut.hi);
            if h1 >= p {
                right_sup = right_sup.max(a1);
            } else if h0 >= p {
                right_sup = right_sup.max(a0 + (h0 - p) / (h0 - h1) * (a1 - a0));
            }
        }
        left_sup.min(right_sup).clamp(0.0, 1.0)
    }

    /// Points where the membership function may change slope: every cut
    /// endpoint, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .levels
            .iter()
            .flat_map(|l| [l.cut.lo, l.cut.hi])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Re-expresses this number on `alphas`, which must start at 0, end at 1
    /// and be strictly increasing.
    pub fn resample(&self, alphas: &[f64]) -> Result<Self, FuzzyError> {
        let levels = alphas
            .iter()
            .map(|&a| self.cut(a).map(|c| (a, c)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_levels(levels)
    }

    /// Scalar multiple `beta * self`; endpoints swap when `beta < 0`.
    pub fn scale(&self, beta: f64) -> Self {
        Self {
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    alpha: l.alpha,
                    cut: l.cut.scale(beta),
                })
                .collect(),
        }
    }

    /// Level-wise Minkowski sum on the merged alpha grid.
    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        let grid = merged_alphas(self, other);
        let levels = grid
            .into_iter()
            .map(|alpha| {
                // grid alphas are in [0, 1] by construction
                let a = self.cut(alpha).expect("alpha in range");
                let b = other.cut(alpha).expect("alpha in range");
                Level { alpha, cut: a + b }
            })
            .collect();
        FuzzyNumber { levels }
    }
}

impl Add for &FuzzyNumber {
    type Output = FuzzyNumber;

    fn add(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        FuzzyNumber::add(self, rhs)
    }
}

/// Union of the two alpha grids.
pub fn merged_alphas(a: &FuzzyNumber, b: &FuzzyNumber) -> Vec<f64> {
    let mut grid: Vec<f64> = a.alphas().chain(b.alphas()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// JSON form: `{"tfn":[l,c,r]}` or `{"levels":[[alpha,lo,hi],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FuzzyJson {
    Tfn([f64; 3]),
    Levels(Vec<[f64; 3]>),
}

impl TryFrom<FuzzyJson> for FuzzyNumber {
    type Error = FuzzyError;

    fn try_from(j: FuzzyJson) -> Result<Self, FuzzyError> {
        match j {
            FuzzyJson::Tfn([l, c, r]) => Ok(Tfn::new(l, c, r)?.into()),
            FuzzyJson::Levels(ls) => {
                FuzzyNumber::from_levels(ls.into_iter().map(|[a, lo, hi]| (a, Interval { lo, hi })))
            }
        }
    }
}

impl From<FuzzyNumber> for FuzzyJson {
    fn from(x: FuzzyNumber) -> Self {
        match x.as_tfn() {
            Some(t) => FuzzyJson::Tfn([t.l, t.c, t.r]),
            None => FuzzyJson::Levels(
                x.levels
                    .iter()
                    .map(|l| [l.alpha, l.cut.lo, l.cut.hi])
                    .collect(),
            ),
        }
    }
}

/// A vector of fuzzy numbers; its alpha-cut is the product box of the
/// component cuts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FuzzyVector {
    pub components: Vec<FuzzyNumber>,
}

impl FuzzyVector {
    pub fn new(components: Vec<FuzzyNumber>) -> Self {
        Self { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn cut(&self, alpha: f64) -> Result<IntervalVector, FuzzyError> {
        let cuts = self
            .components
            .iter()
            .map(|c| c.cut(alpha))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntervalVector::from_intervals(&cuts))
    }
}

/// Stacks a finite family of boxes into a fuzzy vector.
///
/// The family must be indexed by strictly increasing alphas from 0 to 1 and
/// the boxes must shrink (weakly) as alpha grows. The intersection condition
/// for increasing sequences holds trivially on a finite grid.
pub fn validate_nested(levels: &[(f64, IntervalVector)]) -> Result<FuzzyVector, FuzzyError> {
    let Some((_, first)) = levels.first() else {
        return Err(FuzzyError::TooFewLevels);
    };
    let dim = first.len();
    for (alpha, b) in levels {
        check_alpha(*alpha)?;
        if b.len() != dim {
            return Err(FuzzyError::DimensionMismatch(dim, b.len()));
        }
    }
    for w in levels.windows(2) {
        let (a0, b0) = (&w[0].0, &w[0].1);
        let (a1, b1) = (&w[1].0, &w[1].1);
        if a1 <= a0 {
            return Err(FuzzyError::AlphaNotIncreasing {
                prev: *a0,
                next: *a1,
            });
        }
        for i in 0..dim {
            if !b0.get(i).encloses_with_tol(&b1.get(i), ORDER_TOL) {
                return Err(FuzzyError::StackingViolation {
                    lower_alpha: *a0,
                    upper_alpha: *a1,
                    coordinate: i,
                });
            }
        }
    }
    let components = (0..dim)
        .map(|i| FuzzyNumber::from_levels(levels.iter().map(|(a, b)| (*a, b.get(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FuzzyVector { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tfn(l: f64, c: f64, r: f64) -> FuzzyNumber {
        Tfn::new(l, c, r).unwrap().into()
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn tfn_cuts() {
        let t = Tfn::new(2.0, 4.0, 6.0).unwrap();
        assert_eq!(t.alpha_cut(0.0).unwrap(), iv(2.0, 6.0));
        assert_eq!(t.alpha_cut(1.0).unwrap(), iv(4.0, 4.0));
        assert_eq!(t.alpha_cut(0.5).unwrap(), iv(3.0, 5.0));
        assert!(matches!(
            t.alpha_cut(1.5),
            Err(FuzzyError::AlphaOutOfRange(_))
        ));
        assert!(t.alpha_cut(-0.1).is_err());
    }

    #[test]
    fn tfn_rejects_unordered() {
        assert!(Tfn::new(3.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn membership_examples() {
        assert_eq!(tfn(2.0, 3.0, 4.0).membership(3.0), 1.0);
        assert_eq!(tfn(2.0, 3.0, 4.0).membership(2.0), 0.0);
        assert_eq!(tfn(2.0, 3.0, 4.0).membership(7.0), 0.0);
        let m = tfn(0.0, 3.0, 8.0).membership(4.0);
        assert!((m - 0.8).abs() < 1e-15);
    }

    #[test]
    fn membership_on_plateau_takes_top_level() {
        // trapezoid: flat core [1, 2]
        let x = FuzzyNumber::from_levels([(0.0, iv(0.0, 3.0)), (1.0, iv(1.0, 2.0))]).unwrap();
        assert_eq!(x.membership(1.5), 1.0);
        // vertical left edge between levels 0.5 and 1
        let y = FuzzyNumber::from_levels([
            (0.0, iv(0.0, 4.0)),
            (0.5, iv(1.0, 3.0)),
            (1.0, iv(1.0, 2.0)),
        ])
        .unwrap();
        assert_eq!(y.membership(1.0), 1.0);
        assert!((y.membership(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sum_examples() {
        let s = &tfn(2.0, 3.0, 4.0) + &tfn(3.5, 4.5, 6.5);
        assert_eq!(s.as_tfn().unwrap(), Tfn::new(5.5, 7.5, 10.5).unwrap());
        let x = tfn(1.0, 2.0, 5.0);
        assert_eq!(&x + &FuzzyNumber::crisp(0.0), x);
        let sym = &tfn(-1.0, 0.0, 1.0) + &tfn(-1.0, 0.0, 1.0);
        assert_eq!(sym.as_tfn().unwrap(), Tfn::new(-2.0, 0.0, 2.0).unwrap());
    }

    #[test]
    fn sum_merges_grids() {
        let a = tfn(0.0, 1.0, 2.0);
        let b = FuzzyNumber::from_levels([
            (0.0, iv(0.0, 4.0)),
            (0.5, iv(1.0, 3.0)),
            (1.0, iv(2.0, 2.0)),
        ])
        .unwrap();
        let s = &a + &b;
        assert_eq!(s.alphas().collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert_eq!(s.cut(0.5).unwrap(), iv(1.5, 4.5));
    }

    #[test]
    fn scale_examples() {
        let x = tfn(2.0, 3.0, 4.0);
        assert_eq!(
            x.scale(2.0).as_tfn().unwrap(),
            Tfn::new(4.0, 6.0, 8.0).unwrap()
        );
        assert_eq!(x.scale(0.0).as_tfn().unwrap(), Tfn::crisp(0.0));
        let neg = x.scale(-1.0);
        assert_eq!(neg.as_tfn().unwrap(), Tfn::new(-4.0, -3.0, -2.0).unwrap());
        // brute force: image of sampled support points under p -> -p
        for k in 0..=100 {
            let p = 2.0 + 2.0 * k as f64 / 100.0;
            let m = x.membership(p);
            assert!((neg.membership(-p) - m).abs() < 1e-12);
        }
    }

    #[test]
    fn approximate_product() {
        let a = Tfn::new(1.0, 2.0, 3.0).unwrap();
        let b = Tfn::new(0.0, 1.0, 2.0).unwrap();
        assert_eq!(a.mul_approx(&b).unwrap(), Tfn::new(0.0, 2.0, 6.0).unwrap());
        assert_eq!(Tfn::crisp(1.0).mul_approx(&b).unwrap(), b);
        let sq = b.mul_approx(&b).unwrap();
        assert_eq!(sq, Tfn::new(0.0, 1.0, 4.0).unwrap());
        // exact level-wise product of b with itself, compared with the approximation
        for k in 0..=20 {
            let alpha = k as f64 / 20.0;
            let cut = b.alpha_cut(alpha).unwrap();
            let exact = cut * cut;
            let approx = sq.alpha_cut(alpha).unwrap();
            if k == 0 || k == 20 {
                assert!((exact.lo - approx.lo).abs() < 1e-12);
                assert!((exact.hi - approx.hi).abs() < 1e-12);
            } else {
                // both endpoints of the exact product are convex in alpha,
                // so the chord lies above them
                assert!(approx.lo >= exact.lo - 1e-12 && approx.hi >= exact.hi - 1e-12);
                assert!(!approx.encloses(&exact));
            }
        }
        let neg = Tfn::new(-1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            neg.mul_approx(&b),
            Err(FuzzyError::NegativeSupport { .. })
        ));
    }

    #[test]
    fn from_levels_validation() {
        assert!(FuzzyNumber::from_levels([(0.0, iv(0.0, 4.0)), (1.0, iv(1.0, 3.0))]).is_ok());
        assert!(matches!(
            FuzzyNumber::from_levels([(0.0, iv(1.0, 3.0)), (1.0, iv(0.0, 4.0))]),
            Err(FuzzyError::NotNested {
                lower_alpha: 0.0,
                upper_alpha: 1.0
            })
        ));
        assert!(matches!(
            FuzzyNumber::from_levels([(0.1, iv(0.0, 4.0)), (1.0, iv(1.0, 3.0))]),
            Err(FuzzyError::FirstAlphaNotZero(_))
        ));
        assert!(matches!(
            FuzzyNumber::from_levels([(0.0, iv(0.0, 4.0)), (0.9, iv(1.0, 3.0))]),
            Err(FuzzyError::LastAlphaNotOne(_))
        ));
        assert!(matches!(
            FuzzyNumber::from_levels([
                (0.0, iv(0.0, 4.0)),
                (0.5, iv(1.0, 3.0)),
                (0.5, iv(1.0, 3.0)),
                (1.0, iv(1.0, 3.0))
            ]),
            Err(FuzzyError::AlphaNotIncreasing { .. })
        ));
    }

    #[test]
    fn stacking_examples() {
        let ok = validate_nested(&[
            (0.0, IntervalVector::from_intervals(&[iv(0.0, 4.0)])),
            (1.0, IntervalVector::from_intervals(&[iv(1.0, 3.0)])),
        ])
        .unwrap();
        assert_eq!(ok.components[0].support(), iv(0.0, 4.0));
        let err = validate_nested(&[
            (0.0, IntervalVector::from_intervals(&[iv(1.0, 3.0)])),
            (1.0, IntervalVector::from_intervals(&[iv(0.0, 4.0)])),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            FuzzyError::StackingViolation {
                lower_alpha: 0.0,
                upper_alpha: 1.0,
                coordinate: 0
            }
        );
    }

    #[test]
    fn json_forms() {
        let x: FuzzyNumber = serde_json::from_str(r#"{"tfn":[2,3,4]}"#).unwrap();
        assert_eq!(x, tfn(2.0, 3.0, 4.0));
        let y: FuzzyNumber =
            serde_json::from_str(r#"{"levels":[[0,0,4],[0.5,1,3],[1,2,2]]}"#).unwrap();
        assert_eq!(y.levels().len(), 3);
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"tfn":[2.0,3.0,4.0]}"#
        );
        let back: FuzzyNumber = serde_json::from_str(&serde_json::to_string(&y).unwrap()).unwrap();
        assert_eq!(back, y);
        assert!(serde_json::from_str::<FuzzyNumber>(r#"{"tfn":[3,2,4]}"#).is_err());
        assert!(serde_json::from_str::<FuzzyNumber>(r#"{"trapezoid":[1,2,3,4]}"#).is_err());
    }

    fn arb_fuzzy() -> impl Strategy<Value = FuzzyNumber> {
        (
            -10.0..10.0f64,
            prop::collection::vec((0.0..3.0f64, 0.0..3.0f64), 1..5),
            prop::collection::vec(0.01..1.0f64, 0..4),
        )
            .prop_map(|(center, spreads, mut inner)| {
                inner.sort_by(f64::total_cmp);
                inner.dedup();
                inner.retain(|a| *a < 0.999);
                let mut alphas = vec![0.0];
                alphas.extend(inner);
                alphas.push(1.0);
                // cumulative spreads from the core outwards
                let n = alphas.len();
                let mut lo = center;
                let mut hi = center;
                let mut cuts = vec![Interval::point(center); n];
                for k in (0..n - 1).rev() {
                    let (dl, dr) = spreads[k % spreads.len()];
                    lo -= dl;
                    hi += dr;
                    cuts[k] = Interval { lo, hi };
                }
                FuzzyNumber::from_levels(alphas.into_iter().zip(cuts)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn cuts_are_nested(x in arb_fuzzy(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(x.cut(lo).unwrap().encloses(&x.cut(hi).unwrap()));
        }

        #[test]
        fn membership_matches_cuts(x in arb_fuzzy(), t in 0.0..1.0f64) {
            for lvl in x.levels().iter().filter(|l| l.alpha > 0.0) {
                let p = lvl.cut.lo - 1.0 + t * (lvl.cut.width() + 2.0);
                let m = x.membership(p);
                if lvl.cut.contains(p) {
                    prop_assert!(m >= lvl.alpha - 1e-12);
                }
                if m >= lvl.alpha + 1e-12 {
                    prop_assert!(lvl.cut.contains(p));
                }
            }
        }

        #[test]
        fn ops_commute_with_cuts(x in arb_fuzzy(), y in arb_fuzzy(), beta in -3.0..3.0f64, a in 0.0..=1.0f64) {
            let s = &x + &y;
            let lhs = s.cut(a).unwrap();
            let rhs = x.cut(a).unwrap() + y.cut(a).unwrap();
            prop_assert!((lhs.lo - rhs.lo).abs() < 1e-9 && (lhs.hi - rhs.hi).abs() < 1e-9);
            let sc = x.scale(beta).cut(a).unwrap();
            let rc = x.cut(a).unwrap().scale(beta);
            prop_assert!((sc.lo - rc.lo).abs() < 1e-9 && (sc.hi - rc.hi).abs() < 1e-9);
        }

        #[test]
        fn fuzzy_convexity(x in arb_fuzzy(), u in 0.0..1.0f64, v in 0.0..1.0f64, phi in 0.0..=1.0f64) {
            let s = x.support();
            let p = s.lo - 0.5 + u * (s.width() + 1.0);
            let q = s.lo - 0.5 + v * (s.width() + 1.0);
            let m = x.membership(phi * p + (1.0 - phi) * q);
            prop_assert!(m >= x.membership(p).min(x.membership(q)) - 1e-12);
        }

        #[test]
        fn json_round_trip(x in arb_fuzzy()) {
            let s = serde_json::to_string(&x).unwrap();
            let back: FuzzyNumber = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
