//! Distances between points, intervals, boxes and fuzzy numbers.
//!
//! Points of `R^N` are compared with the sum of per-coordinate absolute
//! differences. Sets use the Hausdorff metric induced by that distance (the
//! larger of the two directed sup-inf separations). Two fuzzy metrics are
//! provided and kept apart on purpose: the membership-sup metric, bounded by
//! 1, and the level-wise Hausdorff metric, which is not.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::fuzzy_num::{FuzzyNumber, FuzzyVector};
use crate::interval::Interval;
use crate::interval_linalg::IntervalVector;

/// Box in `R^N` (a product of closed intervals).
pub type BoxRN = IntervalVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

fn same_dim(a: usize, b: usize) -> Result<(), MetricError> {
    if a == b {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch(a, b))
    }
}

/// Selects one of the scalar fuzzy metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FuzzyMetric {
    /// Largest difference of membership grades.
    Membership,
    /// Largest Hausdorff distance between corresponding alpha-cuts.
    Levelwise,
}

/// Sum of coordinate distances.
pub fn dist_rn(z1: &DVector<f64>, z2: &DVector<f64>) -> Result<f64, MetricError> {
    same_dim(z1.len(), z2.len())?;
    Ok(z1.iter().zip(z2.iter()).map(|(a, b)| (a - b).abs()).sum())
}

/// `sup_{p in a} inf_{q in b} |p - q|`.
pub fn directed_interval(a: Interval, b: Interval) -> f64 {
    (b.lo - a.lo).max(a.hi - b.hi).max(0.0)
}

pub fn hausdorff_interval(a: Interval, b: Interval) -> f64 {
    (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
}

/// Directed separation between boxes under the coordinate-sum distance.
///
/// Both the sup and the inf split across coordinates for product sets, so
/// this is the sum of the coordinate separations.
pub fn directed_box(a: &BoxRN, b: &BoxRN) -> Result<f64, MetricError> {
    same_dim(a.len(), b.len())?;
    Ok(a.intervals()
        .zip(b.intervals())
        .map(|(x, y)| directed_interval(x, y))
        .sum())
}

/// Hausdorff metric between boxes.
///
/// This is not the coordinate sum of interval Hausdorff distances in general:
/// the two directions may be realised by different coordinates.
pub fn hausdorff_box(a: &BoxRN, b: &BoxRN) -> Result<f64, MetricError> {
    Ok(directed_box(a, b)?.max(directed_box(b, a)?))
}

/// `sup_p |x1(p) - x2(p)|`, evaluated exactly.
///
/// Both memberships are linear between consecutive breakpoints of either
/// number, so the sup is attained at a breakpoint or as a one-sided limit at
/// one. Limits are recovered by extrapolating the linear piece from two
/// interior points.
pub fn d_membership(x1: &FuzzyNumber, x2: &FuzzyNumber) -> f64 {
    let mut pts = x1.breakpoints();
    pts.extend(x2.breakpoints());
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let diff = |p: f64| x1.membership(p) - x2.membership(p);
    let mut best = pts.iter().map(|&p| diff(p).abs()).fold(0.0, f64::max);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let q1 = a + 0.25 * (b - a);
        let q3 = a + 0.75 * (b - a);
        let (f1, f3) = (diff(q1), diff(q3));
        let slope = (f3 - f1) / (q3 - q1);
        let left = f1 - slope * (q1 - a);
        let right = f3 + slope * (b - q3);
        best = best.max(left.abs()).max(right.abs());
    }
    best.clamp(0.0, 1.0)
}

/// `sup_{alpha > 0}` of the Hausdorff distance between cuts.
///
/// Endpoint gaps are piecewise linear in alpha with breaks on the merged
/// grid, and the limit at `alpha -> 0+` equals the value at 0.
pub fn d_levelwise(x1: &FuzzyNumber, x2: &FuzzyNumber) -> f64 {
    crate::fuzzy_num::merged_alphas(x1, x2)
        .into_iter()
        .map(|a| {
            // merged grid alphas lie in [0, 1]
            let c1 = x1.cut(a).expect("grid alpha");
            let c2 = x2.cut(a).expect("grid alpha");
            hausdorff_interval(c1, c2)
        })
        .fold(0.0, f64::max)
}

pub fn d_fuzzy(x1: &FuzzyNumber, x2: &FuzzyNumber, which: FuzzyMetric) -> f64 {
    match which {
        FuzzyMetric::Membership => d_membership(x1, x2),
        FuzzyMetric::Levelwise => d_levelwise(x1, x2),
    }
}

/// Component sum of the selected scalar metric.
pub fn d_fuzzy_vec(
    x: &FuzzyVector,
    y: &FuzzyVector,
    which: FuzzyMetric,
) -> Result<f64, MetricError> {
    same_dim(x.len(), y.len())?;
    Ok(x.components
        .iter()
        .zip(&y.components)
        .map(|(a, b)| d_fuzzy(a, b, which))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_num::Tfn;
    use proptest::prelude::*;

    fn tfn(l: f64, c: f64, r: f64) -> FuzzyNumber {
        Tfn::new(l, c, r).unwrap().into()
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn bx(c: &[(f64, f64)]) -> BoxRN {
        IntervalVector::from_intervals(&c.iter().map(|&(l, h)| iv(l, h)).collect::<Vec<_>>())
    }

    /// Sup-inf separation estimated on a dense lattice of both boxes.
    fn sampled_hausdorff(a: &BoxRN, b: &BoxRN, steps: usize) -> f64 {
        let lattice = |x: &BoxRN| -> Vec<DVector<f64>> {
            let n = x.len();
            let mut out = vec![DVector::zeros(n)];
            for i in 0..n {
                let mut next = Vec::new();
                for p in &out {
                    for s in 0..=steps {
                        let mut q = p.clone();
                        q[i] = x.lo[i] + (x.hi[i] - x.lo[i]) * s as f64 / steps as f64;
                        next.push(q);
                    }
                }
                out = next;
            }
            out
        };
        // distance from a lattice point to the nearest point of the other box
        let directed = |from: &BoxRN, to: &BoxRN| {
            lattice(from)
                .iter()
                .map(|p| {
                    let q = DVector::from_fn(p.len(), |i, _| p[i].clamp(to.lo[i], to.hi[i]));
                    dist_rn(p, &q).unwrap()
                })
                .fold(0.0, f64::max)
        };
        directed(a, b).max(directed(b, a))
    }

    #[test]
    fn dist_rn_examples() {
        let v = |s: &[f64]| DVector::from_column_slice(s);
        assert_eq!(dist_rn(&v(&[0.0, 0.0]), &v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(dist_rn(&v(&[1.0, 2.0]), &v(&[3.0, 5.0])).unwrap(), 5.0);
        assert_eq!(dist_rn(&v(&[1.0]), &v(&[4.0])).unwrap(), 3.0);
        assert!(dist_rn(&v(&[1.0]), &v(&[4.0, 1.0])).is_err());
    }

    #[test]
    fn hausdorff_interval_examples() {
        assert_eq!(hausdorff_interval(iv(2.0, 4.0), iv(2.0, 4.0)), 0.0);
        assert_eq!(hausdorff_interval(iv(2.0, 4.0), iv(3.5, 6.5)), 2.5);
        assert_eq!(hausdorff_interval(iv(0.0, 1.0), iv(5.0, 5.0)), 5.0);
        // dense-sample oracle
        let a = bx(&[(2.0, 4.0)]);
        let b = bx(&[(3.5, 6.5)]);
        assert!((sampled_hausdorff(&a, &b, 600) - 2.5).abs() < 1e-9);
        let a = bx(&[(0.0, 1.0)]);
        let b = bx(&[(5.0, 5.0)]);
        assert!((sampled_hausdorff(&a, &b, 100) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn hausdorff_box_examples() {
        let a = bx(&[(0.0, 1.0), (0.0, 1.0)]);
        assert_eq!(hausdorff_box(&a, &a).unwrap(), 0.0);
        let b = bx(&[(2.0, 3.0), (0.0, 1.0)]);
        assert_eq!(hausdorff_box(&a, &b).unwrap(), 2.0);
        assert!((sampled_hausdorff(&a, &b, 40) - 2.0).abs() < 1e-9);
        let c = bx(&[(0.0, 2.0), (0.0, 2.0)]);
        let d = bx(&[(1.0, 1.0), (1.0, 1.0)]);
        assert_eq!(hausdorff_box(&c, &d).unwrap(), 2.0);
        assert!((sampled_hausdorff(&c, &d, 40) - 2.0).abs() < 1e-9);
        assert!(hausdorff_box(&a, &bx(&[(0.0, 1.0)])).is_err());
    }

    #[test]
    fn hausdorff_box_differs_from_coordinate_sum() {
        // each direction is realised in a different coordinate
        let a = bx(&[(0.0, 2.0), (1.0, 1.0)]);
        let b = bx(&[(1.0, 1.0), (0.0, 2.0)]);
        let coordinate_sum: f64 = a
            .intervals()
            .zip(b.intervals())
            .map(|(x, y)| hausdorff_interval(x, y))
            .sum();
        assert_eq!(coordinate_sum, 2.0);
        assert_eq!(hausdorff_box(&a, &b).unwrap(), 1.0);
        assert!((sampled_hausdorff(&a, &b, 40) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn membership_metric_examples() {
        assert_eq!(d_membership(&tfn(2.0, 3.0, 4.0), &tfn(3.5, 4.5, 6.5)), 1.0);
        assert!((d_membership(&tfn(2.0, 3.0, 4.0), &tfn(0.0, 3.0, 8.0)) - 0.8).abs() < 1e-12);
        let x = tfn(1.0, 2.0, 2.5);
        assert_eq!(d_membership(&x, &x), 0.0);
    }

    #[test]
    fn membership_metric_sees_jumps() {
        // the triangle's core at 1 is outside the crisp point's support
        let spike = FuzzyNumber::crisp(0.0);
        let wide = tfn(-1.0, 1.0, 3.0);
        assert!((d_membership(&spike, &wide) - 1.0).abs() < 1e-12);
        let wide2 = tfn(-1.0, 0.0, 1.0);
        assert!((d_membership(&spike, &wide2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn levelwise_metric_examples() {
        let x = tfn(1.0, 2.0, 2.5);
        assert_eq!(d_levelwise(&x, &x), 0.0);
        assert_eq!(d_levelwise(&tfn(2.0, 3.0, 4.0), &tfn(3.5, 4.5, 6.5)), 2.5);
        // brute force over a fine alpha grid
        let (a, b) = (tfn(2.0, 3.0, 4.0), tfn(3.5, 4.5, 6.5));
        let brute = (1..=10_000)
            .map(|k| {
                let al = k as f64 / 10_000.0;
                hausdorff_interval(a.cut(al).unwrap(), b.cut(al).unwrap())
            })
            .fold(0.0, f64::max);
        assert!((brute - 2.5).abs() < 1e-3);
        assert_eq!(
            d_levelwise(&FuzzyNumber::crisp(0.0), &FuzzyNumber::crisp(3.25)),
            3.25
        );
    }

    #[test]
    fn vector_metric_examples() {
        let x = FuzzyVector::new(vec![tfn(2.0, 3.0, 4.0), tfn(2.0, 3.0, 4.0)]);
        let y = FuzzyVector::new(vec![tfn(3.5, 4.5, 6.5), tfn(0.0, 3.0, 8.0)]);
        assert_eq!(d_fuzzy_vec(&x, &x, FuzzyMetric::Membership).unwrap(), 0.0);
        assert_eq!(d_fuzzy_vec(&x, &x, FuzzyMetric::Levelwise).unwrap(), 0.0);
        let d = d_fuzzy_vec(&x, &y, FuzzyMetric::Membership).unwrap();
        assert!((d - 1.8).abs() < 1e-12);
        let one_a = FuzzyVector::new(vec![tfn(2.0, 3.0, 4.0)]);
        let one_b = FuzzyVector::new(vec![tfn(0.0, 3.0, 8.0)]);
        assert_eq!(
            d_fuzzy_vec(&one_a, &one_b, FuzzyMetric::Levelwise).unwrap(),
            d_levelwise(&one_a.components[0], &one_b.components[0])
        );
        assert!(d_fuzzy_vec(&x, &one_a, FuzzyMetric::Membership).is_err());
    }

    fn arb_tfn() -> impl Strategy<Value = FuzzyNumber> {
        (-5.0..5.0f64, 0.0..3.0f64, 0.0..3.0f64).prop_map(|(c, dl, dr)| tfn(c - dl, c, c + dr))
    }

    fn arb_box(n: usize) -> impl Strategy<Value = BoxRN> {
        prop::collection::vec((-3.0..3.0f64, 0.0..2.0f64), n)
            .prop_map(|v| bx(&v.iter().map(|&(a, w)| (a, a + w)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn fuzzy_metrics_are_metrics(a in arb_tfn(), b in arb_tfn(), c in arb_tfn()) {
            for m in [FuzzyMetric::Membership, FuzzyMetric::Levelwise] {
                let ab = d_fuzzy(&a, &b, m);
                prop_assert!(ab >= 0.0);
                prop_assert!((ab - d_fuzzy(&b, &a, m)).abs() < 1e-12);
                prop_assert_eq!(d_fuzzy(&a, &a, m), 0.0);
                prop_assert!(ab <= d_fuzzy(&a, &c, m) + d_fuzzy(&c, &b, m) + 1e-9);
            }
            prop_assert!(d_membership(&a, &b) <= 1.0);
        }

        #[test]
        fn membership_metric_is_one_when_cores_miss(a in arb_tfn(), shift in 0.01..5.0f64) {
            // move b so that a's core lies outside b's support
            let core = a.core().lo;
            let b = tfn(core + shift, core + shift + 1.0, core + shift + 2.0);
            prop_assert!((d_membership(&a, &b) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn levelwise_dominates_support_distance(a in arb_tfn(), b in arb_tfn()) {
            prop_assert!(d_levelwise(&a, &b) >= hausdorff_interval(a.support(), b.support()));
        }

        #[test]
        fn box_metric_matches_sampling(a in arb_box(2), b in arb_box(2)) {
            let exact = hausdorff_box(&a, &b).unwrap();
            let sampled = sampled_hausdorff(&a, &b, 24);
            // lattice spacing bounds the sampling error
            let h: f64 = a.intervals().chain(b.intervals()).map(|c| c.width() / 24.0).sum();
            prop_assert!(sampled <= exact + 1e-9);
            prop_assert!(exact <= sampled + h + 1e-9);
        }

        #[test]
        fn box_metric_triangle(a in arb_box(3), b in arb_box(3), c in arb_box(3)) {
            let ab = hausdorff_box(&a, &b).unwrap();
            prop_assert!(ab <= hausdorff_box(&a, &c).unwrap() + hausdorff_box(&c, &b).unwrap() + 1e-9);
            prop_assert!((ab - hausdorff_box(&b, &a).unwrap()).abs() < 1e-12);
        }
    }
}
