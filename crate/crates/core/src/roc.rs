//! Empirical ROC curve, AUROC and operating-point sensitivity/specificity.
//!
//! Decision rule throughout the crate: a sample is predicted positive iff
//! its score is `>= tau`.

use std::cmp::Ordering;

use crate::cohort::{validate_for_roc, Cohort, SortedClasses};
use crate::error::Result;
use crate::scalar::{cmp_scalar, Scalar};

/// Human-readable form of the decision rule, echoed into reports.
pub const DECISION_RULE: &str = "score>=tau";

/// Threshold attached to a ROC breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub enum Threshold<F> {
    /// Above every score: nothing is predicted positive.
    AboveAll,
    At(F),
}

impl<F: Scalar> Threshold<F> {
    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::AboveAll => f64::INFINITY,
            Threshold::At(t) => t.to_f64_lossy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocPoint<F> {
    pub threshold: Threshold<F>,
    pub fpr: F,
    pub tpr: F,
}

/// Breakpoints of the empirical ROC, ordered by decreasing threshold.
///
/// The first point is `(AboveAll, 0, 0)`. Every following point sits at a
/// distinct score; the last one is the minimum score, where everything is
/// predicted positive and the rates are `(1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve<F> {
    points: Vec<RocPoint<F>>,
}

impl<F: Scalar> RocCurve<F> {
    pub fn points(&self) -> &[RocPoint<F>] {
        &self.points
    }

    /// The `(fpr, tpr)` polyline without thresholds.
    pub fn polyline(&self) -> Vec<(F, F)> {
        self.points
            .iter()
            .map(|p| (p.fpr.clone(), p.tpr.clone()))
            .collect()
    }

    /// Trapezoidal area under the polyline.
    pub fn trapezoid_area(&self) -> F {
        self.points.windows(2).fold(F::zero(), |acc, w| {
            let width = w[1].fpr.clone() - w[0].fpr.clone();
            let height = (w[0].tpr.clone() + w[1].tpr.clone()) * F::half();
            acc + width * height
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensSpec<F> {
    pub sensitivity: F,
    pub specificity: F,
}

/// Sensitivity and specificity of `cohort` at threshold `tau`.
pub fn sens_spec_at<F: Scalar>(cohort: &Cohort<F>, tau: &F) -> Result<SensSpec<F>> {
    let classes = SortedClasses::of(cohort)?;
    Ok(sens_spec_sorted(&classes, tau))
}

pub(crate) fn sens_spec_sorted<F: Scalar>(classes: &SortedClasses<F>, tau: &F) -> SensSpec<F> {
    let pos_below = classes.positives.partition_point(|s| s < tau);
    let neg_below = classes.negatives.partition_point(|s| s < tau);
    let p = classes.positives.len();
    let n = classes.negatives.len();
    SensSpec {
        sensitivity: F::from_count((p - pos_below) as u64) / F::from_count(p as u64),
        specificity: F::from_count(neg_below as u64) / F::from_count(n as u64),
    }
}

pub fn roc_curve<F: Scalar>(cohort: &Cohort<F>) -> Result<RocCurve<F>> {
    validate_for_roc(cohort)?;
    let mut ranked: Vec<(&F, bool)> = cohort.iter().map(|(s, l)| (s, l.is_positive())).collect();
    ranked.sort_by(|a, b| cmp_scalar(b.0, a.0));

    let p = F::from_count(cohort.count(crate::Label::Positive) as u64);
    let n = F::from_count(cohort.count(crate::Label::Negative) as u64);
    let mut points = vec![RocPoint {
        threshold: Threshold::AboveAll,
        fpr: F::zero(),
        tpr: F::zero(),
    }];
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < ranked.len() {
        let score = ranked[i].0;
        while i < ranked.len() && cmp_scalar(ranked[i].0, score) == Ordering::Equal {
            if ranked[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold: Threshold::At(score.clone()),
            fpr: F::from_count(fp) / n.clone(),
            tpr: F::from_count(tp) / p.clone(),
        });
    }
    Ok(RocCurve { points })
}

/// Tie-corrected Mann–Whitney AUROC, by sort and sweep.
pub fn auroc<F: Scalar>(cohort: &Cohort<F>) -> Result<F> {
    Ok(auroc_sorted(&SortedClasses::of(cohort)?))
}

/// AUROC from class scores already sorted ascending, in O(P + N).
pub(crate) fn auroc_sorted<F: Scalar>(classes: &SortedClasses<F>) -> F {
    let (pos, neg) = (&classes.positives, &classes.negatives);
    // Twice the U statistic, so tie credit stays integral.
    let mut twice_u: u64 = 0;
    let (mut i, mut j) = (0, 0);
    while i < pos.len() {
        let score = &pos[i];
        while j < neg.len() && neg[j] < *score {
            j += 1;
        }
        let below = j;
        let mut k = j;
        while k < neg.len() && cmp_scalar(&neg[k], score) == Ordering::Equal {
            k += 1;
        }
        let tied = k - j;
        let run_start = i;
        while i < pos.len() && cmp_scalar(&pos[i], score) == Ordering::Equal {
            i += 1;
        }
        twice_u += ((i - run_start) * (2 * below + tied)) as u64;
    }
    let pairs = 2 * (pos.len() as u64) * (neg.len() as u64);
    F::from_count(twice_u) / F::from_count(pairs)
}

/// The same statistic as [`auroc`] by an explicit double loop over all
/// positive/negative pairs. O(P·N); kept as an independent cross-check.
pub fn auroc_pairwise_oracle<F: Scalar>(cohort: &Cohort<F>) -> Result<F> {
    validate_for_roc(cohort)?;
    let mut twice_u: u64 = 0;
    let mut pairs: u64 = 0;
    for (sp, lp) in cohort.iter() {
        if !lp.is_positive() {
            continue;
        }
        for (sn, ln) in cohort.iter() {
            if ln.is_positive() {
                continue;
            }
            pairs += 1;
            twice_u += match sp.partial_cmp(sn) {
                Some(Ordering::Greater) => 2,
                Some(Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    Ok(F::from_count(twice_u) / F::from_count(2 * pairs))
}
