use super::{PerturbationKind, PerturbationSpec, RobustnessResult};
use crate::cohort::{Cohort, Label, SortedClasses};
use crate::error::{AuditError, Result};
use crate::quadrature::uniform_grid;
use crate::roc::auroc_sorted;
use crate::scalar::Scalar;

/// Shift every positive-class score down by `sigma`; negatives untouched.
pub fn bias_perturb<F: Scalar>(cohort: &Cohort<F>, sigma: &F) -> Result<Cohort<F>> {
    if *sigma < F::zero() {
        return Err(AuditError::InvalidSpec(format!("bias sigma must be >= 0, got {sigma:?}")));
    }
    Ok(cohort.map_scores(|s, label| match label {
        Label::Positive => s.clone() - sigma.clone(),
        Label::Negative => s.clone(),
    }))
}

/// Robustness to a downward shift of the positive class.
///
/// `A(σ)` only changes where `σ` crosses a pairwise gap `d = ŷ⁺ − ŷ⁻`, and
/// a pair counts for `σ < d`, so the integral over `[a, b]` is exactly
/// `mean over pairs of clamp(d, a, b) − a`. The sampled curve is for
/// reporting only.
pub fn bias_robustness<F: Scalar>(
    cohort: &Cohort<F>,
    spec: &PerturbationSpec<F>,
) -> Result<RobustnessResult<F>> {
    spec.expect_kind(PerturbationKind::Bias)?;
    let classes = SortedClasses::of(cohort)?;
    let baseline = auroc_sorted(&classes);

    let curve = uniform_grid(&spec.sigma_min, &spec.sigma_max, spec.grid_points)
        .into_iter()
        .map(|sigma| {
            let shifted = SortedClasses {
                negatives: classes.negatives.clone(),
                positives: classes
                    .positives
                    .iter()
                    .map(|p| p.clone() - sigma.clone())
                    .collect(),
            };
            let a = auroc_sorted(&shifted);
            (sigma, a)
        })
        .collect();

    let raw = clamped_gap_mean(&classes, &spec.sigma_min, &spec.sigma_max) - spec.sigma_min.clone();
    RobustnessResult::assemble(cohort.name(), spec, baseline, curve, raw)
}

/// Mean over all positive/negative pairs of `clamp(pos − neg, lo, hi)`,
/// in O((P + N) log N) using prefix sums over the sorted negatives.
fn clamped_gap_mean<F: Scalar>(classes: &SortedClasses<F>, lo: &F, hi: &F) -> F {
    let neg = &classes.negatives;
    let mut prefix = Vec::with_capacity(neg.len() + 1);
    prefix.push(F::zero());
    for v in neg {
        let next = prefix.last().expect("nonempty").clone() + v.clone();
        prefix.push(next);
    }

    let mut total = F::zero();
    for p in &classes.positives {
        // gap >= hi  <=>  neg <= p − hi
        let capped = neg.partition_point(|n| *n <= p.clone() - hi.clone());
        // gap <= lo  <=>  neg >= p − lo
        let floored_from = neg.partition_point(|n| *n < p.clone() - lo.clone());
        let middle = floored_from - capped;
        let floored = neg.len() - floored_from;
        total = total
            + hi.clone() * F::from_count(capped as u64)
            + lo.clone() * F::from_count(floored as u64)
            + p.clone() * F::from_count(middle as u64)
            - (prefix[floored_from].clone() - prefix[capped].clone());
    }
    let pairs = (classes.positives.len() * classes.negatives.len()) as u64;
    total / F::from_count(pairs)
}
