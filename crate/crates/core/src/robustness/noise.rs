use rayon::prelude::*;

use super::{monte_carlo_noise_auroc, MonteCarloCheck, PerturbationKind, PerturbationSpec, RobustnessResult};
use crate::cohort::{Cohort, SortedClasses};
use crate::error::{AuditError, Result};
use crate::quadrature::{composite_simpson, odd_at_least, uniform_grid};
use crate::roc::auroc_sorted;
use crate::scalar::Real;

/// Standard normal CDF, `Φ(x) = erfc(−x/√2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Expected AUROC after adding i.i.d. `N(0, sigma²)` noise to every score.
///
/// Each pair's ordering indicator has expectation `Φ(d / (σ√2))` for gap
/// `d = ŷ⁺ − ŷ⁻`; ties have probability zero once σ > 0. At `sigma = 0`
/// this is the plain AUROC.
pub fn noise_expected_auroc<F: Real>(cohort: &Cohort<F>, sigma: F) -> Result<F> {
    if sigma < F::zero() || !sigma.is_finite() {
        return Err(AuditError::InvalidSpec(format!("noise sigma must be >= 0, got {sigma:?}")));
    }
    let classes = SortedClasses::of(cohort)?;
    Ok(expected_auroc_sorted(&classes, sigma))
}

pub(super) fn expected_auroc_sorted<F: Real>(classes: &SortedClasses<F>, sigma: F) -> F {
    if sigma.is_zero() {
        return auroc_sorted(classes);
    }
    let scale = 1.0 / (sigma.to_f64_lossy() * std::f64::consts::SQRT_2);
    let negatives: Vec<f64> = classes.negatives.iter().map(|n| n.to_f64_lossy()).collect();
    // Per-positive partial sums are summed afterwards in a fixed order, so
    // the result does not depend on how rayon splits the work.
    let partials: Vec<f64> = classes
        .positives
        .par_iter()
        .map(|p| {
            let p = p.to_f64_lossy();
            negatives.iter().map(|n| normal_cdf((p - n) * scale)).sum::<f64>()
        })
        .collect();
    let total: f64 = partials.iter().sum();
    let pairs = (classes.positives.len() * classes.negatives.len()) as f64;
    F::from_f64(total / pairs).expect("probability fits the scalar type")
}

/// Robustness to Gaussian diffusion of all scores, integrated with
/// composite Simpson on the sigma grid (point count rounded up to odd).
///
/// When `spec.mc_draws > 0`, the analytic value at
/// `sigma_max` is cross-checked against a sampled estimate.
pub fn noise_robustness<F: Real>(
    cohort: &Cohort<F>,
    spec: &PerturbationSpec<F>,
) -> Result<RobustnessResult<F>> {
    spec.expect_kind(PerturbationKind::Noise)?;
    let classes = SortedClasses::of(cohort)?;
    let baseline = auroc_sorted(&classes);

    let points = odd_at_least(spec.grid_points);
    let grid = uniform_grid(&spec.sigma_min, &spec.sigma_max, points);
    let values: Vec<F> = grid
        .iter()
        .map(|&sigma| expected_auroc_sorted(&classes, sigma))
        .collect();
    let step = spec.width() / F::from_count((points - 1) as u64);
    let raw = composite_simpson(&values, &step);
    let curve = grid.into_iter().zip(values.iter().copied()).collect();

    let mut result = RobustnessResult::assemble(cohort.name(), spec, baseline, curve, raw)?;
    if spec.mc_draws > 0 {
        let sigma = spec.sigma_max;
        result.monte_carlo = Some(MonteCarloCheck {
            sigma,
            draws: spec.mc_draws,
            seed: spec.mc_seed,
            analytic: *values.last().expect("grid is nonempty"),
            estimate: monte_carlo_noise_auroc(cohort, sigma, spec.mc_draws, spec.mc_seed)?,
        });
    }
    Ok(result)
}
