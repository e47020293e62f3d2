use crate::cohort::{Cohort, SortedClasses};
use crate::error::{AuditError, Result};
use crate::roc::{sens_spec_sorted, SensSpec};
use crate::scalar::{cmp_scalar, sort_scalars, Scalar};

/// Range of thresholds the drift integral runs over.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdDomain<F> {
    tau_min: F,
    tau_max: F,
    allow_out_of_domain: bool,
}

impl<F: Scalar> ThresholdDomain<F> {
    pub fn new(tau_min: F, tau_max: F) -> Result<Self> {
        if !tau_min.is_finite_value() || !tau_max.is_finite_value() || tau_min >= tau_max {
            return Err(AuditError::InvalidSpec(format!(
                "threshold domain needs finite tau_min < tau_max, got [{tau_min:?}, {tau_max:?}]"
            )));
        }
        Ok(ThresholdDomain {
            tau_min,
            tau_max,
            allow_out_of_domain: false,
        })
    }

    /// Accept scores outside the domain; thresholds beyond it are then
    /// simply not integrated over.
    pub fn allow_out_of_domain(mut self, allow: bool) -> Self {
        self.allow_out_of_domain = allow;
        self
    }

    pub fn tau_min(&self) -> &F {
        &self.tau_min
    }

    pub fn tau_max(&self) -> &F {
        &self.tau_max
    }

    pub fn allows_out_of_domain(&self) -> bool {
        self.allow_out_of_domain
    }

    pub fn width(&self) -> F {
        self.tau_max.clone() - self.tau_min.clone()
    }

    fn contains(&self, score: &F) -> bool {
        *score >= self.tau_min && *score <= self.tau_max
    }
}

impl<F: Scalar> Default for ThresholdDomain<F> {
    /// `[0, 1]`.
    fn default() -> Self {
        Self::new(F::zero(), F::one()).expect("valid default")
    }
}

/// One interval `(tau_lo, tau_hi]` on which both cohorts' sensitivity and
/// specificity are constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSegment<F> {
    pub tau_lo: F,
    pub tau_hi: F,
    pub validation: SensSpec<F>,
    pub test: SensSpec<F>,
    /// `(ΔSens)² + (ΔSpec)²` on this interval.
    pub squared_gap: F,
}

impl<F: Scalar> DriftSegment<F> {
    pub fn width(&self) -> F {
        self.tau_hi.clone() - self.tau_lo.clone()
    }

    pub fn sensitivity_gap_sq(&self) -> F {
        let d = self.validation.sensitivity.clone() - self.test.sensitivity.clone();
        d.clone() * d
    }

    pub fn specificity_gap_sq(&self) -> F {
        let d = self.validation.specificity.clone() - self.test.specificity.clone();
        d.clone() * d
    }

    pub fn midpoint(&self) -> F {
        (self.tau_lo.clone() + self.tau_hi.clone()) * F::half()
    }
}

/// Row of the per-threshold drift curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSample<F> {
    pub tau: F,
    pub sens_v: F,
    pub sens_t: F,
    pub spec_v: F,
    pub spec_t: F,
    pub squared_gap: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftResult<F> {
    /// Integral of the squared (sensitivity, specificity) gap over the domain.
    pub score: F,
    /// The sensitivity part of `score`.
    pub sensitivity_drift: F,
    /// The specificity part of `score`.
    pub specificity_drift: F,
    pub tau_min: F,
    pub tau_max: F,
    /// Contiguous cover of `[tau_min, tau_max]`.
    pub segments: Vec<DriftSegment<F>>,
}

impl<F: Scalar> DriftResult<F> {
    /// The step functions sampled once per segment, at its midpoint.
    pub fn per_component_curve(&self) -> Vec<DriftSample<F>> {
        self.segments
            .iter()
            .map(|s| DriftSample {
                tau: s.midpoint(),
                sens_v: s.validation.sensitivity.clone(),
                sens_t: s.test.sensitivity.clone(),
                spec_v: s.validation.specificity.clone(),
                spec_t: s.test.specificity.clone(),
                squared_gap: s.squared_gap.clone(),
            })
            .collect()
    }
}

/// Integral over `tau` of `|S(validation, tau) − S(test, tau)|²`.
///
/// Both sensitivity and specificity only change where `tau` passes a score,
/// so the integrand is constant on each interval between consecutive
/// distinct scores and the integral is an exact finite sum.
pub fn drift_score<F: Scalar>(
    validation: &Cohort<F>,
    test: &Cohort<F>,
    domain: &ThresholdDomain<F>,
) -> Result<DriftResult<F>> {
    let v = SortedClasses::of(validation)?;
    let t = SortedClasses::of(test)?;

    if !domain.allow_out_of_domain {
        for cohort in [validation, test] {
            if let Some(score) = cohort.scores().iter().find(|s| !domain.contains(s)) {
                return Err(AuditError::ScoreOutsideDomain {
                    cohort: cohort.name().to_string(),
                    score: score.to_f64_lossy(),
                    tau_min: domain.tau_min.to_f64_lossy(),
                    tau_max: domain.tau_max.to_f64_lossy(),
                });
            }
        }
    }

    let mut breakpoints: Vec<F> = validation
        .scores()
        .iter()
        .chain(test.scores())
        .filter(|s| **s > domain.tau_min && **s < domain.tau_max)
        .cloned()
        .collect();
    breakpoints.push(domain.tau_min.clone());
    breakpoints.push(domain.tau_max.clone());
    sort_scalars(&mut breakpoints);
    breakpoints.dedup_by(|a, b| cmp_scalar(a, b).is_eq());

    let mut segments = Vec::with_capacity(breakpoints.len() - 1);
    let (mut sens_total, mut spec_total) = (F::zero(), F::zero());
    for pair in breakpoints.windows(2) {
        let mid = (pair[0].clone() + pair[1].clone()) * F::half();
        let mut segment = DriftSegment {
            tau_lo: pair[0].clone(),
            tau_hi: pair[1].clone(),
            validation: sens_spec_sorted(&v, &mid),
            test: sens_spec_sorted(&t, &mid),
            squared_gap: F::zero(),
        };
        let (sens_sq, spec_sq) = (segment.sensitivity_gap_sq(), segment.specificity_gap_sq());
        let width = segment.width();
        sens_total = sens_total + width.clone() * sens_sq.clone();
        spec_total = spec_total + width * spec_sq.clone();
        segment.squared_gap = sens_sq + spec_sq;
        segments.push(segment);
    }

    Ok(DriftResult {
        score: sens_total.clone() + spec_total.clone(),
        sensitivity_drift: sens_total,
        specificity_drift: spec_total,
        tau_min: domain.tau_min.clone(),
        tau_max: domain.tau_max.clone(),
        segments,
    })
}
