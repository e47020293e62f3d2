//! One audit run: every score for one cohort, or for a validation/test pair.

use crate::cohort::{Cohort, IngestSchema, Label};
use crate::drift::{distance_matrix, drift_score, DriftResult, ThresholdDomain, WassersteinMatrix};
use crate::error::Result;
use crate::robustness::{bias_robustness, noise_robustness, PerturbationSpec, RobustnessResult};
use crate::roc::{auroc, roc_curve, RocCurve};
use crate::scalar::Real;

/// Everything that parameterises a run. Echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig<F> {
    pub schema: IngestSchema,
    pub bias: PerturbationSpec<F>,
    pub noise: PerturbationSpec<F>,
    pub domain: ThresholdDomain<F>,
}

impl<F: Real> Default for AuditConfig<F> {
    fn default() -> Self {
        AuditConfig {
            schema: IngestSchema::default(),
            bias: PerturbationSpec::default_bias(),
            noise: PerturbationSpec::default_noise(),
            domain: ThresholdDomain::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CohortAnalysis<F> {
    pub cohort: Cohort<F>,
    pub roc: RocCurve<F>,
    pub auroc: F,
    pub bias: RobustnessResult<F>,
    pub noise: RobustnessResult<F>,
}

impl<F: Real> CohortAnalysis<F> {
    pub fn n_negative(&self) -> usize {
        self.cohort.count(Label::Negative)
    }

    pub fn n_positive(&self) -> usize {
        self.cohort.count(Label::Positive)
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonAnalysis<F> {
    pub drift: DriftResult<F>,
    pub wasserstein: WassersteinMatrix<F>,
}

pub fn analyze_cohort<F: Real>(cohort: &Cohort<F>, config: &AuditConfig<F>) -> Result<CohortAnalysis<F>> {
    Ok(CohortAnalysis {
        roc: roc_curve(cohort)?,
        auroc: auroc(cohort)?,
        bias: bias_robustness(cohort, &config.bias)?,
        noise: noise_robustness(cohort, &config.noise)?,
        cohort: cohort.clone(),
    })
}

pub fn compare_cohorts<F: Real>(
    validation: &Cohort<F>,
    test: &Cohort<F>,
    config: &AuditConfig<F>,
) -> Result<ComparisonAnalysis<F>> {
    Ok(ComparisonAnalysis {
        drift: drift_score(validation, test, &config.domain)?,
        wasserstein: distance_matrix(validation, test)?,
    })
}
