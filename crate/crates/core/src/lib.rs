//! Generalisability audit for binary classifiers.
//!
//! Starting from raw model outputs and labels, the crate computes the ROC
//! curve and AUROC together with scores that the test AUROC alone hides:
//!
//! * robustness to bias and to noise of a single cohort ([`robustness`]);
//! * drift of sensitivity/specificity between a validation and a test
//!   cohort, integrated over all thresholds ([`drift::drift_score`]);
//! * the 2×2 matrix of 2-Wasserstein distances between the class-conditional
//!   output distributions of both cohorts ([`drift::distance_matrix`]).
//!
//! Numeric code is generic over [`Scalar`] (ordered fields, including exact
//! rationals) or [`Real`] (floating point). The aliases below fix the
//! common choices.

pub mod audit;
pub mod cli;
pub mod cohort;
pub mod drift;
mod error;
pub mod numfmt;
pub mod quadrature;
pub mod report;
pub mod robustness;
pub mod roc;
mod scalar;

pub use cohort::{parse_cohort, validate_for_roc, write_cohort, Cohort, IngestSchema, InputFormat, Label};
pub use drift::{
    distance_matrix, drift_score, wasserstein2, DriftResult, ThresholdDomain, WassersteinMatrix,
};
pub use error::{AuditError, Result};
pub use robustness::{
    bias_perturb, bias_robustness, monte_carlo_noise_auroc, noise_expected_auroc, noise_robustness,
    PerturbationKind, PerturbationSpec, RobustnessResult,
};
pub use roc::{auroc, auroc_pairwise_oracle, roc_curve, sens_spec_at, RocCurve, SensSpec};
pub use scalar::{Real, Scalar};

/// Exact rational scalar; parses decimal scores without rounding.
pub type Exact = num_rational::BigRational;

pub type Cohort64 = Cohort<f64>;
pub type Cohort32 = Cohort<f32>;
pub type ExactCohort = Cohort<Exact>;

pub type RocCurve64 = RocCurve<f64>;
pub type ExactRocCurve = RocCurve<Exact>;

pub type RobustnessResult64 = RobustnessResult<f64>;
pub type PerturbationSpec64 = PerturbationSpec<f64>;

pub type DriftResult64 = DriftResult<f64>;
pub type ExactDriftResult = DriftResult<Exact>;
pub type ThresholdDomain64 = ThresholdDomain<f64>;

pub type WassersteinMatrix64 = WassersteinMatrix<f64>;
pub type WassersteinMatrix32 = WassersteinMatrix<f32>;
