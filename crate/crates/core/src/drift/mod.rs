//! Cross-cohort discrepancy scores between a validation and a test cohort.

mod threshold;
mod wasserstein;

pub use threshold::{drift_score, DriftResult, DriftSample, DriftSegment, ThresholdDomain};
pub use wasserstein::{
    distance_matrix, wasserstein2, WassersteinMatrix, MATRIX_COLUMN_LABELS, MATRIX_ROW_LABELS,
};
