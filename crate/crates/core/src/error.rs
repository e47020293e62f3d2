use thiserror::Error;

/// Every failure the library can report.
///
/// The `Display` output always starts with the variant name so that command
/// line users and log scrapers can match on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("MissingColumn: column '{column}' not found")]
    MissingColumn { column: String },

    #[error("BadLabel: row {row}: label '{token}' is not 0 or 1")]
    BadLabel { row: usize, token: String },

    #[error("BadScore: row {row}: score '{token}' is not a finite number")]
    BadScore { row: usize, token: String },

    #[error("MalformedRow: row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },

    #[error("EmptyInput: no data rows")]
    EmptyInput,

    #[error("InvalidEncoding: input is not valid UTF-8")]
    InvalidEncoding,

    #[error("InvalidSchema: {0}")]
    InvalidSchema(String),

    #[error("InvalidCohort: {0}")]
    InvalidCohort(String),

    #[error("SingleClass: cohort '{cohort}' contains only label {label}")]
    SingleClass { cohort: String, label: u8 },

    #[error("ZeroBaseline: cohort '{cohort}' has AUROC 0, robustness normalisation is undefined")]
    ZeroBaseline { cohort: String },

    #[error("ScoreOutsideDomain: cohort '{cohort}' has score {score} outside threshold domain [{tau_min}, {tau_max}]")]
    ScoreOutsideDomain {
        cohort: String,
        score: f64,
        tau_min: f64,
        tau_max: f64,
    },

    #[error("EmptySample: Wasserstein distance needs two non-empty samples")]
    EmptySample,

    #[error("NonFiniteSample: Wasserstein samples must be finite")]
    NonFiniteSample,

    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),

    #[error("IoFailure: {path}: {message}")]
    IoFailure { path: String, message: String },
}

impl AuditError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        AuditError::IoFailure {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = AuditError> = std::result::Result<T, E>;
