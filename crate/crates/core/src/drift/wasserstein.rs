use crate::cohort::{validate_for_roc, Cohort, Label};
use crate::error::{AuditError, Result};
use crate::scalar::{sort_scalars, Real};

/// 2-Wasserstein distance between two empirical distributions.
///
/// In one dimension this is the L² distance between quantile functions.
/// Both quantile functions are step functions with jumps at `k/|a|` and
/// `l/|b|`; the integral is summed exactly over the merged jumps, measured
/// in units of `1/(|a|·|b|)`.
pub fn wasserstein2<F: Real>(a: &[F], b: &[F]) -> Result<F> {
    if a.is_empty() || b.is_empty() {
        return Err(AuditError::EmptySample);
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(AuditError::NonFiniteSample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_scalars(&mut a);
    sort_scalars(&mut b);
    let (n, m) = (a.len() as u64, b.len() as u64);

    let (mut i, mut j) = (0usize, 0usize);
    let mut position = 0u64;
    let mut acc = F::zero();
    while i < a.len() && j < b.len() {
        let next_a = (i as u64 + 1) * m;
        let next_b = (j as u64 + 1) * n;
        let next = next_a.min(next_b);
        let diff = a[i] - b[j];
        acc = acc + diff * diff * F::from_count(next - position);
        position = next;
        if next == next_a {
            i += 1;
        }
        if next == next_b {
            j += 1;
        }
    }
    Ok((acc / F::from_count(n * m)).sqrt())
}

pub const MATRIX_ROW_LABELS: [&str; 2] = ["y_V=0", "y_T=1"];
pub const MATRIX_COLUMN_LABELS: [&str; 2] = ["y_V=1", "y_T=0"];

/// W₂ distances among the four class-conditional score samples.
///
/// Rows are (validation negatives, test positives); columns are
/// (validation positives, test negatives). The diagonal holds the
/// within-cohort class separation and should be large; the off-diagonal
/// holds same-class drift across cohorts and should be small.
#[derive(Debug, Clone, PartialEq)]
pub struct WassersteinMatrix<F> {
    pub entries: [[F; 2]; 2],
}

impl<F: Real> WassersteinMatrix<F> {
    pub fn diagonal(&self) -> [F; 2] {
        [self.entries[0][0], self.entries[1][1]]
    }

    pub fn off_diagonal(&self) -> [F; 2] {
        [self.entries[0][1], self.entries[1][0]]
    }
}

pub fn distance_matrix<F: Real>(validation: &Cohort<F>, test: &Cohort<F>) -> Result<WassersteinMatrix<F>> {
    validate_for_roc(validation)?;
    validate_for_roc(test)?;
    let v0 = validation.class_scores(Label::Negative);
    let v1 = validation.class_scores(Label::Positive);
    let t0 = test.class_scores(Label::Negative);
    let t1 = test.class_scores(Label::Positive);
    Ok(WassersteinMatrix {
        entries: [
            [wasserstein2(&v0, &v1)?, wasserstein2(&v0, &t0)?],
            [wasserstein2(&t1, &v1)?, wasserstein2(&t1, &t0)?],
        ],
    })
}
