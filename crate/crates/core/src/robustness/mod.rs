//! Single-cohort robustness scores.
//!
//! Both scores integrate the AUROC of a perturbed cohort over the
//! perturbation strength `sigma` and divide by the unperturbed AUROC:
//!
//! ```text
//! score = (1 / A(ŷ)) · ∫_{σmin}^{σmax} A(P_σ(ŷ)) dσ
//! ```
//!
//! * bias: positive-class scores are shifted down by `sigma`;
//! * noise: every score is diffused with `N(0, sigma²)` noise, and the
//!   integrand is the expected AUROC under that diffusion.
//!
//! The raw score depends on the width of the sigma range, so a
//! range-normalised variant (`score / (σmax − σmin)`) is reported as well.

mod bias;
mod monte_carlo;
mod noise;

pub use bias::{bias_perturb, bias_robustness};
pub use monte_carlo::monte_carlo_noise_auroc;
pub use noise::{noise_expected_auroc, noise_robustness, normal_cdf};

use std::fmt;

use crate::error::{AuditError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    Bias,
    Noise,
}

impl PerturbationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbationKind::Bias => "bias",
            PerturbationKind::Noise => "noise",
        }
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_GRID_POINTS: usize = 101;

/// Perturbation family, sigma range and sampling configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec<F> {
    kind: PerturbationKind,
    sigma_min: F,
    sigma_max: F,
    grid_points: usize,
    mc_draws: usize,
    mc_seed: u64,
}

impl<F: Scalar> PerturbationSpec<F> {
    pub fn new(kind: PerturbationKind, sigma_min: F, sigma_max: F) -> Result<Self> {
        if !sigma_min.is_finite_value() || !sigma_max.is_finite_value() {
            return Err(AuditError::InvalidSpec("sigma bounds must be finite".into()));
        }
        if sigma_min < F::zero() {
            return Err(AuditError::InvalidSpec(format!(
                "sigma_min must be >= 0, got {sigma_min:?}"
            )));
        }
        if sigma_max <= sigma_min {
            return Err(AuditError::InvalidSpec(format!(
                "sigma_max ({sigma_max:?}) must exceed sigma_min ({sigma_min:?})"
            )));
        }
        Ok(PerturbationSpec {
            kind,
            sigma_min,
            sigma_max,
            grid_points: DEFAULT_GRID_POINTS,
            mc_draws: 0,
            mc_seed: 0,
        })
    }

    /// Bias over `[0, 1]`.
    pub fn default_bias() -> Self {
        Self::new(PerturbationKind::Bias, F::zero(), F::one()).expect("valid default")
    }

    /// Noise over `[0, 0.5]`.
    pub fn default_noise() -> Self {
        Self::new(PerturbationKind::Noise, F::zero(), F::half()).expect("valid default")
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Result<Self> {
        if grid_points < 2 {
            return Err(AuditError::InvalidSpec(format!(
                "grid_points must be >= 2, got {grid_points}"
            )));
        }
        self.grid_points = grid_points;
        Ok(self)
    }

    /// Enable the Monte Carlo cross-check (noise only; `draws = 0` disables).
    pub fn with_monte_carlo(mut self, draws: usize, seed: u64) -> Self {
        self.mc_draws = draws;
        self.mc_seed = seed;
        self
    }

    pub fn kind(&self) -> PerturbationKind {
        self.kind
    }

    pub fn sigma_min(&self) -> &F {
        &self.sigma_min
    }

    pub fn sigma_max(&self) -> &F {
        &self.sigma_max
    }

    pub fn width(&self) -> F {
        self.sigma_max.clone() - self.sigma_min.clone()
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn mc_draws(&self) -> usize {
        self.mc_draws
    }

    pub fn mc_seed(&self) -> u64 {
        self.mc_seed
    }

    fn expect_kind(&self, kind: PerturbationKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(AuditError::InvalidSpec(format!(
                "expected a {kind} perturbation spec, got {}",
                self.kind
            )))
        }
    }
}

/// Analytic vs sampled expected AUROC at one noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloCheck<F> {
    pub sigma: F,
    pub draws: usize,
    pub seed: u64,
    pub analytic: F,
    pub estimate: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessResult<F> {
    pub kind: PerturbationKind,
    pub sigma_min: F,
    pub sigma_max: F,
    /// AUROC of the unperturbed cohort.
    pub baseline_auroc: F,
    /// `(sigma, auroc)` samples, sigma strictly increasing.
    pub curve: Vec<(F, F)>,
    /// Integral of the perturbed AUROC over the sigma range.
    pub raw_integral: F,
    /// `raw_integral / baseline_auroc`.
    pub score: F,
    /// `score / (sigma_max − sigma_min)`.
    pub normalized_score: F,
    pub monte_carlo: Option<MonteCarloCheck<F>>,
}

impl<F: Scalar> RobustnessResult<F> {
    fn assemble(
        cohort_name: &str,
        spec: &PerturbationSpec<F>,
        baseline_auroc: F,
        curve: Vec<(F, F)>,
        raw_integral: F,
    ) -> Result<Self> {
        if baseline_auroc.is_zero() {
            return Err(AuditError::ZeroBaseline {
                cohort: cohort_name.to_string(),
            });
        }
        let score = raw_integral.clone() / baseline_auroc.clone();
        let normalized_score = score.clone() / spec.width();
        Ok(RobustnessResult {
            kind: spec.kind,
            sigma_min: spec.sigma_min.clone(),
            sigma_max: spec.sigma_max.clone(),
            baseline_auroc,
            curve,
            raw_integral,
            score,
            normalized_score,
            monte_carlo: None,
        })
    }
}
