//! Versioned JSON report and plot-data artifacts.
//!
//! Key order is the declaration order of the structs below and is listed
//! in `docs/report_schema.md`. Reals are written with 17 significant digits.

mod plots;

pub use plots::{emit_plot_data, render_roc_svg, PLOT_COLOUR_RAMP};

use serde::ser::{Error as _, SerializeMap};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::audit::{AuditConfig, CohortAnalysis, ComparisonAnalysis};
use crate::drift::{MATRIX_COLUMN_LABELS, MATRIX_ROW_LABELS};
use crate::numfmt::format_g17;
use crate::quadrature::odd_at_least;
use crate::robustness::RobustnessResult;
use crate::roc::DECISION_RULE;

pub const SCHEMA_VERSION: &str = "1.0";

/// A real rendered as `%.17g` in JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real17(pub f64);

impl Serialize for Real17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {} in report", self.0)));
        }
        RawValue::from_string(format_g17(self.0))
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub decision_rule: &'static str,
    pub config: ConfigEcho,
    #[serde(serialize_with = "ordered_map")]
    pub per_cohort: Vec<(String, CohortReport)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub input_format: &'static str,
    pub score_column: String,
    pub label_column: String,
    pub bias: PerturbationEcho,
    pub noise: PerturbationEcho,
    pub threshold_domain: DomainEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationEcho {
    pub sigma_min: Real17,
    pub sigma_max: Real17,
    pub grid_points: usize,
    /// Points actually used by the integrator (Simpson forces an odd count).
    pub integration_points: usize,
    pub integration: &'static str,
    pub mc_draws: usize,
    pub mc_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainEcho {
    pub tau_min: Real17,
    pub tau_max: Real17,
    pub allow_out_of_domain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortReport {
    pub name: String,
    pub n_samples: usize,
    pub n_negative: usize,
    pub n_positive: usize,
    pub auroc: Real17,
    pub bias: RobustnessReport,
    pub noise: RobustnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub sigma_min: Real17,
    pub sigma_max: Real17,
    pub baseline_auroc: Real17,
    pub raw_integral: Real17,
    pub score: Real17,
    pub normalized_score: Real17,
    /// `[sigma, auroc]` pairs.
    pub curve: Vec<[Real17; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub sigma: Real17,
    pub draws: usize,
    pub seed: u64,
    pub analytic: Real17,
    pub estimate: Real17,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub validation: String,
    pub test: String,
    pub drift: DriftReport,
    pub wasserstein: WassersteinReport,
    pub drift_curve: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub score: Real17,
    pub sensitivity_drift: Real17,
    pub specificity_drift: Real17,
    pub tau_min: Real17,
    pub tau_max: Real17,
    pub segments: Vec<SegmentReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentReport {
    pub tau_lo: Real17,
    pub tau_hi: Real17,
    pub squared_gap: Real17,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WassersteinReport {
    pub rows: [&'static str; 2],
    pub columns: [&'static str; 2],
    pub entries: [[Real17; 2]; 2],
}

fn ordered_map<S: Serializer>(entries: &[(String, CohortReport)], serializer: S) -> Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(entries.len()))?;
    for (key, value) in entries {
        map.serialize_entry(key, value)?;
    }
    map.end()
}

fn echo_perturbation(spec: &crate::robustness::PerturbationSpec<f64>, simpson: bool) -> PerturbationEcho {
    PerturbationEcho {
        sigma_min: Real17(*spec.sigma_min()),
        sigma_max: Real17(*spec.sigma_max()),
        grid_points: spec.grid_points(),
        integration_points: if simpson {
            odd_at_least(spec.grid_points())
        } else {
            spec.grid_points()
        },
        integration: if simpson {
            "composite_simpson"
        } else {
            "exact_closed_form"
        },
        mc_draws: spec.mc_draws(),
        mc_seed: spec.mc_seed(),
    }
}

fn robustness_report(r: &RobustnessResult<f64>) -> RobustnessReport {
    RobustnessReport {
        sigma_min: Real17(r.sigma_min),
        sigma_max: Real17(r.sigma_max),
        baseline_auroc: Real17(r.baseline_auroc),
        raw_integral: Real17(r.raw_integral),
        score: Real17(r.score),
        normalized_score: Real17(r.normalized_score),
        curve: r.curve.iter().map(|&(s, a)| [Real17(s), Real17(a)]).collect(),
        monte_carlo: r.monte_carlo.as_ref().map(|mc| MonteCarloReport {
            sigma: Real17(mc.sigma),
            draws: mc.draws,
            seed: mc.seed,
            analytic: Real17(mc.analytic),
            estimate: Real17(mc.estimate),
        }),
    }
}

/// Assemble the report. `comparison`, when given, is taken to be between
/// `cohorts[0]` (validation) and `cohorts[1]` (test).
pub fn build_report(
    config: &AuditConfig<f64>,
    cohorts: &[CohortAnalysis<f64>],
    comparison: Option<&ComparisonAnalysis<f64>>,
) -> Report {
    let per_cohort = cohorts
        .iter()
        .map(|c| {
            let name = c.cohort.name().to_string();
            let report = CohortReport {
                name: name.clone(),
                n_samples: c.cohort.len(),
                n_negative: c.n_negative(),
                n_positive: c.n_positive(),
                auroc: Real17(c.auroc),
                bias: robustness_report(&c.bias),
                noise: robustness_report(&c.noise),
            };
            (name, report)
        })
        .collect();

    let comparison = comparison.map(|cmp| {
        assert!(cohorts.len() == 2, "a comparison needs exactly two cohorts");
        let w = &cmp.wasserstein.entries;
        ComparisonReport {
            validation: cohorts[0].cohort.name().to_string(),
            test: cohorts[1].cohort.name().to_string(),
            drift: DriftReport {
                score: Real17(cmp.drift.score),
                sensitivity_drift: Real17(cmp.drift.sensitivity_drift),
                specificity_drift: Real17(cmp.drift.specificity_drift),
                tau_min: Real17(cmp.drift.tau_min),
                tau_max: Real17(cmp.drift.tau_max),
                segments: cmp
                    .drift
                    .segments
                    .iter()
                    .map(|s| SegmentReport {
                        tau_lo: Real17(s.tau_lo),
                        tau_hi: Real17(s.tau_hi),
                        squared_gap: Real17(s.squared_gap),
                    })
                    .collect(),
            },
            wasserstein: WassersteinReport {
                rows: MATRIX_ROW_LABELS,
                columns: MATRIX_COLUMN_LABELS,
                entries: [
                    [Real17(w[0][0]), Real17(w[0][1])],
                    [Real17(w[1][0]), Real17(w[1][1])],
                ],
            },
            drift_curve: "drift.csv",
        }
    });

    Report {
        schema_version: SCHEMA_VERSION,
        decision_rule: DECISION_RULE,
        config: ConfigEcho {
            input_format: config.schema.format().as_str(),
            score_column: config.schema.score_column().to_string(),
            label_column: config.schema.label_column().to_string(),
            bias: echo_perturbation(&config.bias, false),
            noise: echo_perturbation(&config.noise, true),
            threshold_domain: DomainEcho {
                tau_min: Real17(*config.domain.tau_min()),
                tau_max: Real17(*config.domain.tau_max()),
                allow_out_of_domain: config.domain.allows_out_of_domain(),
            },
        },
        per_cohort,
        comparison,
    }
}

/// Pretty-printed, newline-terminated JSON.
///
/// Panics if the report holds a non-finite number; every producer in this
/// crate yields finite values.
pub fn emit_json(report: &Report) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(report).expect("report values are finite");
    out.push(b'\n');
    out
}
