//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on data or I/O errors, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::audit::{analyze_cohort, compare_cohorts, AuditConfig, CohortAnalysis, ComparisonAnalysis};
use crate::cohort::{parse_cohort, Cohort, IngestSchema, InputFormat};
use crate::drift::ThresholdDomain;
use crate::error::AuditError;
use crate::report::{build_report, emit_json, emit_plot_data};
use crate::robustness::{PerturbationKind, PerturbationSpec, DEFAULT_GRID_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "genaudit",
    version,
    about = "Audit binary-classifier generalisability from model outputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one cohort: AUROC and robustness to bias and noise.
    Single {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        options: Options,
    },
    /// Score a validation/test pair: per-cohort scores plus drift and the
    /// Wasserstein class-distance matrix.
    Compare {
        #[arg(long)]
        validation: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[command(flatten)]
        options: Options,
    },
}

#[derive(Debug, Args)]
struct Options {
    #[arg(long, default_value = "score")]
    score_col: String,
    #[arg(long, default_value = "label")]
    label_col: String,
    /// csv or jsonl; inferred from the file extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Bias sigma range LO:HI.
    #[arg(long, default_value = "0:1", value_parser = parse_range, allow_hyphen_values = true)]
    bias_range: (f64, f64),
    /// Noise sigma range LO:HI.
    #[arg(long, default_value = "0:0.5", value_parser = parse_range, allow_hyphen_values = true)]
    noise_range: (f64, f64),
    /// Sigma grid points (noise integration rounds up to odd).
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Monte Carlo draws for the noise cross-check; 0 disables it.
    #[arg(long, default_value_t = 0)]
    mc_draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threshold domain LO:HI for the drift integral.
    #[arg(long, default_value = "0:1", value_parser = parse_range, allow_hyphen_values = true)]
    tau_range: (f64, f64),
    /// Accept scores outside the threshold domain.
    #[arg(long)]
    allow_out_of_domain: bool,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for CSV/SVG plot data.
    #[arg(long)]
    plots: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{text}'"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{s}' is not a finite number"))
    };
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(AuditError),
}

impl From<AuditError> for Failure {
    fn from(err: AuditError) -> Self {
        match err {
            AuditError::InvalidSpec(_) | AuditError::InvalidSchema(_) => Failure::Usage(err.to_string()),
            other => Failure::Data(other),
        }
    }
}

impl Options {
    fn config(&self, first_input: &Path) -> Result<AuditConfig<f64>, Failure> {
        let format = match &self.format {
            Some(f) => f.parse::<InputFormat>()?,
            None => InputFormat::from_path(first_input),
        };
        let schema = IngestSchema::new(&self.score_col, &self.label_col, format)?;
        let bias = PerturbationSpec::new(PerturbationKind::Bias, self.bias_range.0, self.bias_range.1)?
            .with_grid_points(self.grid)?;
        let noise = PerturbationSpec::new(PerturbationKind::Noise, self.noise_range.0, self.noise_range.1)?
            .with_grid_points(self.grid)?
            .with_monte_carlo(self.mc_draws, self.seed);
        let domain = ThresholdDomain::new(self.tau_range.0, self.tau_range.1)?
            .allow_out_of_domain(self.allow_out_of_domain);
        Ok(AuditConfig {
            schema,
            bias,
            noise,
            domain,
        })
    }
}

fn load(path: &Path, schema: &IngestSchema, name: &str) -> Result<Cohort<f64>, AuditError> {
    let file = File::open(path).map_err(|e| AuditError::io(path, e))?;
    parse_cohort(file, schema, name).map_err(|e| match e {
        AuditError::IoFailure { message, .. } => AuditError::IoFailure {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

fn cohort_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .unwrap_or("cohort")
        .to_string()
}

fn summary(cohorts: &[CohortAnalysis<f64>], comparison: Option<&ComparisonAnalysis<f64>>) -> String {
    let mut text = String::new();
    for c in cohorts {
        text.push_str(&format!(
            "{}: n={} (neg {}, pos {})  AUROC {:.4}  bias robustness {:.4} (normalised {:.4})  noise robustness {:.4} (normalised {:.4})\n",
            c.cohort.name(),
            c.cohort.len(),
            c.n_negative(),
            c.n_positive(),
            c.auroc,
            c.bias.score,
            c.bias.normalized_score,
            c.noise.score,
            c.noise.normalized_score,
        ));
    }
    if let Some(cmp) = comparison {
        let w = &cmp.wasserstein.entries;
        text.push_str(&format!(
            "drift: {:.4} (sensitivity {:.4}, specificity {:.4})\n",
            cmp.drift.score, cmp.drift.sensitivity_drift, cmp.drift.specificity_drift
        ));
        text.push_str(&format!(
            "wasserstein:        y_V=1    y_T=0\n  y_V=0        {:8.4} {:8.4}\n  y_T=1        {:8.4} {:8.4}\n",
            w[0][0], w[0][1], w[1][0], w[1][1]
        ));
    }
    text
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let (inputs, options) = match &cli.command {
        Command::Single { input, options } => (vec![(input.clone(), cohort_name(input))], options),
        Command::Compare {
            validation,
            test,
            options,
        } => (
            vec![
                (validation.clone(), "validation".to_string()),
                (test.clone(), "test".to_string()),
            ],
            options,
        ),
    };
    let config = options.config(&inputs[0].0)?;

    let cohorts = inputs
        .iter()
        .map(|(path, name)| load(path, &config.schema, name))
        .collect::<Result<Vec<_>, _>>()?;
    let analyses = cohorts
        .iter()
        .map(|c| analyze_cohort(c, &config))
        .collect::<Result<Vec<_>, _>>()?;
    let comparison = match cohorts.as_slice() {
        [v, t] => Some(compare_cohorts(v, t, &config)?),
        _ => None,
    };

    let report = build_report(&config, &analyses, comparison.as_ref());
    let json = emit_json(&report);
    if let Some(dir) = &options.plots {
        emit_plot_data(dir, &analyses, comparison.as_ref(), &config.domain)?;
    }
    let text = summary(&analyses, comparison.as_ref());
    match &options.out {
        Some(path) => {
            std::fs::write(path, &json).map_err(|e| AuditError::io(path, e))?;
            let _ = stdout.write_all(text.as_bytes());
        }
        None => {
            stdout
                .write_all(&json)
                .map_err(|e| AuditError::io("<stdout>", e))?;
            let _ = stderr.write_all(text.as_bytes());
        }
    }
    Ok(())
}

/// Run the CLI on `args` (including the program name) and return the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = err.render().to_string();
            let sink: &mut dyn Write = if err.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(stderr, "usage error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Data(err)) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_DATA
        }
    }
}
