use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::audit::{CohortAnalysis, ComparisonAnalysis};
use crate::drift::{ThresholdDomain, MATRIX_COLUMN_LABELS, MATRIX_ROW_LABELS};
use crate::error::{AuditError, Result};
use crate::numfmt::format_g17;
use crate::roc::RocCurve;

/// Colour ramp used for ROC segments, also embedded in each SVG.
pub const PLOT_COLOUR_RAMP: &str = "linear RGB ramp over the threshold domain: \
rgb(255,0,0) at tau_min to rgb(0,0,255) at tau_max; thresholds outside the \
domain are clamped; each segment takes the threshold of its upper-right end";

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Write CSV (and SVG) plot data into `dir`, returning the paths written.
///
/// Per cohort: `roc_<name>.csv`, `roc_<name>.svg`,
/// `robustness_<name>_bias.csv`, `robustness_<name>_noise.csv`. With a
/// comparison: `drift.csv` and `wasserstein.csv`.
pub fn emit_plot_data(
    dir: &Path,
    cohorts: &[CohortAnalysis<f64>],
    comparison: Option<&ComparisonAnalysis<f64>>,
    domain: &ThresholdDomain<f64>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| AuditError::io(dir, e))?;
    let mut written = Vec::new();
    let mut write = |name: String, contents: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| AuditError::io(&path, e))?;
        written.push(path);
        Ok(())
    };

    for analysis in cohorts {
        let stem = file_stem(analysis.cohort.name());
        write(format!("roc_{stem}.csv"), roc_csv(&analysis.roc))?;
        write(
            format!("roc_{stem}.svg"),
            render_roc_svg(&analysis.roc, domain, analysis.cohort.name()),
        )?;
        for result in [&analysis.bias, &analysis.noise] {
            let mut csv = String::from("sigma,auroc\n");
            for &(sigma, auroc) in &result.curve {
                writeln!(csv, "{},{}", format_g17(sigma), format_g17(auroc)).unwrap();
            }
            write(format!("robustness_{stem}_{}.csv", result.kind), csv)?;
        }
    }

    if let Some(cmp) = comparison {
        let mut csv = String::from("tau,sens_v,sens_t,spec_v,spec_t,squared_gap\n");
        for row in cmp.drift.per_component_curve() {
            let cells = [row.tau, row.sens_v, row.sens_t, row.spec_v, row.spec_t, row.squared_gap];
            let cells: Vec<String> = cells.iter().map(|&v| format_g17(v)).collect();
            writeln!(csv, "{}", cells.join(",")).unwrap();
        }
        write("drift.csv".to_string(), csv)?;

        let e = &cmp.wasserstein.entries;
        let mut csv = format!(",{},{}\n", MATRIX_COLUMN_LABELS[0], MATRIX_COLUMN_LABELS[1]);
        for (label, row) in MATRIX_ROW_LABELS.iter().zip(e) {
            writeln!(csv, "{label},{},{}", format_g17(row[0]), format_g17(row[1])).unwrap();
        }
        write("wasserstein.csv".to_string(), csv)?;
    }
    Ok(written)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn roc_csv(curve: &RocCurve<f64>) -> String {
    let mut csv = String::from("tau,fpr,tpr\n");
    for p in curve.points() {
        writeln!(
            csv,
            "{},{},{}",
            format_g17(p.threshold.to_f64()),
            format_g17(p.fpr),
            format_g17(p.tpr)
        )
        .unwrap();
    }
    csv
}

fn ramp(tau: f64, domain: &ThresholdDomain<f64>) -> (u8, u8, u8) {
    let t = ((tau - domain.tau_min()) / domain.width()).clamp(0.0, 1.0);
    let blue = (255.0 * t).round() as u8;
    (255 - blue, 0, blue)
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// ROC polyline as SVG, one `<path>` per segment coloured by threshold.
pub fn render_roc_svg(curve: &RocCurve<f64>, domain: &ThresholdDomain<f64>, title: &str) -> String {
    let plot = SIZE - 2.0 * MARGIN;
    let x = |fpr: f64| MARGIN + fpr * plot;
    let y = |tpr: f64| SIZE - MARGIN - tpr * plot;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        svg,
        "<metadata>{} (tau_min={}, tau_max={})</metadata>",
        PLOT_COLOUR_RAMP,
        format_g17(*domain.tau_min()),
        format_g17(*domain.tau_max())
    )
    .unwrap();
    writeln!(svg, "<title>ROC {}</title>", escape_xml(title)).unwrap();
    writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="#888888"/>"##
    )
    .unwrap();
    writeln!(
        svg,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#cccccc" stroke-dasharray="4 4"/>"##,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">false positive rate</text>"#,
        SIZE / 2.0,
        SIZE - 10.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="12" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 12 {})">true positive rate</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    )
    .unwrap();
    for pair in curve.points().windows(2) {
        let tau = pair[1].threshold.to_f64();
        let (r, g, b) = ramp(tau, domain);
        writeln!(
            svg,
            r#"<path d="M {:.3} {:.3} L {:.3} {:.3}" stroke="rgb({r},{g},{b})" stroke-width="2" fill="none" data-tau="{}"/>"#,
            x(pair[0].fpr),
            y(pair[0].tpr),
            x(pair[1].fpr),
            y(pair[1].tpr),
            format_g17(tau)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}
