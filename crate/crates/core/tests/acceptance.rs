//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every check runs at its stated tolerance against an oracle that
//! is independent of the library's fast paths.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use genaudit::robustness::normal_cdf;
use genaudit::{
    auroc, auroc_pairwise_oracle, bias_perturb, bias_robustness, distance_matrix, drift_score,
    monte_carlo_noise_auroc, noise_expected_auroc, roc_curve, sens_spec_at, wasserstein2, Cohort64,
    Exact, ExactCohort, PerturbationKind, PerturbationSpec, ThresholdDomain,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;
type Map = Box<dyn Fn(f64) -> f64>;
type Criterion = (&'static str, fn() -> Check);

fn seeded(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

/// Scores on a 1/`levels` lattice in [0, 1] so ties are common.
fn lattice_cohort(rng: &mut ChaCha8Rng, n_neg: usize, n_pos: usize, levels: u32) -> Cohort64 {
    let mut draw = |n: usize| -> Vec<f64> {
        (0..n).map(|_| rng.random_range(0..=levels) as f64 / levels as f64).collect()
    };
    let neg = draw(n_neg);
    let pos = draw(n_pos);
    Cohort64::from_classes("c", &neg, &pos).unwrap()
}

fn random_sizes(rng: &mut ChaCha8Rng, total_lo: usize, total_hi: usize) -> (usize, usize) {
    let total = rng.random_range(total_lo..=total_hi);
    let n_pos = rng.random_range(1..total);
    (total - n_pos, n_pos)
}

fn within_time(start: Instant, limit: Duration, detail: String) -> Check {
    let elapsed = start.elapsed();
    if elapsed < limit {
        Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("{detail}; took {:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()))
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = seeded(1);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let (n_neg, n_pos) = random_sizes(&mut rng, 2, 50);
        let levels = rng.random_range(2..=12);
        let c = lattice_cohort(&mut rng, n_neg, n_pos, levels);
        let fast = auroc(&c).map_err(|e| e.to_string())?;
        let slow = auroc_pairwise_oracle(&c).map_err(|e| e.to_string())?;
        let err = (fast - slow).abs();
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("cohort {i}: {fast} vs oracle {slow}"));
        }
    }
    within_time(start, Duration::from_secs(5), format!("1000 cohorts, max |diff| {worst:e}"))
}

fn gaussian(rng: &mut ChaCha8Rng, mean: f64, sd: f64, n: usize) -> Vec<f64> {
    let dist = Normal::new(mean, sd).unwrap();
    (0..n).map(|_| dist.sample(rng)).collect()
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = seeded(2);
    for i in 0..300 {
        let (n_neg, n_pos) = random_sizes(&mut rng, 2, 60);
        let c = lattice_cohort(&mut rng, n_neg, n_pos, 200);
        let a = rng.random_range(0.1..10.0);
        let b = rng.random_range(-5.0..5.0);
        let k = rng.random_range(0.5..4.0);
        let maps: [(&str, Map); 3] = [
            ("affine", Box::new(move |x| a * x + b)),
            ("cubic", Box::new(move |x| a * x * x * x + x)),
            ("exp", Box::new(move |x| (k * x).exp())),
        ];
        let base_curve = roc_curve(&c).unwrap().polyline();
        let base_auc = auroc(&c).unwrap();
        for (name, f) in &maps {
            let mapped = c.map_scores(|s, _| f(*s));
            let curve = roc_curve(&mapped).unwrap().polyline();
            if curve.len() != base_curve.len()
                || curve
                    .iter()
                    .zip(&base_curve)
                    .any(|(p, q)| (p.0 - q.0).abs() > 1e-12 || (p.1 - q.1).abs() > 1e-12)
            {
                return Err(format!("cohort {i}: {name} map changed the ROC polyline"));
            }
            let mapped_auc = auroc(&mapped).unwrap();
            if (mapped_auc - base_auc).abs() > 1e-12 {
                return Err(format!("cohort {i}: {name} map changed AUROC {base_auc} -> {mapped_auc}"));
            }
        }
    }

    // Same ROC, shifted outputs.
    let mut rng = seeded(22);
    let n = 500;
    let v_neg = gaussian(&mut rng, 0.3, 0.05, n);
    let v_pos = gaussian(&mut rng, 0.7, 0.05, n);
    let t_neg = gaussian(&mut rng, 0.55, 0.05, n);
    let t_pos = gaussian(&mut rng, 0.95, 0.05, n);
    let v = Cohort64::from_classes("validation", &v_neg, &v_pos).unwrap();
    let t = Cohort64::from_classes("test", &t_neg, &t_pos).unwrap();
    let (auc_v, auc_t) = (auroc(&v).unwrap(), auroc(&t).unwrap());
    // The step functions are constant outside the data, so widening the
    // domain to cover every score leaves the integral unchanged.
    let domain = ThresholdDomain::new(-1.0, 2.0).unwrap();
    let drift = drift_score(&v, &t, &domain).unwrap().score;
    let w = distance_matrix(&v, &t).unwrap().off_diagonal();
    let detail = format!(
        "900 maps invariant; shift: AUROC {auc_v:.5}/{auc_t:.5}, drift {drift:.4}, W2 off-diagonal {:.4}/{:.4}",
        w[0], w[1]
    );
    if (auc_v - auc_t).abs() > 1e-3 || drift <= 0.05 || w[0] <= 0.2 || w[1] <= 0.2 {
        return Err(detail);
    }
    within_time(start, Duration::from_secs(5), detail)
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[values.len() - 1]))
}

fn criterion_3() -> Check {
    let mut rng = seeded(3);
    let n = 10_001;
    let mut worst_ratio = 0.0f64;
    for i in 0..100 {
        // The score is undefined at zero baseline AUROC; redraw those.
        let c = loop {
            let (n_neg, n_pos) = random_sizes(&mut rng, 2, 24);
            let c = lattice_cohort(&mut rng, n_neg, n_pos, 50);
            if auroc(&c).unwrap() > 0.0 {
                break c;
            }
        };
        let lo = rng.random_range(0.0..0.5);
        let hi = lo + rng.random_range(0.1..1.5);
        let spec = PerturbationSpec::new(PerturbationKind::Bias, lo, hi).unwrap();
        let exact = bias_robustness(&c, &spec).unwrap().raw_integral;
        let h = (hi - lo) / (n - 1) as f64;
        let samples: Vec<f64> = (0..n)
            .map(|k| {
                let sigma = if k == n - 1 { hi } else { lo + k as f64 * h };
                auroc_pairwise_oracle(&bias_perturb(&c, &sigma).unwrap()).unwrap()
            })
            .collect();
        let oracle = trapezoid(&samples, h);
        let bound = 2.0 * (hi - lo) / 1e4;
        let err = (exact - oracle).abs();
        worst_ratio = worst_ratio.max(err / bound);
        if err > bound {
            return Err(format!("cohort {i}: closed form {exact} vs trapezoid {oracle}, bound {bound:e}"));
        }
    }
    let point = Cohort64::from_classes("point", &[0.0], &[1.0]).unwrap();
    let spec = PerturbationSpec::new(PerturbationKind::Bias, 0.0, 2.0).unwrap();
    let score = bias_robustness(&point, &spec).unwrap().score;
    if score != 1.0 {
        return Err(format!("point mass score {score}, expected exactly 1"));
    }
    Ok(format!("100 cohorts, worst error {worst_ratio:.3} of bound; point mass score exactly 1"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = seeded(4);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let (n_neg, n_pos) = random_sizes(&mut rng, 2, 100);
        let neg = gaussian(&mut rng, 0.4, 0.15, n_neg);
        let pos = gaussian(&mut rng, 0.6, 0.15, n_pos);
        let c = Cohort64::from_classes("c", &neg, &pos).unwrap();
        let sigma = rng.random_range(0.02..0.5);
        let analytic = noise_expected_auroc(&c, sigma).unwrap();
        let sampled = monte_carlo_noise_auroc(&c, sigma, 100_000, 2024).unwrap();
        let err = (analytic - sampled).abs();
        worst = worst.max(err);
        if err > 0.01 {
            return Err(format!("cohort {i} at sigma {sigma}: analytic {analytic} vs Monte Carlo {sampled}"));
        }
    }
    let pair = Cohort64::from_classes("pair", &[0.0], &[1.0]).unwrap();
    let single = noise_expected_auroc(&pair, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    if (single - 0.841345).abs() > 1e-6 || (normal_cdf(1.0) - 0.841345).abs() > 1e-6 {
        return Err(format!("single pair {single}, expected 0.841345"));
    }
    within_time(
        start,
        Duration::from_secs(60),
        format!("20 cohorts, max |analytic - MC| {worst:.5}; single pair {single:.7}"),
    )
}

fn midpoint_drift(v: &Cohort64, t: &Cohort64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut total = 0.0;
    for k in 0..n {
        let tau = lo + (k as f64 + 0.5) * h;
        let a = sens_spec_at(v, &tau).unwrap();
        let b = sens_spec_at(t, &tau).unwrap();
        total += (a.sensitivity - b.sensitivity).powi(2) + (a.specificity - b.specificity).powi(2);
    }
    total * h
}

fn exact(text: &str) -> Exact {
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    Exact::new(num.parse().unwrap(), den.parse().unwrap())
}

fn criterion_5() -> Check {
    let mut rng = seeded(5);
    let n = 100_001;
    let mut worst_ratio = 0.0f64;
    for i in 0..100 {
        let (vn, vp) = random_sizes(&mut rng, 2, 20);
        let (tn, tp) = random_sizes(&mut rng, 2, 20);
        let v = lattice_cohort(&mut rng, vn, vp, 40);
        let t = lattice_cohort(&mut rng, tn, tp, 40);
        let lo = rng.random_range(-0.2..0.3);
        let hi = rng.random_range(0.7..1.2);
        let domain = ThresholdDomain::new(lo, hi).unwrap().allow_out_of_domain(true);
        let piecewise = drift_score(&v, &t, &domain).unwrap().score;
        let riemann = midpoint_drift(&v, &t, lo, hi, n);
        let bound = 4.0 * (hi - lo) / 1e5;
        let err = (piecewise - riemann).abs();
        worst_ratio = worst_ratio.max(err / bound);
        if err > bound {
            return Err(format!("pair {i}: piecewise {piecewise} vs Riemann {riemann}, bound {bound:e}"));
        }
    }

    let domain = ThresholdDomain::new(Exact::zero(), Exact::one()).unwrap();
    let v = ExactCohort::from_classes("validation", &[exact("1/5")], &[exact("4/5")]).unwrap();
    let t = ExactCohort::from_classes("test", &[exact("1/5")], &[exact("3/5")]).unwrap();
    let worked = drift_score(&v, &t, &domain).unwrap().score;
    if worked != exact("1/5") {
        return Err(format!("worked example gave {worked}, expected exactly 1/5"));
    }
    let c = lattice_cohort(&mut rng, 15, 12, 30);
    let same = drift_score(&c, &c.clone().with_name("copy"), &ThresholdDomain::default())
        .unwrap()
        .score;
    if same != 0.0 {
        return Err(format!("identical cohorts gave {same}"));
    }
    Ok(format!(
        "100 pairs, worst error {worst_ratio:.3} of bound; worked example = 1/5 exactly; identical = 0"
    ))
}

fn sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()
}

/// W₂ by the midpoint rule on a uniform grid over quantile levels.
fn quantile_grid_w2(a: &[f64], b: &[f64], cells: usize) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let quantile = |xs: &[f64], q: f64| xs[((q * xs.len() as f64) as usize).min(xs.len() - 1)];
    let total: f64 = (0..cells)
        .map(|k| {
            let q = (k as f64 + 0.5) / cells as f64;
            (quantile(&a, q) - quantile(&b, q)).powi(2)
        })
        .sum();
    (total / cells as f64).sqrt()
}

fn criterion_6() -> Check {
    let mut rng = seeded(6);
    for i in 0..1000 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(1..=30)).collect();
        let a = sample(&mut rng, sizes[0]);
        let b = sample(&mut rng, sizes[1]);
        let c = sample(&mut rng, sizes[2]);
        let w = |x: &[f64], y: &[f64]| wasserstein2(x, y).unwrap();
        let (ab, ba, bc, ac) = (w(&a, &b), w(&b, &a), w(&b, &c), w(&a, &c));
        if w(&a, &a) != 0.0 || ab < 0.0 || (ab - ba).abs() > 1e-12 || ac > ab + bc + 1e-9 {
            return Err(format!("triple {i}: metric axiom violated ({ab}, {ba}, {bc}, {ac})"));
        }
        let shift = rng.random_range(-3.0..3.0);
        let moved: Vec<f64> = a.iter().map(|x| x + shift).collect();
        if (w(&a, &moved) - shift.abs()).abs() > 1e-12 {
            return Err(format!("triple {i}: translation by {shift} gave {}", w(&a, &moved)));
        }
    }
    for i in 0..200 {
        let n = rng.random_range(1..=40);
        let mut a = sample(&mut rng, n);
        let mut b = sample(&mut rng, n);
        let got = wasserstein2(&a, &b).unwrap();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let rms = (a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / n as f64).sqrt();
        if (got - rms).abs() > 1e-12 {
            return Err(format!("equal sizes {i}: {got} vs RMS {rms}"));
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=25);
        let m = loop {
            let m = rng.random_range(1..=25);
            if m != n {
                break m;
            }
        };
        let a = sample(&mut rng, n);
        let b = sample(&mut rng, m);
        let got = wasserstein2(&a, &b).unwrap();
        let oracle = quantile_grid_w2(&a, &b, 1_000_000);
        worst = worst.max((got - oracle).abs());
        if (got - oracle).abs() > 1e-5 {
            return Err(format!("sizes {n}/{m}: {got} vs quantile grid {oracle}"));
        }
    }
    Ok(format!("1000 triples, 200 RMS cases, 20 unequal sizes (max |diff| {worst:.1e})"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn compare_args(out: &Path, plots: &Path) -> Vec<String> {
    [
        "compare",
        "--validation",
        data("validation.csv").to_str().unwrap(),
        "--test",
        data("test.csv").to_str().unwrap(),
        "--mc-draws",
        "2000",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
        "--plots",
        plots.to_str().unwrap(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn run_cli(args: &[String]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_genaudit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(format!(
            "genaudit exited with {}: {}",
            status.status,
            String::from_utf8_lossy(&status.stderr)
        ))
    }
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut artifacts = Vec::new();
    for run in 0..3 {
        let root = dir.path().join(format!("run{run}"));
        let plots = root.join("plots");
        let out = root.join("report.json");
        std::fs::create_dir_all(&root).map_err(|e| e.to_string())?;
        run_cli(&compare_args(&out, &plots))?;
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&plots)
            .map_err(|e| e.to_string())?
            .map(|entry| {
                let path = entry.unwrap().path();
                (path.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&path).unwrap())
            })
            .collect();
        files.sort();
        files.push(("report.json".into(), std::fs::read(&out).map_err(|e| e.to_string())?));
        artifacts.push(files);
    }
    let csv_count = artifacts[0].iter().filter(|(name, _)| name.ends_with(".csv")).count();
    if artifacts.iter().any(|a| *a != artifacts[0]) {
        return Err("artifacts differ between runs".into());
    }
    Ok(format!("3 runs, {} files ({csv_count} CSV) byte-identical", artifacts[0].len()))
}

fn criterion_8() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("report.json");
    run_cli(&compare_args(&out, &dir.path().join("plots")))?;
    let produced = std::fs::read(&out).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_slice(&produced).map_err(|e| e.to_string())?;

    if report["schema_version"] != "1.0" {
        return Err(format!("schema_version {}", report["schema_version"]));
    }
    let config = &report["config"];
    let echoed = [
        (&config["input_format"], serde_json::json!("csv")),
        (&config["noise"]["mc_draws"], serde_json::json!(2000)),
        (&config["noise"]["mc_seed"], serde_json::json!(7)),
        (&config["bias"]["sigma_max"], serde_json::json!(1)),
        (&config["noise"]["sigma_max"], serde_json::json!(0.5)),
        (&config["threshold_domain"]["tau_max"], serde_json::json!(1)),
    ];
    if let Some((got, want)) = echoed.iter().find(|(got, want)| *got != want) {
        return Err(format!("configuration echo {got}, expected {want}"));
    }
    for name in ["validation", "test"] {
        let cohort = &report["per_cohort"][name];
        for key in ["auroc", "n_samples", "n_negative", "n_positive"] {
            if cohort[key].is_null() {
                return Err(format!("{name} lacks {key}"));
            }
        }
        for kind in ["bias", "noise"] {
            for key in ["raw_integral", "score", "normalized_score", "baseline_auroc", "curve"] {
                if cohort[kind][key].is_null() {
                    return Err(format!("{name}.{kind} lacks {key}"));
                }
            }
        }
        if cohort["noise"]["monte_carlo"]["estimate"].is_null() {
            return Err(format!("{name} lacks the Monte Carlo block"));
        }
    }
    let cmp = &report["comparison"];
    for key in ["score", "sensitivity_drift", "specificity_drift", "segments"] {
        if cmp["drift"][key].is_null() {
            return Err(format!("drift lacks {key}"));
        }
    }
    if cmp["wasserstein"]["entries"].as_array().map(Vec::len) != Some(2) {
        return Err("wasserstein matrix is not 2x2".into());
    }

    let golden = std::fs::read(data("golden_report.json")).map_err(|e| e.to_string())?;
    if produced != golden {
        return Err("report differs from tests/data/golden_report.json".into());
    }
    let auc = report["per_cohort"]["validation"]["auroc"].as_f64().unwrap();
    let drift = cmp["drift"]["score"].as_f64().unwrap();
    Ok(format!("matches golden report (validation AUROC {auc:.4}, drift {drift:.4})"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AUROC oracle equivalence", criterion_1),
        ("monotone invariance and shift", criterion_2),
        ("bias closed form", criterion_3),
        ("noise analytic vs Monte Carlo", criterion_4),
        ("drift integral exactness", criterion_5),
        ("Wasserstein properties", criterion_6),
        ("CLI determinism", criterion_7),
        ("end-to-end compare", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
