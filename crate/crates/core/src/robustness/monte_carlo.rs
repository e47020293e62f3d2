use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cohort::{Cohort, Label, SortedClasses};
use crate::error::{AuditError, Result};
use crate::roc::auroc_sorted;
use crate::scalar::{sort_scalars, Real};

/// Mean AUROC over `draws` replications of the cohort with i.i.d.
/// `N(0, sigma²)` noise added to every score.
///
/// Draw `d` uses ChaCha8 seeded with `seed` on stream `d`, and per-draw
/// results are summed in draw order, so the value is identical for any
/// thread count.
pub fn monte_carlo_noise_auroc<F: Real>(
    cohort: &Cohort<F>,
    sigma: F,
    draws: usize,
    seed: u64,
) -> Result<F> {
    if draws == 0 {
        return Err(AuditError::InvalidSpec("Monte Carlo needs at least one draw".into()));
    }
    if !sigma.is_finite() || sigma <= F::zero() {
        return Err(AuditError::InvalidSpec(format!(
            "Monte Carlo sigma must be positive and finite, got {sigma:?}"
        )));
    }
    SortedClasses::of(cohort)?;
    let sigma = sigma.to_f64_lossy();
    let base: Vec<(f64, Label)> = cohort.iter().map(|(s, l)| (s.to_f64_lossy(), l)).collect();

    let per_draw: Vec<f64> = (0..draws as u64)
        .into_par_iter()
        .map(|draw| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(draw);
            let mut classes = SortedClasses {
                negatives: Vec::new(),
                positives: Vec::new(),
            };
            for &(score, label) in &base {
                let z: f64 = rng.sample(StandardNormal);
                let noisy = score + sigma * z;
                match label {
                    Label::Positive => classes.positives.push(noisy),
                    Label::Negative => classes.negatives.push(noisy),
                }
            }
            sort_scalars(&mut classes.positives);
            sort_scalars(&mut classes.negatives);
            auroc_sorted(&classes)
        })
        .collect();
    let mean = per_draw.iter().sum::<f64>() / draws as f64;
    Ok(F::from_f64(mean).expect("probability fits the scalar type"))
}
