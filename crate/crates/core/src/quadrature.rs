//! Uniform grids and composite Simpson quadrature.

use crate::scalar::Scalar;

/// `points` equally spaced nodes from `lo` to `hi` inclusive.
///
/// Node `k` is computed as `lo + k·(hi − lo)/(points − 1)`, and the last
/// node is pinned to `hi` exactly.
pub fn uniform_grid<F: Scalar>(lo: &F, hi: &F, points: usize) -> Vec<F> {
    assert!(points >= 2, "a grid needs at least two points");
    let steps = F::from_count((points - 1) as u64);
    let width = hi.clone() - lo.clone();
    let mut grid: Vec<F> = (0..points)
        .map(|k| lo.clone() + width.clone() * F::from_count(k as u64) / steps.clone())
        .collect();
    grid[points - 1] = hi.clone();
    grid
}

/// Composite Simpson's rule over samples on a uniform grid of spacing `step`.
///
/// `values.len()` must be odd and at least 3.
pub fn composite_simpson<F: Scalar>(values: &[F], step: &F) -> F {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number (>= 3) of samples");
    let two = F::from_count(2);
    let four = F::from_count(4);
    let mut acc = values[0].clone() + values[n - 1].clone();
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        let weight = if i % 2 == 1 { four.clone() } else { two.clone() };
        acc = acc + weight * v.clone();
    }
    acc * step.clone() / F::from_count(3)
}

/// Smallest odd count that is at least `points`.
pub fn odd_at_least(points: usize) -> usize {
    if points.is_multiple_of(2) {
        points + 1
    } else {
        points
    }
}
