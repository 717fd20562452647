//! One-dimensional sample grids.

use crate::{Error, Result};

/// `points` evenly spaced samples from `lo` to `hi` inclusive.
///
/// Each node is computed as `lo + (hi - lo) * i / (points - 1)`, so nodes at
/// simple fractions of the span (for example `hi / 2`) are exact.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (points - 1) as f64;
            (0..points).map(|i| lo + (hi - lo) * (i as f64) / last).collect()
        }
    }
}

pub fn ensure_ascending(xs: &[f64]) -> Result<()> {
    if xs.windows(2).all(|w| w[1] > w[0]) && xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::UnsortedGrid)
    }
}

/// Spacing of a uniform grid, or `NonUniformGrid`.
pub fn uniform_spacing(xs: &[f64]) -> Result<f64> {
    ensure_ascending(xs)?;
    if xs.len() < 2 {
        return Err(Error::NonUniformGrid);
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let tol = 1e-9 * h;
    if xs.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= tol) {
        Ok(h)
    } else {
        Err(Error::NonUniformGrid)
    }
}

/// Trapezoid rule on an arbitrary ascending grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints_and_midpoint() {
        let xs = linspace(0.0, 2.0, 201);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[50], 0.5);
        assert_eq!(xs[100], 1.0);
        assert_eq!(xs[200], 2.0);
        assert!(linspace(1.0, 2.0, 0).is_empty());
        assert_eq!(linspace(3.0, 4.0, 1), vec![3.0]);
    }

    #[test]
    fn uniform_spacing_detects_irregular_grids() {
        assert!((uniform_spacing(&linspace(-1.0, 1.0, 11)).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(uniform_spacing(&[0.0, 0.1, 0.3]), Err(Error::NonUniformGrid));
        assert_eq!(uniform_spacing(&[0.0, 0.0, 0.1]), Err(Error::UnsortedGrid));
    }

    #[test]
    fn trapezoid_is_exact_for_linear_functions() {
        let xs = linspace(0.0, 3.0, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((trapezoid(&xs, &ys) - 12.0).abs() < 1e-14);
    }
}
