//! Diagonal photon-number weights `c_{n,n}` of the initial cavity field.
//!
//! Only the diagonal enters the decoherence factor; coherences between
//! different photon numbers drop out when the field is traced over.

use crate::error::invalid;
use crate::{Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Largest photon-number cutoff [`coherent_distribution`] will allocate.
pub const DEFAULT_PHOTON_CAP: usize = 200_000;

/// Relative size below which the far Poisson tail is no longer summed.
const FAR_TAIL: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    Fock { n0: usize },
    Coherent { alpha: f64 },
}

/// Truncated weights `c_{n,n}`, `n = 0..weights.len()`.
///
/// `sum(weights) ∈ [1 − tail_bound, 1]`: `tail_bound` bounds the probability
/// mass beyond the last stored photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDistribution {
    weights: Vec<f64>,
    kind: FieldKind,
    tail_bound: f64,
}

impl FieldDistribution {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Largest stored photon number.
    pub fn cutoff(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum()
    }

    /// `Σ n² c_n − (Σ n c_n)²` over the stored weights.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let second: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(n, w)| (n as f64) * (n as f64) * w)
            .sum();
        second - mean * mean
    }

    /// Nonzero weights with their photon numbers.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().copied().enumerate().filter(|&(_, w)| w > 0.0)
    }
}

pub fn fock_distribution(n0: usize) -> FieldDistribution {
    let mut weights = vec![0.0; n0 + 1];
    weights[n0] = 1.0;
    FieldDistribution {
        weights,
        kind: FieldKind::Fock { n0 },
        tail_bound: 0.0,
    }
}

/// Poisson weights of the coherent state `|α⟩`, truncated at the smallest
/// `N` whose discarded mass is at most `tail_tol`.
pub fn coherent_distribution(alpha: f64, tail_tol: f64) -> Result<FieldDistribution> {
    coherent_distribution_capped(alpha, tail_tol, DEFAULT_PHOTON_CAP)
}

pub fn coherent_distribution_capped(alpha: f64, tail_tol: f64, cap: usize) -> Result<FieldDistribution> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(invalid("tail_tol", format!("{tail_tol} is not in (0, 1)")));
    }
    let pmf = poisson_pmf(alpha, cap)?;
    // Tail sums accumulated from the far end stay accurate far below the
    // rounding level of a forward cumulative sum.
    let mut beyond = pmf.far_tail;
    let mut cutoff = pmf.weights.len() - 1;
    while cutoff > 0 && beyond + pmf.weights[cutoff] <= tail_tol {
        beyond += pmf.weights[cutoff];
        cutoff -= 1;
    }
    Ok(truncate(pmf, alpha, cutoff))
}

/// Poisson weights truncated at an explicit photon number `cutoff`.
pub fn coherent_distribution_with_cutoff(alpha: f64, cutoff: usize) -> Result<FieldDistribution> {
    let pmf = poisson_pmf(alpha, cutoff.max(DEFAULT_PHOTON_CAP))?;
    Ok(truncate(pmf, alpha, cutoff))
}

struct Pmf {
    /// Weights for `n = 0..=hi`, normalized over the full series.
    weights: Vec<f64>,
    /// Bound on the mass beyond `hi`.
    far_tail: f64,
}

fn truncate(pmf: Pmf, alpha: f64, cutoff: usize) -> FieldDistribution {
    let mut weights = pmf.weights;
    if weights.len() <= cutoff {
        // Past the summed series; the far-tail bound already covers these.
        weights.resize(cutoff + 1, 0.0);
    }
    let dropped: f64 = weights[cutoff + 1..].iter().sum();
    weights.truncate(cutoff + 1);
    FieldDistribution {
        weights,
        kind: FieldKind::Coherent { alpha },
        tail_bound: dropped + pmf.far_tail,
    }
}

/// `e^{−α²} α^{2n} / n!` for `n = 0..=hi`, where `hi` is past the point at
/// which the weights fall below `FAR_TAIL` relative to the mode.
///
/// The weights come from the ratio recurrence anchored at the mode and are
/// normalized by their own sum, so neither `e^{−α²}` nor `n!` is formed.
fn poisson_pmf(alpha: f64, cap: usize) -> Result<Pmf> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(invalid(
            "alpha",
            format!("{alpha} is not a finite non-negative number"),
        ));
    }
    let mean = alpha * alpha;
    if mean == 0.0 {
        return Ok(Pmf {
            weights: vec![1.0],
            far_tail: 0.0,
        });
    }
    let mode = mean.floor() as usize;
    if mode > cap {
        return Err(Error::ResourceLimit { needed: mode, cap });
    }

    let mut upper = vec![1.0];
    let mut w = 1.0;
    let mut n = mode;
    loop {
        n += 1;
        w *= mean / n as f64;
        upper.push(w);
        if w < FAR_TAIL && (n as f64) > mean {
            break;
        }
        if n > cap {
            return Err(Error::ResourceLimit { needed: n, cap });
        }
    }
    // Geometric bound on everything past the last term.
    let ratio = mean / (n + 1) as f64;
    let far_rel = w * ratio / (1.0 - ratio);

    let mut lower = Vec::with_capacity(mode);
    let mut w = 1.0;
    for n in (1..=mode).rev() {
        w *= n as f64 / mean;
        lower.push(w);
    }
    lower.reverse();

    let mut weights = lower;
    weights.extend(upper);
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(Pmf {
        weights,
        far_tail: far_rel / total,
    })
}
