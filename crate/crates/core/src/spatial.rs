//! Relative-position coherence of the atom pair.
//!
//! Tracing out the field, the center of mass and the internal states leaves
//! `ρ(x, x′, t) = φ(x, t) φ*(x′, t) F(x, x′, t)`. The decoherence factor
//!
//! ```text
//! F(x, x′, t) = Σₙ c_{n,n} { D₁²(n,t) + D₃²(n,t) + 2|D₂(n,t)|² cos[k(x − x′)/2] }
//! ```
//!
//! is affine in `cos[k(x − x′)/2]`, equals 1 on the diagonal, and equals 1
//! along `x′ = −x` whenever `x` is a whole number of wavelengths.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dressed::evolution_amplitudes;
use crate::error::invalid;
use crate::field::FieldDistribution;
use crate::grid::{ensure_ascending, linspace};
use crate::{Error, Result};

/// Minimum number of grid points per packet spread `d`.
pub const MIN_POINTS_PER_SPREAD: usize = 8;
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Two Gaussian packets of spread `d` centred at `±a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialScenario {
    a: f64,
    d: f64,
    lambda: f64,
    recoil_sigma: f64,
}

impl SpatialScenario {
    /// Requires `0 < d ≤ a`, `λ > 0`, `σ ≥ 0`.
    pub fn new(a: f64, d: f64, lambda: f64, recoil_sigma: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("d", format!("spread must be positive, got {d}")));
        }
        if !(a >= d && a.is_finite()) {
            return Err(invalid("a", format!("need d <= a, got a = {a}, d = {d}")));
        }
        Self::checked(a, d, lambda, recoil_sigma)
    }

    /// A single packet of spread `d` centred at the origin (`a = 0`).
    pub fn single_packet(d: f64, lambda: f64, recoil_sigma: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("d", format!("spread must be positive, got {d}")));
        }
        Self::checked(0.0, d, lambda, recoil_sigma)
    }

    fn checked(a: f64, d: f64, lambda: f64, recoil_sigma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(
                "lambda",
                format!("wavelength must be positive, got {lambda}"),
            ));
        }
        if !(recoil_sigma >= 0.0 && recoil_sigma.is_finite()) {
            return Err(invalid(
                "recoil_sigma",
                format!("must be non-negative, got {recoil_sigma}"),
            ));
        }
        Ok(SpatialScenario {
            a,
            d,
            lambda,
            recoil_sigma,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn recoil_sigma(&self) -> f64 {
        self.recoil_sigma
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda
    }

    /// Normalization `δ = 1 + exp(−a²/(2d²))`.
    pub fn overlap(&self) -> f64 {
        1.0 + (-self.a * self.a / (2.0 * self.d * self.d)).exp()
    }

    /// Half-width a density grid has to cover.
    pub fn support_half_width(&self) -> f64 {
        if self.a > 0.0 {
            2.0 * self.a
        } else {
            4.0 * self.d
        }
    }

    /// Default `[−2a, 2a]` grid with [`DEFAULT_GRID_POINTS`] nodes.
    pub fn default_grid(&self) -> Vec<f64> {
        let r = self.support_half_width();
        linspace(-r, r, DEFAULT_GRID_POINTS)
    }
}

/// `φ(x, 0) = [G₊(x) + G₋(x)] / √(2δ)`.
pub fn gaussian_superposition(scn: &SpatialScenario, x: f64) -> f64 {
    let d = scn.d;
    let norm = (std::f64::consts::TAU.sqrt() * d).powf(-0.5);
    let g = |c: f64| norm * (-(x + c) * (x + c) / (4.0 * d * d)).exp();
    (g(scn.a) + g(-scn.a)) / (2.0 * scn.overlap()).sqrt()
}

/// Relative wavefunction after free evolution for time `t` with the
/// relative-coordinate kinetic energy `p²/m₀`, where `m₀ = ħk/(2dσ)`.
///
/// Each Gaussian spreads as `d²(1 + iτ)` with `τ = ħt/(m₀d²) = 2σt/(kd)`.
pub fn free_evolution_wavefunction(scn: &SpatialScenario, x: f64, t: f64) -> Complex64 {
    let d = scn.d;
    let tau = 2.0 * scn.recoil_sigma * t / (scn.wavenumber() * d);
    let spread = Complex64::new(1.0, tau);
    let norm = (std::f64::consts::TAU.sqrt() * d).powf(-0.5) / spread.sqrt();
    let g = |c: f64| norm * (-(x + c) * (x + c) / (4.0 * d * d * spread)).exp();
    (g(scn.a) + g(-scn.a)) / (2.0 * scn.overlap()).sqrt()
}

/// The two field-averaged sums that fix `F` at one instant:
/// `F = diag + cross·cos[k(x − x′)/2]`, normalized by the stored field mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorCoefficients {
    pub diag: f64,
    pub cross: f64,
}

impl FactorCoefficients {
    pub fn at(field: &FieldDistribution, t: f64) -> Self {
        let mut diag = 0.0;
        let mut cross = 0.0;
        let mut mass = 0.0;
        for (n, c) in field.iter() {
            let amp = evolution_amplitudes(n, t, 1.0);
            diag += c * (amp.d1 * amp.d1 + amp.d3 * amp.d3);
            cross += c * 2.0 * amp.d2.norm_sqr();
            mass += c;
        }
        FactorCoefficients {
            diag: diag / mass,
            cross: cross / mass,
        }
    }

    pub fn eval(&self, k: f64, x: f64, xp: f64) -> f64 {
        self.diag + self.cross * (0.5 * k * (x - xp)).cos()
    }
}

/// `F(x, x′, t)` summed block by block.
pub fn decoherence_factor(field: &FieldDistribution, k: f64, x: f64, xp: f64, t: f64) -> f64 {
    let phase = (0.5 * k * (x - xp)).cos();
    let mut sum = 0.0;
    let mut mass = 0.0;
    for (n, c) in field.iter() {
        let amp = evolution_amplitudes(n, t, 1.0);
        sum += c * (amp.d1 * amp.d1 + amp.d3 * amp.d3 + 2.0 * amp.d2.norm_sqr() * phase);
        mass += c;
    }
    sum / mass
}

/// `F(x, −x, t)`, where the phase becomes `cos(kx)`.
pub fn antidiagonal_factor(field: &FieldDistribution, k: f64, x: f64, t: f64) -> f64 {
    decoherence_factor(field, k, x, -x, t)
}

/// `ρ(x, x′, t)` sampled on `xs × xs`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeDensityGrid {
    xs: Vec<f64>,
    values: Vec<Complex64>,
    time: f64,
    scenario: SpatialScenario,
}

impl RelativeDensityGrid {
    /// Samples an arbitrary kernel `ρ(x, x′)` on `xs × xs`.
    pub fn from_fn(
        xs: Vec<f64>,
        time: f64,
        scenario: SpatialScenario,
        rho: impl Fn(f64, f64) -> Complex64 + Sync,
    ) -> Result<Self> {
        ensure_ascending(&xs)?;
        let nodes = xs.clone();
        Ok(Self::build(xs, time, scenario, |i, j| rho(nodes[i], nodes[j])))
    }

    fn build(
        xs: Vec<f64>,
        time: f64,
        scenario: SpatialScenario,
        entry: impl Fn(usize, usize) -> Complex64 + Sync,
    ) -> Self {
        let n = xs.len();
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        values.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = entry(i, j);
            }
        });
        RelativeDensityGrid {
            xs,
            values,
            time,
            scenario,
        }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn scenario(&self) -> &SpatialScenario {
        &self.scenario
    }

    /// Row-major `n × n` values.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.xs.len() + j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i, i).re).collect()
    }

    /// `max |ρᵢⱼ − ρ*ⱼᵢ|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Trapezoid-rule `∫ρ(x, x) dx`.
    pub fn trace(&self) -> f64 {
        crate::grid::trapezoid(&self.xs, &self.diagonal())
    }
}

/// Frozen-motion density matrix `ρ(x, x′, t) = φ(x,0) φ(x′,0) F(x, x′, t)`.
///
/// The grid has to be ascending, cover the packets (`[−2a, 2a]`) and resolve
/// the spread with at least [`MIN_POINTS_PER_SPREAD`] points per `d`.
pub fn frozen_density(
    scn: &SpatialScenario,
    field: &FieldDistribution,
    t: f64,
    xs: &[f64],
) -> Result<RelativeDensityGrid> {
    check_density_grid(scn, xs)?;
    let k = scn.wavenumber();
    let coeffs = FactorCoefficients::at(field, t);
    let phi: Vec<f64> = xs.iter().map(|&x| gaussian_superposition(scn, x)).collect();
    Ok(RelativeDensityGrid::build(xs.to_vec(), t, *scn, |i, j| {
        let f = coeffs.eval(k, xs[i], xs[j]);
        Complex64::new(phi[i] * phi[j] * f, 0.0)
    }))
}

fn check_density_grid(scn: &SpatialScenario, xs: &[f64]) -> Result<()> {
    ensure_ascending(xs)?;
    let r = scn.support_half_width();
    let slack = 1e-12 * r;
    match (xs.first(), xs.last()) {
        (Some(&lo), Some(&hi)) if lo <= -r + slack && hi >= r - slack => {}
        _ => return Err(Error::Coverage { lo: -r, hi: r }),
    }
    let limit = scn.d / MIN_POINTS_PER_SPREAD as f64;
    let spacing = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if spacing > limit * (1.0 + 1e-12) {
        return Err(Error::Resolution {
            spacing,
            per_spread: MIN_POINTS_PER_SPREAD,
            limit,
        });
    }
    Ok(())
}
