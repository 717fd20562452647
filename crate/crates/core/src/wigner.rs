//! Wigner function of a relative-position density grid.
//!
//! `W(x, p) = (1/2πħ) ∫ ρ(x + y/2, x − y/2) e^{−ipy/ħ} dy` with `ħ = 1`.
//!
//! On a uniform grid `x_j = x_0 + jh`, every pair `(j, l)` gives
//! `x + y/2 = x_j` and `x − y/2 = x_l` for `x = (x_j + x_l)/2`,
//! `y = (j − l)h`. The transform is therefore evaluated on the pair-center
//! grid of spacing `h/2` with samples taken straight from the density
//! matrix, no interpolation. For a fixed center the `y` samples are `2h`
//! apart, so momenta must stay below `π/(2h)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::grid::{ensure_ascending, linspace, trapezoid, uniform_spacing};
use crate::spatial::{RelativeDensityGrid, SpatialScenario};
use crate::{Error, Result};

pub const DEFAULT_MOMENTUM_POINTS: usize = 256;
/// Default momentum half-width in units of `ħ/d`.
pub const DEFAULT_MOMENTUM_EXTENT: f64 = 4.0;

/// Imaginary residue above which a transform is reported as non-Hermitian.
pub const MAX_IMAG_RESIDUE: f64 = 1e-10;

/// `±4ħ/d` with 256 points.
pub fn default_momentum_grid(d: f64) -> Vec<f64> {
    let pmax = DEFAULT_MOMENTUM_EXTENT / d;
    linspace(-pmax, pmax, DEFAULT_MOMENTUM_POINTS)
}

/// Real `W(x, p)` on `xs × ps`, row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    xs: Vec<f64>,
    ps: Vec<f64>,
    values: Vec<f64>,
    time: f64,
    scenario: SpatialScenario,
    norm_defect: f64,
    imag_residue: f64,
}

impl WignerGrid {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ps(&self) -> &[f64] {
        &self.ps
    }

    /// Row-major `xs.len() × ps.len()` values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn scenario(&self) -> &SpatialScenario {
        &self.scenario
    }

    /// `|∫∫W dx dp − 1|`.
    pub fn norm_defect(&self) -> f64 {
        self.norm_defect
    }

    /// Largest imaginary part discarded by the transform.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn get(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.ps.len() + ip]
    }

    /// The `p`-slice at position index `ix`.
    pub fn row(&self, ix: usize) -> &[f64] {
        let np = self.ps.len();
        &self.values[ix * np..(ix + 1) * np]
    }

    /// Index of the grid position closest to `x`.
    pub fn nearest_x(&self, x: f64) -> usize {
        self.xs
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// `∫W(x, p) dp` at every grid position.
    pub fn position_marginal(&self) -> Vec<f64> {
        (0..self.xs.len())
            .map(|ix| trapezoid(&self.ps, self.row(ix)))
            .collect()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max_p |W(x, p)|` at the position nearest `x`.
    pub fn fringe_envelope(&self, x: f64) -> f64 {
        self.row(self.nearest_x(x))
            .iter()
            .fold(0.0, |m, w| f64::max(m, w.abs()))
    }
}

pub fn wigner_transform(density: &RelativeDensityGrid, ps: &[f64]) -> Result<WignerGrid> {
    let xs = density.xs();
    let h = uniform_spacing(xs)?;
    ensure_ascending(ps)?;
    let limit = std::f64::consts::PI / (2.0 * h);
    if let Some(&p) = ps.iter().find(|p| p.abs() >= limit) {
        return Err(Error::Nyquist { p, limit });
    }

    let n = xs.len();
    let np = ps.len();
    let offsets = 2 * n - 1;
    // phase[ip][m + n − 1] = e^{−i p m h}
    let phase: Vec<Complex64> = ps
        .iter()
        .flat_map(|&p| {
            (0..offsets).map(move |m| Complex64::from_polar(1.0, -p * (m as f64 - (n - 1) as f64) * h))
        })
        .collect();

    let weight = 2.0 * h / std::f64::consts::TAU;
    let rows: Vec<(Vec<f64>, f64)> = (0..offsets)
        .into_par_iter()
        .map(|s| {
            let j_lo = s.saturating_sub(n - 1);
            let j_hi = s.min(n - 1);
            let mut row = Vec::with_capacity(np);
            let mut residue: f64 = 0.0;
            for ip in 0..np {
                let table = &phase[ip * offsets..(ip + 1) * offsets];
                let mut acc = Complex64::new(0.0, 0.0);
                for j in j_lo..=j_hi {
                    let l = s - j;
                    acc += density.get(j, l) * table[j + n - 1 - l];
                }
                acc *= weight;
                row.push(acc.re);
                residue = residue.max(acc.im.abs());
            }
            (row, residue)
        })
        .collect();

    let wxs: Vec<f64> = (0..offsets).map(|s| 0.5 * (xs[s / 2] + xs[s - s / 2])).collect();
    let imag_residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let values: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();

    let mut grid = WignerGrid {
        xs: wxs,
        ps: ps.to_vec(),
        values,
        time: density.time(),
        scenario: *density.scenario(),
        norm_defect: 0.0,
        imag_residue,
    };
    let total = trapezoid(&grid.xs, &grid.position_marginal());
    grid.norm_defect = (total - 1.0).abs();
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::coherent_distribution;
    use crate::spatial::{frozen_density, gaussian_superposition, SpatialScenario};

    #[test]
    fn rejects_nonuniform_and_aliased_grids() {
        let scn = SpatialScenario::single_packet(0.1, 1.0, 0.0).unwrap();
        let xs = vec![-0.4, -0.39, -0.3, 0.4];
        let rho = RelativeDensityGrid::from_fn(xs, 0.0, scn, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(wigner_transform(&rho, &[0.0]), Err(Error::NonUniformGrid));

        let xs = linspace(-0.4, 0.4, 81);
        let rho = RelativeDensityGrid::from_fn(xs, 0.0, scn, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        // h = 0.01, Nyquist limit π/0.02 ≈ 157
        assert!(matches!(
            wigner_transform(&rho, &[-200.0, 0.0]),
            Err(Error::Nyquist { .. })
        ));
        assert!(wigner_transform(&rho, &[-150.0, 0.0]).is_ok());
    }

    #[test]
    fn single_gaussian_is_a_positive_product() {
        let d = 0.05;
        let scn = SpatialScenario::single_packet(d, 1.0, 0.0).unwrap();
        let xs = linspace(-0.8, 0.8, 321);
        let rho = RelativeDensityGrid::from_fn(xs, 0.0, scn, |x, xp| {
            Complex64::new(
                gaussian_superposition(&scn, x) * gaussian_superposition(&scn, xp),
                0.0,
            )
        })
        .unwrap();
        let w = wigner_transform(&rho, &default_momentum_grid(d)).unwrap();
        assert!(w.norm_defect() < 1e-6);
        // W(x,p) = (1/π) exp(−x²/(2d²) − 2d²p²)
        // Away from the edges the y-integral is not truncated.
        for ix in (0..w.xs().len()).step_by(7) {
            for ip in (0..w.ps().len()).step_by(5) {
                let (x, p) = (w.xs()[ix], w.ps()[ip]);
                if x.abs() > 0.3 {
                    continue;
                }
                let expect = (-x * x / (2.0 * d * d) - 2.0 * d * d * p * p).exp() / std::f64::consts::PI;
                assert!((w.get(ix, ip) - expect).abs() < 1e-9, "x={x} p={p}");
            }
        }
        assert!(w.min() > -1e-12);
    }

    #[test]
    fn cat_state_has_negative_fringes_and_exact_marginal() {
        let scn = SpatialScenario::new(0.25, 0.025, 1.0, 0.0).unwrap();
        let field = coherent_distribution(10.0, 1e-12).unwrap();
        let rho = frozen_density(&scn, &field, 0.0, &scn.default_grid()).unwrap();
        let w = wigner_transform(&rho, &default_momentum_grid(scn.d())).unwrap();
        assert!(w.imag_residue() < MAX_IMAG_RESIDUE);
        assert!(w.norm_defect() < 1e-6);
        assert!(w.min() < -0.01 * w.max());
        assert!(w.max() <= 1.0 / std::f64::consts::PI + 1e-6);

        let marginal = w.position_marginal();
        for (i, r) in rho.diagonal().iter().enumerate() {
            assert!((marginal[2 * i] - r).abs() < 1e-6);
        }
        // W(x, p) = W(−x, −p)
        let (nx, np) = (w.xs().len(), w.ps().len());
        for ix in (0..nx).step_by(11) {
            for ip in (0..np).step_by(13) {
                assert!((w.get(ix, ip) - w.get(nx - 1 - ix, np - 1 - ip)).abs() < 1e-10);
            }
        }
    }
}
