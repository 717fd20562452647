//! Internal-state entanglement of the atom pair with a vacuum cavity field.
//!
//! Two initial internal states are covered:
//!
//! - [`Case::One`]: `cosγ|g₁g₂⟩ + sinγ|e₁e₂⟩`
//! - [`Case::Two`]: `cosγ|e₁g₂⟩ + sinγ|g₁e₂⟩`
//!
//! Both reduced matrices are X-states in the basis
//! `{|e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩}`. Coherences decay with
//! `e^{−s(t)}`, `s(t) = (σt)²`, where `σ = ħk/(2dm₀)` is set by the momentum
//! spread of the packets.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dressed::evolution_amplitudes;
use crate::error::invalid;
use crate::grid::ensure_ascending;
use crate::linalg::{hermitian_eigen, singular_values};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues of ρ below this are treated as zero by [`concurrence_general`].
const EIGEN_FLOOR: f64 = 1e-13;

/// Mixing angle, packet geometry and recoil rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementScenario {
    gamma: f64,
    a: f64,
    d: f64,
    lambda: f64,
    recoil_sigma: f64,
    omega: f64,
}

impl EntanglementScenario {
    pub fn new(gamma: f64, a: f64, d: f64, lambda: f64, recoil_sigma: f64, omega: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&gamma) {
            return Err(invalid("gamma", format!("{gamma} is outside [0, π/2]")));
        }
        if !(a >= 0.0 && a.is_finite()) {
            return Err(invalid("a", format!("separation must be non-negative, got {a}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("d", format!("spread must be positive, got {d}")));
        }
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
        if !omega.is_finite() {
            return Err(invalid("omega", format!("{omega} is not finite")));
        }
        Ok(EntanglementScenario {
            gamma,
            a,
            d,
            lambda,
            recoil_sigma,
            omega,
        })
    }

    /// The same atoms and cavity with packet spread `d`.
    ///
    /// `σ ∝ 1/d` at fixed mass and wavelength, so `σ` is rescaled by
    /// `d_old / d`.
    pub fn with_spread(&self, d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("d", format!("spread must be positive, got {d}")));
        }
        let sigma = self.recoil_sigma * self.d / d;
        Self::new(self.gamma, self.a, d, self.lambda, sigma, self.omega)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
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

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn wavenumber(&self) -> f64 {
        std::f64::consts::TAU / self.lambda
    }

    /// `s(t) = (σt)²`.
    pub fn s(&self, t: f64) -> f64 {
        let x = self.recoil_sigma * t;
        x * x
    }

    /// `δ = d²k²`.
    pub fn delta(&self) -> f64 {
        let dk = self.d * self.wavenumber();
        dk * dk
    }

    /// `ξ(t) = s(t) + d²k² − iak`.
    pub fn xi(&self, t: f64) -> Complex64 {
        Complex64::new(self.s(t) + self.delta(), -self.a * self.wavenumber())
    }

    /// `α = d²k² + iak`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.delta(), self.a * self.wavenumber())
    }

    /// `β = α*`.
    pub fn beta(&self) -> Complex64 {
        self.alpha().conj()
    }

    /// `η = 4d²k² + 2iak`.
    pub fn eta(&self) -> Complex64 {
        Complex64::new(4.0 * self.delta(), 2.0 * self.a * self.wavenumber())
    }
}

/// Which initial internal state is evolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// `cosγ|g₁g₂⟩ + sinγ|e₁e₂⟩`
    One,
    /// `cosγ|e₁g₂⟩ + sinγ|g₁e₂⟩`
    Two,
}

/// Alternative readings of the closed forms, kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Readings {
    /// Case 1: evaluate the dressed amplitudes at `t = 0` (`D₁ = 1`,
    /// `D₂ = D₃ = 0`) instead of at the current time.
    pub literal_d00: bool,
    /// Case 2: use `w = |B|² + 2cosγ sinγ e^{−δ}cos(ak)`, which does not
    /// conserve the trace, instead of `|B|²[1 + 2cosγ sinγ e^{−δ}cos(ak)]`.
    pub printed_w: bool,
}

/// A 4×4 two-qubit density matrix in `{ee, eg, ge, gg}` order.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<Complex64>,
    is_x_state: bool,
}

impl TwoQubitState {
    /// Wraps a matrix; the X-state flag is set when every entry off the
    /// diagonal and anti-diagonal is exactly zero.
    pub fn new(matrix: Matrix4<Complex64>) -> Self {
        let is_x_state = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && i + j != 3)
            .all(|(i, j)| matrix[(i, j)] == ZERO);
        TwoQubitState { matrix, is_x_state }
    }

    /// X-state from its six independent entries: diagonal `(a, b, c, d)`,
    /// outer coherence `w = ρ₀₃` and inner coherence `z = ρ₁₂`.
    pub fn x_state(a: f64, b: f64, c: f64, d: f64, w: Complex64, z: Complex64) -> Self {
        let mut m = Matrix4::from_element(ZERO);
        m[(0, 0)] = a.into();
        m[(1, 1)] = b.into();
        m[(2, 2)] = c.into();
        m[(3, 3)] = d.into();
        m[(0, 3)] = w;
        m[(3, 0)] = w.conj();
        m[(1, 2)] = z;
        m[(2, 1)] = z.conj();
        TwoQubitState {
            matrix: m,
            is_x_state: true,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: [Complex64; 4]) -> Self {
        let v = nalgebra::Vector4::from(psi);
        Self::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn is_x_state(&self) -> bool {
        self.is_x_state
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `max |ρᵢⱼ − ρ*ⱼᵢ|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let (ev, _) = hermitian_eigen(&DMatrix::from_iterator(4, 4, h.iter().copied()));
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Reduced internal state for case 1 at time `t`.
pub fn rho_case1(scn: &EntanglementScenario, t: f64) -> TwoQubitState {
    rho_case1_with(scn, t, Readings::default())
}

pub fn rho_case1_with(scn: &EntanglementScenario, t: f64, readings: Readings) -> TwoQubitState {
    let (d1, d2_sq, d3) = if readings.literal_d00 {
        (1.0, 0.0, 0.0)
    } else {
        let amp = evolution_amplitudes(0, t, 1.0);
        (amp.d1, amp.d2.norm_sqr(), amp.d3)
    };
    let (sg, cg) = scn.gamma.sin_cos();
    let (s2, c2) = (sg * sg, cg * cg);
    let a = d1 * d1 * s2;
    let b = d2_sq * s2;
    let d = c2 + d3 * d3 * s2;
    let w = Complex64::from_polar(d1 * cg * sg * (-scn.s(t)).exp(), -2.0 * scn.omega * t);
    let z = b * (-scn.xi(t)).exp();
    TwoQubitState::x_state(a, b, b, d, w, z)
}

/// `(A₊, A₋, |B|²)` of the single-excitation block at time `t`.
pub fn single_excitation_amplitudes(t: f64) -> (f64, f64, f64) {
    let (s, c) = (std::f64::consts::SQRT_2 * t).sin_cos();
    (0.5 * (c + 1.0), 0.5 * (c - 1.0), 0.5 * s * s)
}

/// Reduced internal state for case 2 at time `t`.
///
/// The `|e₁e₂⟩` row and column vanish and the `|g₁g₂⟩` population carries
/// the photon-emission probability.
pub fn rho_case2(scn: &EntanglementScenario, t: f64) -> TwoQubitState {
    rho_case2_with(scn, t, Readings::default())
}

pub fn rho_case2_with(scn: &EntanglementScenario, t: f64, readings: Readings) -> TwoQubitState {
    let (ap, am, b_sq) = single_excitation_amplitudes(t);
    let (sg, cg) = scn.gamma.sin_cos();
    let (s2, c2, cs) = (sg * sg, cg * cg, cg * sg);
    let overlap = 2.0 * cs * (-scn.delta()).exp() * (scn.a * scn.wavenumber()).cos();

    let b = ap * ap * c2 + am * am * s2 + ap * am * overlap;
    let c = am * am * c2 + ap * ap * s2 + ap * am * overlap;
    let w = if readings.printed_w {
        b_sq + overlap
    } else {
        b_sq * (1.0 + overlap)
    };
    let z = (-scn.s(t)).exp()
        * (ap * am * (c2 * (-scn.alpha()).exp() + s2 * (-scn.beta()).exp())
            + (ap * ap + am * am * (-scn.eta()).exp()) * cs);
    TwoQubitState::x_state(0.0, b, c, w, ZERO, z)
}

pub fn rho(scn: &EntanglementScenario, case: Case, t: f64, readings: Readings) -> TwoQubitState {
    match case {
        Case::One => rho_case1_with(scn, t, readings),
        Case::Two => rho_case2_with(scn, t, readings),
    }
}

/// `2 max{0, |z| − √(ad), |w| − √(bc)}`.
pub fn concurrence_x_state(state: &TwoQubitState) -> Result<f64> {
    if !state.is_x_state {
        return Err(Error::NotXState);
    }
    let m = &state.matrix;
    let diag = |i: usize| m[(i, i)].re;
    let inner = m[(1, 2)].norm() - (diag(0) * diag(3)).abs().sqrt();
    let outer = m[(0, 3)].norm() - (diag(1) * diag(2)).abs().sqrt();
    Ok(2.0 * inner.max(outer).max(0.0))
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}` of any
/// two-qubit density matrix.
///
/// With `ρ = ΨΨ†` the `√λᵢ` are the singular values of `ΨᵀYΨ`,
/// `Y = σ_y ⊗ σ_y`, which avoids square roots of rounding noise.
pub fn concurrence_general(state: &TwoQubitState) -> Result<f64> {
    let herm = state.hermiticity_defect();
    if herm > 1e-9 {
        return Err(Error::NotDensityMatrix(format!("hermiticity defect {herm:e}")));
    }
    let tr = state.trace();
    if (tr - 1.0).norm() > 1e-9 {
        return Err(Error::NotDensityMatrix(format!("trace {tr}")));
    }
    let (values, vectors) = hermitian_eigen(&DMatrix::from_iterator(4, 4, state.matrix.iter().copied()));
    let cols: Vec<_> = (0..4)
        .filter(|&k| values[k] > EIGEN_FLOOR)
        .map(|k| vectors.column(k) * Complex64::from(values[k].sqrt()))
        .collect();
    if cols.is_empty() {
        return Err(Error::NotDensityMatrix("no positive eigenvalue".into()));
    }
    let psi = DMatrix::from_columns(&cols);
    let mut y = DMatrix::from_element(4, 4, ZERO);
    y[(0, 3)] = (-1.0).into();
    y[(1, 2)] = 1.0.into();
    y[(2, 1)] = 1.0.into();
    y[(3, 0)] = (-1.0).into();
    let t = psi.transpose() * y * &psi;
    let mut sv = singular_values(&t);
    sv.resize(4, 0.0);
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// One sample of a concurrence series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrencePoint {
    pub gt: f64,
    pub concurrence: f64,
    /// `e^{−s(t)}`
    pub envelope: f64,
}

/// Closed-form concurrence at each time, alongside the `e^{−s}` envelope.
pub fn concurrence_series(
    scn: &EntanglementScenario,
    case: Case,
    times: &[f64],
    readings: Readings,
) -> Result<Vec<ConcurrencePoint>> {
    ensure_ascending(times)?;
    times
        .par_iter()
        .map(|&t| {
            let c = concurrence_x_state(&rho(scn, case, t, readings))?;
            Ok(ConcurrencePoint {
                gt: t,
                concurrence: c,
                envelope: (-scn.s(t)).exp(),
            })
        })
        .collect()
}

/// First sampled time at which the concurrence is at or below `threshold`.
pub fn first_crossing(series: &[ConcurrencePoint], threshold: f64) -> Option<f64> {
    series.iter().find(|p| p.concurrence <= threshold).map(|p| p.gt)
}

/// `A` with `C ≤ A·e^{−s(t)}` for every `t`.
///
/// Case 1: `2|w| ≤ sin2γ e^{−s}` and `2|z| ≤ 2|D₂|²sin²γ e^{−s}` with
/// `|D₂(0,t)|² ≤ 1/6`. Case 2: `|A₊A₋| ≤ 1/4` and `A₊² + A₋² ≤ 1`.
pub fn envelope_prefactor(scn: &EntanglementScenario, case: Case) -> f64 {
    let sin2 = (2.0 * scn.gamma).sin().abs();
    match case {
        Case::One => sin2.max(scn.gamma.sin().powi(2) / 3.0),
        Case::Two => 0.5 + sin2,
    }
}
