//! Closed-form dynamics of two two-level atoms coupled to one running-wave
//! mode of a ring cavity, with the atomic center-of-mass motion quantized.
//!
//! Photon emission and absorption kick the atoms by `ħk`, which entangles
//! the internal states with the relative motion. This crate evaluates the
//! consequences in closed form:
//!
//! - [`dressed`]: eigensystem of the two-atom excitation block and the
//!   population amplitudes `D₁, D₂, D₃`.
//! - [`field`]: diagonal photon-number weights of the initial cavity field.
//! - [`spatial`]: decoherence factor `F(x, x′, t)` and the relative-position
//!   density matrix.
//! - [`wigner`]: phase-space Wigner function of a density grid.
//! - [`entanglement`]: reduced internal-state density matrices and their
//!   concurrence.
//! - [`export`]: binary grid formats.
//!
//! Units: `ħ = 1`, `g = 1` (times are the dimensionless `gt`), lengths in
//! units of the cavity wavelength `λ` unless a scenario says otherwise, and
//! momenta in `ħ/λ`.

pub mod dressed;
pub mod entanglement;
pub mod export;
pub mod field;
pub mod grid;
pub mod spatial;
pub mod wigner;

mod error;
mod linalg;

pub use error::{Error, Result};

/// Wavenumber `k = 2π/λ` of the cavity mode when lengths are measured in `λ`.
pub const UNIT_WAVENUMBER: f64 = 2.0 * std::f64::consts::PI;
