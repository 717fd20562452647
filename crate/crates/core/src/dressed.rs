//! Dressed states of the two-atom excitation block.
//!
//! With total excitation number `n + 2` conserved, the interaction
//! Hamiltonian couples only the four states
//! `{|e₁e₂,n⟩, |g₁e₂,n+1⟩, |e₁g₂,n+1⟩, |g₁g₂,n+2⟩}`, always in that order
//! here. The block has a doubly degenerate level at `E₀ = (n+1)ω` and a
//! symmetric pair `E₀ ± A_n` with `A_n = √(2(2n+3))·g`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

/// Mixing coefficients and Rabi frequency of block `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCoefficients {
    pub n: usize,
    /// `√((n+1) / (2(2n+3)))`
    pub f1: f64,
    /// `√((n+2) / (2(2n+3)))`
    pub f2: f64,
    /// `A_n = √(2(2n+3))·g`
    pub rabi: f64,
}

pub fn block_coefficients(n: usize, g: f64) -> BlockCoefficients {
    let m = n as f64;
    let denom = 2.0 * (2.0 * m + 3.0);
    BlockCoefficients {
        n,
        f1: ((m + 1.0) / denom).sqrt(),
        f2: ((m + 2.0) / denom).sqrt(),
        rabi: denom.sqrt() * g,
    }
}

/// Amplitudes of `|e₁e₂,n⟩`, of each singly excited state and of
/// `|g₁g₂,n+2⟩` at time `t`, starting from `|e₁e₂,n⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionAmplitudes {
    pub n: usize,
    pub t: f64,
    pub d1: f64,
    /// Purely imaginary.
    pub d2: Complex64,
    pub d3: f64,
}

impl EvolutionAmplitudes {
    /// `d1² + 2|d2|² + d3² − 1`; zero up to rounding.
    pub fn norm_defect(&self) -> f64 {
        self.d1 * self.d1 + 2.0 * self.d2.norm_sqr() + self.d3 * self.d3 - 1.0
    }
}

pub fn evolution_amplitudes(n: usize, t: f64, g: f64) -> EvolutionAmplitudes {
    amplitudes_from(&block_coefficients(n, g), t)
}

pub fn amplitudes_from(c: &BlockCoefficients, t: f64) -> EvolutionAmplitudes {
    let (s, co) = (c.rabi * t).sin_cos();
    EvolutionAmplitudes {
        n: c.n,
        t,
        d1: 2.0 * c.f1 * c.f1 * co + 2.0 * c.f2 * c.f2,
        d2: Complex64::new(0.0, -c.f1 * s),
        d3: 2.0 * c.f1 * c.f2 * (co - 1.0),
    }
}

/// Four energies with their eigenvectors (unit vectors in the block basis).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEigensystem {
    pub n: usize,
    pub energies: [f64; 4],
    pub vectors: [Vector4<f64>; 4],
}

impl BlockEigensystem {
    /// Closed-form dressed states built from the given coefficients.
    pub fn from_coefficients(c: &BlockCoefficients, omega: f64) -> Self {
        let r2 = std::f64::consts::SQRT_2;
        let e0 = (c.n as f64 + 1.0) * omega;
        BlockEigensystem {
            n: c.n,
            energies: [e0, e0, e0 + c.rabi, e0 - c.rabi],
            vectors: [
                Vector4::new(r2 * c.f2, 0.0, 0.0, -r2 * c.f1),
                Vector4::new(0.0, r2 / 2.0, -r2 / 2.0, 0.0),
                Vector4::new(c.f1, 0.5, 0.5, c.f2),
                Vector4::new(-c.f1, 0.5, 0.5, -c.f2),
            ],
        }
    }

    pub fn gram(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.vectors[i].dot(&self.vectors[j]))
    }

    /// Spectral projectors, one per distinct energy, ascending. Energies
    /// closer than `tol` share a projector.
    pub fn spectral_projectors(&self, tol: f64) -> Vec<(f64, Matrix4<f64>)> {
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &j| self.energies[i].total_cmp(&self.energies[j]));

        let mut out: Vec<(f64, Matrix4<f64>)> = Vec::new();
        for i in order {
            let v = &self.vectors[i];
            let p = v * v.transpose();
            match out.last_mut() {
                Some((e, acc)) if (self.energies[i] - *e).abs() <= tol => *acc += p,
                _ => out.push((self.energies[i], p)),
            }
        }
        out
    }

    /// Reconstructed block Hamiltonian `Σ E_i |v_i⟩⟨v_i|`.
    pub fn hamiltonian(&self) -> Matrix4<f64> {
        self.vectors
            .iter()
            .zip(self.energies)
            .fold(Matrix4::zeros(), |acc, (v, e)| acc + v * v.transpose() * e)
    }
}

pub fn block_eigensystem(n: usize, omega: f64, g: f64) -> BlockEigensystem {
    BlockEigensystem::from_coefficients(&block_coefficients(n, g), omega)
}

/// Interaction block of excitation `n + 2` as a 4×4 matrix.
pub fn block_hamiltonian(n: usize, omega: f64, g: f64) -> Matrix4<f64> {
    let m = n as f64;
    let e0 = (m + 1.0) * omega;
    let lo = g * (m + 1.0).sqrt();
    let hi = g * (m + 2.0).sqrt();
    Matrix4::new(
        e0, lo, lo, 0.0, //
        lo, e0, 0.0, hi, //
        lo, 0.0, e0, hi, //
        0.0, hi, hi, e0,
    )
}

/// Numeric diagonalization of [`block_hamiltonian`], eigenvalues ascending.
pub fn oracle_block_diagonalize(n: usize, omega: f64, g: f64) -> BlockEigensystem {
    let eig = SymmetricEigen::new(block_hamiltonian(n, omega, g));
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    BlockEigensystem {
        n,
        energies: order.map(|i| eig.eigenvalues[i]),
        vectors: order.map(|i| eig.eigenvectors.column(i).into_owned()),
    }
}
