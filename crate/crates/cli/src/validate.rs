//! Invariant suite behind `recoil validate`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recoil_core::dressed::{
    block_coefficients, evolution_amplitudes, oracle_block_diagonalize, BlockEigensystem,
};
use recoil_core::entanglement::{
    concurrence_general, concurrence_x_state, rho, Case, EntanglementScenario, Readings, TwoQubitState,
};
use recoil_core::field::coherent_distribution;
use recoil_core::spatial::decoherence_factor;
use recoil_core::UNIT_WAVENUMBER;

/// Deliberate corruption used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negate `f2` in the closed-form eigenvectors.
    FlipF2Sign,
}

/// One invariant with the largest defect observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_defect <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<28} {:>9} {:>12.3e} {:>10.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.max_defect,
            self.tolerance
        )
    }
}

pub const TABLE_HEADER: &str = "     invariant                      samples   max defect  tolerance";

const SEED: u64 = 0x5eed;

struct Tally {
    samples: usize,
    max: f64,
}

impl Tally {
    fn new() -> Self {
        Tally { samples: 0, max: 0.0 }
    }

    /// NaN counts as an infinite defect.
    fn add(&mut self, defect: f64) {
        self.samples += 1;
        self.max = if defect.is_nan() {
            f64::INFINITY
        } else {
            self.max.max(defect)
        };
    }

    fn check(self, name: &'static str, tolerance: f64) -> Check {
        Check {
            name,
            samples: self.samples,
            max_defect: self.max,
            tolerance,
        }
    }
}

/// Conservation of `D₁² + 2|D₂|² + D₃²` for every block up to 10⁴.
fn conservation(rng: &mut ChaCha8Rng) -> Check {
    let mut tally = Tally::new();
    for n in 0..=10_000 {
        for _ in 0..100 {
            let t = rng.gen_range(0.0..=50.0);
            tally.add(evolution_amplitudes(n, t, 1.0).norm_defect().abs());
        }
    }
    tally.check("probability conservation", 1e-12)
}

fn eigensystem(fault: Option<Fault>) -> Check {
    let mut tally = Tally::new();
    for n in 0..=100 {
        for omega in [0.0, 0.7, -1.3] {
            let mut c = block_coefficients(n, 1.0);
            if fault == Some(Fault::FlipF2Sign) {
                c.f2 = -c.f2;
            }
            let closed = BlockEigensystem::from_coefficients(&c, omega).spectral_projectors(1e-9);
            let numeric = oracle_block_diagonalize(n, omega, 1.0).spectral_projectors(1e-9);
            if closed.len() != numeric.len() {
                tally.add(f64::INFINITY);
                continue;
            }
            for ((e1, p1), (e2, p2)) in closed.iter().zip(&numeric) {
                tally.add((e1 - e2).abs().max((p1 - p2).amax()));
            }
        }
    }
    tally.check("eigensystem oracle", 1e-10)
}

fn scenarios(rng: &mut ChaCha8Rng, count: usize) -> Vec<EntanglementScenario> {
    let geometry = [0.25, 0.3, 0.5, 1.0];
    (0..count)
        .map(|_| {
            let a = geometry[rng.gen_range(0..geometry.len())];
            let d = a / [10.0, 100.0][rng.gen_range(0..2)];
            EntanglementScenario::new(
                rng.gen_range(0.0..=FRAC_PI_2),
                a,
                d,
                1.0,
                rng.gen_range(0.0..2.0),
                0.0,
            )
            .expect("sampled scenario is valid")
        })
        .collect()
}

fn random_x_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let mut p = [0.0; 4];
    p.iter_mut().for_each(|v| *v = rng.gen_range(1e-3..1.0));
    let s: f64 = p.iter().sum();
    let [a, b, c, d] = p.map(|v| v / s);
    let w = Complex64::from_polar(rng.gen_range(0.0..=1.0) * (a * d).sqrt(), rng.gen_range(-PI..PI));
    let z = Complex64::from_polar(rng.gen_range(0.0..=1.0) * (b * c).sqrt(), rng.gen_range(-PI..PI));
    TwoQubitState::x_state(a, b, c, d, w, z)
}

fn produced_states(rng: &mut ChaCha8Rng) -> Vec<TwoQubitState> {
    let scns = scenarios(rng, 200);
    scns.iter()
        .flat_map(|scn| {
            let t = rng.gen_range(0.0..10.0);
            [Case::One, Case::Two].map(|case| rho(scn, case, t, Readings::default()))
        })
        .collect()
}

fn concurrence_oracle(rng: &mut ChaCha8Rng) -> Check {
    let mut tally = Tally::new();
    let mut states = produced_states(rng);
    states.extend((0..1000).map(|_| random_x_state(rng)));
    for state in &states {
        match (concurrence_x_state(state), concurrence_general(state)) {
            (Ok(a), Ok(b)) => tally.add((a - b).abs()),
            _ => tally.add(f64::INFINITY),
        }
    }
    tally.check("concurrence oracle", 1e-10)
}

fn trace(rng: &mut ChaCha8Rng) -> Check {
    let mut tally = Tally::new();
    for _ in 0..1000 {
        let d = rng.gen_range(1e-4..0.5);
        let scn = EntanglementScenario::new(
            rng.gen_range(0.0..=FRAC_PI_2),
            rng.gen_range(0.0..2.0),
            d,
            1.0,
            0.5,
            0.0,
        )
        .expect("sampled scenario is valid");
        let t = rng.gen_range(0.0..20.0);
        tally.add((rho(&scn, Case::Two, t, Readings::default()).trace() - 1.0).norm());
    }
    for state in produced_states(rng) {
        tally.add((state.trace() - 1.0).norm());
    }
    tally.check("unit trace", 1e-12)
}

fn positivity(rng: &mut ChaCha8Rng) -> Check {
    let mut tally = Tally::new();
    for state in produced_states(rng) {
        tally.add((-state.min_eigenvalue()).max(0.0));
        tally.add(state.hermiticity_defect());
    }
    tally.check("hermitian positive states", 1e-10)
}

fn factor_bounds(rng: &mut ChaCha8Rng) -> Check {
    let field = coherent_distribution(10.0, 1e-12).expect("valid field");
    let mut tally = Tally::new();
    for _ in 0..2000 {
        let (x, xp, t) = (
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.0..20.0),
        );
        let f = decoherence_factor(&field, UNIT_WAVENUMBER, x, xp, t);
        tally.add((f.abs() - 1.0).max(0.0));
        tally.add((decoherence_factor(&field, UNIT_WAVENUMBER, x, x, t) - 1.0).abs());
    }
    tally.check("decoherence factor bounds", 1e-12)
}

fn field_normalization(rng: &mut ChaCha8Rng) -> Check {
    let mut tally = Tally::new();
    for _ in 0..200 {
        let alpha = rng.gen_range(0.0..30.0);
        let tol = 10f64.powf(rng.gen_range(-14.0..-4.0));
        let field = coherent_distribution(alpha, tol).expect("valid field");
        tally.add((field.total_mass() + field.tail_bound() - 1.0).abs());
        tally.add((field.tail_bound() - tol).max(0.0));
    }
    tally.check("field normalization", 1e-12)
}

/// Runs every invariant with a fixed seed.
pub fn run_suite(fault: Option<Fault>) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    vec![
        conservation(&mut rng),
        eigensystem(fault),
        concurrence_oracle(&mut rng),
        trace(&mut rng),
        positivity(&mut rng),
        factor_bounds(&mut rng),
        field_normalization(&mut rng),
    ]
}
