use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use recoil_core::export::{read_density_frames, read_wigner_frames};
use tempfile::TempDir;

fn recoil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recoil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_to_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut all = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    let res = recoil(&all);
    assert!(
        res.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    out
}

/// Data rows (after metadata and header) parsed as numbers where possible.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn empty_time_grid_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "[grids.t]\nmin = 0.0\nmax = 5.0\npoints = 0\n");
    let out = recoil(&["factor", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grids.t.points"));
    assert!(out.stdout.is_empty());
}

#[test]
fn coarse_density_grid_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "[grids]\ndensity_points = 64\n");
    let out = recoil(&["density", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grids.density_points"));
}

#[test]
fn configuration_problems_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let typo = write_config(&dir, "typo.toml", "[spatial]\nwidth = 0.1\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["factor", "--preset", "fig9"],
        vec!["factor", "--config", typo.to_str().unwrap()],
        vec!["factor", "--config", "/nonexistent/scenario.toml"],
        vec!["concurrence", "--preset", "fig6", "--literal-d00"],
        vec!["concurrence", "--preset", "fig5", "--printed-w"],
        vec!["factor", "--preset", "fig3", "--config", typo.to_str().unwrap()],
    ];
    for args in cases {
        assert_eq!(code(&recoil(&args)), 2, "{args:?}");
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = recoil(&["concurrence", "--out", "/nonexistent/dir/c.csv"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("I/O error"));
}

#[test]
fn output_goes_to_stdout_without_a_path() {
    let out = recoil(&["concurrence", "--preset", "fig5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# recoil concurrence\n"));
    assert!(text.contains("\nmode,gt,C,envelope\n"));
}

#[test]
fn factor_node_lines_stay_at_one_and_half_wavelength_settles_near_half() {
    let dir = TempDir::new().unwrap();
    let out = run_to_file(&dir, "f.csv", &["factor", "--preset", "fig3"]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 101 * 201);
    for r in &rows {
        let (t, x, f) = (num(&r[0]), num(&r[1]), num(&r[2]));
        if x == 1.0 {
            assert!((f - 1.0).abs() <= 1e-9, "t={t}: {f}");
        }
        if x == 0.5 && t >= 1.5 {
            assert!((f - 0.5).abs() <= 0.05, "t={t}: {f}");
        }
    }
}

#[test]
fn density_shows_four_peaks_at_the_packet_corners() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        "[grids]\ndensity_points = 401\n\n[output]\nformat = \"binary\"\n",
    );
    let out = run_to_file(&dir, "d.rdg", &["density", "--config", cfg.to_str().unwrap()]);
    let frames = read_density_frames(std::fs::File::open(out).unwrap()).unwrap();
    let f = &frames[0];
    assert_eq!(f.time, 0.0);
    let n = f.xs.len();
    let at = |x: f64| f.xs.iter().position(|&v| (v - x).abs() < 1e-12).unwrap();
    let (m, p) = (at(-0.25), at(0.25));
    let peak = f.values[m * n + m].re;
    for (i, j) in [(m, m), (p, p), (m, p), (p, m)] {
        assert!((f.values[i * n + j].re - peak).abs() <= 1e-12 * peak);
    }
    let max = f.values.iter().map(|v| v.re).fold(f64::MIN, f64::max);
    assert!((max - peak).abs() <= 1e-12 * peak);
    // Midway between packets the density is negligible.
    let mid = at(0.0);
    assert!(f.values[mid * n + mid].re < 1e-10 * peak);
}

#[test]
fn packets_a_wavelength_apart_keep_their_coherence() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        "[spatial]\na = 1.0\nd = 0.1\n\n[grids]\ndensity_points = 401\nsnapshot_t = 3.7\n\n[output]\nformat = \"binary\"\n",
    );
    let out = run_to_file(&dir, "d.rdg", &["density", "--config", cfg.to_str().unwrap()]);
    let frames = read_density_frames(std::fs::File::open(out).unwrap()).unwrap();
    let (initial, evolved) = (&frames[0], &frames[1]);
    assert_eq!(evolved.time, 3.7);
    let n = initial.xs.len();
    let at = |x: f64| initial.xs.iter().position(|&v| (v - x).abs() < 1e-12).unwrap();
    let (m, p) = (at(-1.0), at(1.0));
    for idx in [m * n + p, p * n + m] {
        assert!((initial.values[idx] - evolved.values[idx]).norm() <= 1e-10);
    }
}

#[test]
fn wigner_records_its_normalization_and_loses_fringe_contrast() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        "[grids]\ndensity_points = 401\nmomentum_points = 128\n",
    );
    let csv = run_to_file(&dir, "w.csv", &["wigner", "--config", cfg.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let defects: Vec<f64> = text
        .lines()
        .filter_map(|l| l.split("norm_defect = ").nth(1))
        .map(|s| num(s.split(',').next().unwrap()))
        .collect();
    assert_eq!(defects.len(), 2);
    assert!(defects.iter().all(|d| d.abs() <= 1e-6), "{defects:?}");

    let data = rows(&csv);
    let initial: Vec<&Vec<String>> = data.iter().filter(|r| num(&r[0]) == 0.0).collect();
    assert!(initial.iter().any(|r| num(&r[3]) < 0.0));

    let bin_cfg = write_config(
        &dir,
        "b.toml",
        "[grids]\ndensity_points = 401\nmomentum_points = 128\n\n[output]\nformat = \"binary\"\n",
    );
    let bin = run_to_file(&dir, "w.wig", &["wigner", "--config", bin_cfg.to_str().unwrap()]);
    let frames = read_wigner_frames(std::fs::File::open(bin).unwrap()).unwrap();
    let fringe = |f: &recoil_core::export::WignerFrame| {
        let np = f.ps.len();
        let ix = f.xs.iter().position(|&x| x.abs() < 1e-12).unwrap();
        f.values[ix * np..(ix + 1) * np]
            .iter()
            .fold(0.0, |m: f64, w| m.max(w.abs()))
    };
    assert!(fringe(&frames[1]) < fringe(&frames[0]));
}

#[test]
fn concurrence_starts_maximal_and_comparison_modes_differ() {
    let dir = TempDir::new().unwrap();
    let out = run_to_file(
        &dir,
        "c.csv",
        &["concurrence", "--preset", "fig5", "--literal-d00"],
    );
    let rows = rows(&out);
    assert_eq!(rows[0], ["corrected", "0.0", "1.0", "1.0"]);
    let series =
        |mode: &str| -> Vec<f64> { rows.iter().filter(|r| r[0] == mode).map(|r| num(&r[2])).collect() };
    let (corrected, literal) = (series("corrected"), series("literal_d00"));
    assert_eq!(corrected.len(), 1001);
    assert_eq!(literal.len(), 1001);
    let gap = corrected
        .iter()
        .zip(&literal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap > 1e-3, "series coincide: {gap}");
}

#[test]
fn halving_the_spread_brings_the_crossing_forward() {
    let dir = TempDir::new().unwrap();
    // At fixed mass the recoil rate scales as 1/d.
    let crossing = |d: f64| {
        let cfg = write_config(
            &dir,
            &format!("c{d}.toml"),
            &format!(
                "[entanglement]\ncase = 2\nd = {d}\nrecoil_sigma = {}\n\n[grids.t]\nmin = 0.0\nmax = 10.0\npoints = 1001\n",
                0.5 * 0.0025 / d
            ),
        );
        let out = run_to_file(
            &dir,
            &format!("c{d}.csv"),
            &["concurrence", "--config", cfg.to_str().unwrap()],
        );
        rows(&out)
            .iter()
            .find(|r| num(&r[2]) <= 0.1)
            .map(|r| num(&r[1]))
            .unwrap()
    };
    assert!(crossing(0.00125) < crossing(0.0025));
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    for args in [
        ["factor", "--preset", "fig3"],
        ["concurrence", "--preset", "fig6"],
    ] {
        let a = std::fs::read(run_to_file(&dir, "a.csv", &args)).unwrap();
        let b = std::fs::read(run_to_file(&dir, "b.csv", &args)).unwrap();
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn validate_reports_every_invariant_and_catches_the_injected_fault() {
    let ok = recoil(&["validate"]);
    assert_eq!(code(&ok), 0);
    let table = String::from_utf8(ok.stdout).unwrap();
    for name in [
        "probability conservation",
        "eigensystem oracle",
        "concurrence oracle",
        "unit trace",
        "hermitian positive states",
        "decoherence factor bounds",
        "field normalization",
    ] {
        let line = table
            .lines()
            .find(|l| l.contains(name))
            .unwrap_or_else(|| panic!("{name} missing"));
        assert!(line.starts_with("PASS"));
    }

    let bad = recoil(&["validate", "--inject-fault", "flip-f2-sign"]);
    assert_eq!(code(&bad), 1);
    let table = String::from_utf8(bad.stdout).unwrap();
    assert!(table
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("eigensystem oracle")));
}
