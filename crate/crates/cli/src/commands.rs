//! Figure-dataset commands.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use recoil_core::entanglement::{concurrence_series, Readings};
use recoil_core::export::{write_density, write_wigner};
use recoil_core::spatial::{frozen_density, FactorCoefficients, RelativeDensityGrid};
use recoil_core::wigner::{wigner_transform, WignerGrid};

use crate::config::{ConfigError, Format, ScenarioConfig};

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    Io(io::Error),
}

impl CommandError {
    /// 2 for configuration problems, 3 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Config(_) => 2,
            CommandError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Config(e) => write!(f, "configuration error: {e}"),
            CommandError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

impl From<io::Error> for CommandError {
    fn from(e: io::Error) -> Self {
        CommandError::Io(e)
    }
}

/// Errors raised while computing are caused by the scenario or its grids.
fn computation(section: &str, e: recoil_core::Error) -> CommandError {
    CommandError::Config(ConfigError {
        path: section.to_string(),
        message: e.to_string(),
    })
}

/// Shortest round-trip decimal form, so equal inputs give equal bytes.
fn num(x: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(x).to_string()
}

fn csv_row(out: &mut impl Write, fields: &[f64]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|&x| num(x)).collect();
    writeln!(out, "{}", line.join(","))
}

/// `# `-prefixed command name and resolved configuration.
fn metadata(out: &mut impl Write, command: &str, config: &ScenarioConfig) -> io::Result<()> {
    writeln!(out, "# recoil {command}")?;
    for line in config.to_toml().lines() {
        writeln!(out, "{}", format!("# {line}").trim_end())?;
    }
    Ok(())
}

/// Buffered output file or stdout.
pub type Sink = BufWriter<Box<dyn Write>>;

/// A dataset command writing into a [`Sink`].
pub type DatasetCommand = fn(&ScenarioConfig, &mut Sink) -> Result<(), CommandError>;

/// Creates the output file, or writes to stdout without a path.
fn sink(out: Option<&Path>) -> Result<Sink, CommandError> {
    let w: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(BufWriter::new(w))
}

/// `F(x, −x, t)` over the configured time × position grid.
pub fn factor(config: &ScenarioConfig, out: &mut impl Write) -> Result<(), CommandError> {
    let field = config.field()?;
    let k = config.spatial()?.wavenumber();
    let xs = config.grids.x.nodes();
    metadata(out, "factor", config)?;
    writeln!(out, "gt,x,F")?;
    for t in config.grids.t.nodes() {
        let coeffs = FactorCoefficients::at(&field, t);
        for &x in &xs {
            csv_row(out, &[t, x, coeffs.eval(k, x, -x)])?;
        }
    }
    Ok(())
}

/// Density grids at `t = 0` and at the snapshot time.
pub fn density_grids(config: &ScenarioConfig) -> Result<[RelativeDensityGrid; 2], CommandError> {
    let field = config.field()?;
    let scn = config.spatial()?;
    let xs = config.density_grid()?;
    let at = |t| frozen_density(&scn, &field, t, &xs).map_err(|e| computation("grids", e));
    Ok([at(0.0)?, at(config.grids.snapshot_t)?])
}

pub fn density(config: &ScenarioConfig, out: &mut impl Write) -> Result<(), CommandError> {
    let grids = density_grids(config)?;
    if config.output.format == Format::Binary {
        for g in &grids {
            write_density(out, g)?;
        }
        return Ok(());
    }
    metadata(out, "density", config)?;
    writeln!(out, "gt,x,xp,re,im")?;
    for g in &grids {
        let xs = g.xs();
        for (i, &x) in xs.iter().enumerate() {
            for (j, &xp) in xs.iter().enumerate() {
                let v = g.get(i, j);
                csv_row(out, &[g.time(), x, xp, v.re, v.im])?;
            }
        }
    }
    Ok(())
}

/// Wigner functions at `t = 0` and at the snapshot time.
pub fn wigner_grids(config: &ScenarioConfig) -> Result<[WignerGrid; 2], CommandError> {
    let ps = config.momentum_grid()?;
    let [initial, evolved] = density_grids(config)?;
    let at = |g: &RelativeDensityGrid| wigner_transform(g, &ps).map_err(|e| computation("grids", e));
    Ok([at(&initial)?, at(&evolved)?])
}

pub fn wigner(config: &ScenarioConfig, out: &mut impl Write) -> Result<(), CommandError> {
    let grids = wigner_grids(config)?;
    if config.output.format == Format::Binary {
        for g in &grids {
            write_wigner(out, g)?;
        }
        return Ok(());
    }
    metadata(out, "wigner", config)?;
    for g in &grids {
        writeln!(
            out,
            "# gt = {}: norm_defect = {}, imag_residue = {}",
            num(g.time()),
            num(g.norm_defect()),
            num(g.imag_residue())
        )?;
    }
    writeln!(out, "gt,x,p,W")?;
    for g in &grids {
        for (ix, &x) in g.xs().iter().enumerate() {
            for (&p, &w) in g.ps().iter().zip(g.row(ix)) {
                csv_row(out, &[g.time(), x, p, w])?;
            }
        }
    }
    Ok(())
}

/// Series emitted by the concurrence command: the corrected reading, plus
/// the alternative one when a comparison flag is set.
pub fn concurrence_modes(config: &ScenarioConfig) -> Vec<(&'static str, Readings)> {
    let mut modes = vec![("corrected", Readings::default())];
    let r = config.readings();
    if r.literal_d00 {
        modes.push((
            "literal_d00",
            Readings {
                literal_d00: true,
                ..Readings::default()
            },
        ));
    }
    if r.printed_w {
        modes.push((
            "printed_w",
            Readings {
                printed_w: true,
                ..Readings::default()
            },
        ));
    }
    modes
}

pub fn concurrence(config: &ScenarioConfig, out: &mut impl Write) -> Result<(), CommandError> {
    let scn = config.entanglement()?;
    let case = config.case()?;
    let times = config.grids.t.nodes();
    metadata(out, "concurrence", config)?;
    writeln!(out, "mode,gt,C,envelope")?;
    for (mode, readings) in concurrence_modes(config) {
        let series =
            concurrence_series(&scn, case, &times, readings).map_err(|e| computation("entanglement", e))?;
        for p in series {
            writeln!(
                out,
                "{mode},{},{},{}",
                num(p.gt),
                num(p.concurrence),
                num(p.envelope)
            )?;
        }
    }
    Ok(())
}

/// Runs one dataset command into `out` (stdout when `None`).
pub fn run(command: DatasetCommand, config: &ScenarioConfig, out: Option<&Path>) -> Result<(), CommandError> {
    let mut w = sink(out)?;
    command(config, &mut w)?;
    w.flush()?;
    Ok(())
}
