use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recoil_cli::commands::{self, CommandError, DatasetCommand};
use recoil_cli::config::ScenarioConfig;
use recoil_cli::validate::{run_suite, Fault, TABLE_HEADER};

/// Recoil-induced decoherence of two atoms in a ring cavity.
#[derive(Parser)]
#[command(name = "recoil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decoherence factor F(x, -x, t) over the time and position grids.
    Factor(Dataset),
    /// Relative-position density matrix at t = 0 and the snapshot time.
    Density(Dataset),
    /// Wigner function at t = 0 and the snapshot time.
    Wigner(Dataset),
    /// Concurrence series with its decay envelope.
    Concurrence(Dataset),
    /// Run the invariant suite and print a pass/fail table.
    Validate {
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args)]
struct Dataset {
    /// Scenario file (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario: fig2, fig3, fig4, fig5, fig6 or node.
    #[arg(long)]
    preset: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit the case 1 series with the amplitudes frozen at t = 0.
    #[arg(long)]
    literal_d00: bool,
    /// Also emit the case 2 series with the uncorrected outer coherence.
    #[arg(long)]
    printed_w: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipF2Sign,
}

impl Dataset {
    fn load(&self, default_preset: &str) -> Result<ScenarioConfig, CommandError> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => ScenarioConfig::from_file(path)?,
            (None, Some(name)) => ScenarioConfig::preset(name)?,
            (None, None) => ScenarioConfig::preset(default_preset)?,
        };
        config.entanglement.literal_d00 |= self.literal_d00;
        config.entanglement.printed_w |= self.printed_w;
        config.validate()?;
        Ok(config)
    }
}

fn dataset(args: &Dataset, default_preset: &str, command: DatasetCommand) -> ExitCode {
    let result = args
        .load(default_preset)
        .and_then(|config| commands::run(command, &config, args.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("recoil: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn validate(fault: Option<Fault>) -> ExitCode {
    let checks = run_suite(fault);
    println!("{TABLE_HEADER}");
    for check in &checks {
        println!("{check}");
    }
    if checks.iter().all(|c| c.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Factor(args) => dataset(args, "fig3", commands::factor),
        Command::Density(args) => dataset(args, "fig2", commands::density),
        Command::Wigner(args) => dataset(args, "fig4", commands::wigner),
        Command::Concurrence(args) => dataset(args, "fig5", commands::concurrence),
        Command::Validate { inject_fault } => validate(inject_fault.map(|f| match f {
            FaultArg::FlipF2Sign => Fault::FlipF2Sign,
        })),
    }
}
