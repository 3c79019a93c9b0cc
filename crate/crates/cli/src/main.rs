use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fbl_cli::config::{parse_grids, Mode, Overrides};

#[derive(Parser)]
#[command(name = "fbl", version, about = "Fractional Boussinesq laboratory runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid sizes for estimates, e.g. "64,128".
    #[arg(long, global = true)]
    grids: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate and write the time series, norms and snapshots.
    Simulate,
    /// Integrate (or replay snapshots) and check the energy ledgers.
    Ledger {
        /// Directory holding `snapshots.csv` from an earlier run.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Sample commutator constants on the configured grids.
    Estimate,
    /// Fast identities across every layer.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let grids = match cli.grids.as_deref().map(parse_grids).transpose() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out,
        grids,
    };
    let (mode, replay) = match cli.command {
        Command::Simulate => (Mode::Simulate, None),
        Command::Ledger { replay } => (Mode::Ledger, replay),
        Command::Estimate => (Mode::Estimate, None),
        Command::Selftest => (Mode::Selftest, None),
    };
    match fbl_cli::run(mode, cli.config.as_deref(), &overrides, replay.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
