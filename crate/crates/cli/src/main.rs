//! `capacity`: boundaries, simulated trajectories, cost estimates and
//! verification runs for capacity expansion with a time-to-build.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] capacity_core::Error),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical trouble, 4 for a failed check.
    pub fn exit_code(&self) -> u8 {
        use capacity_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(E::Parameter(_) | E::Domain { .. } | E::Grid(_)) => 2,
            CliError::Core(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

const AFTER_HELP: &str = "\
Figures:
  capacity --scenario gbm boundary --hs 0,1,4,8 --q0 0 --out fig_gbm_h.csv
  capacity --scenario cir_fast boundary --hs 1,8 --sigmas 0.05,0.1 --out fig_cir.csv
  capacity --scenario abm_mw boundary --sigmas 300:900:5 --out fig_abm_sigma.csv
  capacity --scenario cir_slow simulate --paths 1 --out fig_cir_path.csv
  capacity --scenario gbm simulate --paths 1000 --summary --out fig_gbm_band.csv

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 failed verification.";

#[derive(Debug, Parser)]
#[command(name = "capacity", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; see `capacity config`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named preset used when no --config is given.
    #[arg(long, global = true, default_value = "gbm")]
    pub scenario: String,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo paths.
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    /// Truncation horizon in years.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Override the option value of one unit of capacity.
    #[arg(long, global = true)]
    pub q0: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the boundary and its bias decomposition over demand levels.
    Boundary(commands::BoundaryArgs),
    /// Simulate demand, committed and installed capacity, investment and price.
    Simulate(commands::SimulateArgs),
    /// Estimate the expected discounted cost of a policy.
    Cost(commands::CostArgs),
    /// Comparative statics with finite-difference checks.
    Statics(commands::StaticsArgs),
    /// Run the oracle, identity, dominance, equilibrium and statics checks.
    Verify(commands::VerifyArgs),
    /// Print the resolved run configuration as JSON.
    Config,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = commands::resolve(&cli.common)?;
    match cli.command {
        Command::Boundary(args) => commands::boundary(&cfg, &cli.common, &args),
        Command::Simulate(args) => commands::simulate(&cfg, &cli.common, &args),
        Command::Cost(args) => commands::cost(&cfg, &cli.common, &args),
        Command::Statics(args) => commands::statics(&cfg, &cli.common, &args),
        Command::Verify(args) => commands::verify(&cfg, &cli.common, &args),
        Command::Config => commands::write(&cli.common, &cfg.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
