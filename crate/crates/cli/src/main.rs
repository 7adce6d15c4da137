mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradiometry::{Axis, StateKind};

/// Fisher-information bounds, optimal measurements and simulations for
/// two-ensemble gradient magnetometry.
#[derive(Debug, Parser)]
#[command(name = "gradiometry", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QFI matrix and Cramér-Rao bounds for (b0, b1), with closed-form checks.
    Bounds {
        #[command(flatten)]
        split: Split,
        #[command(flatten)]
        state: StateArg,
        /// Field direction.
        #[arg(long, default_value = "y")]
        axis: Axis,
        #[command(flatten)]
        out: Output,
    },
    /// Numeric and closed-form QFIs of the four reference states.
    Table1 {
        #[command(flatten)]
        split: Split,
        #[command(flatten)]
        out: Output,
    },
    /// Half-spaces, vertices and saturated facets of the gradient-QFI polytope.
    Polytope {
        #[command(flatten)]
        split: Split,
        #[command(flatten)]
        state: StateArg,
        #[command(flatten)]
        out: Output,
    },
    /// Optimal measurement commuting with the homogeneous generator.
    Optmeas {
        #[command(flatten)]
        split: Split,
        #[command(flatten)]
        state: StateArg,
        /// Restrict to the sectors a flipped Dicke state occupies (even N only).
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Simulated projective measurements of the moment observable.
    Montecarlo {
        #[command(flatten)]
        split: Split,
        #[command(flatten)]
        state: StateArg,
        /// Homogeneous field phase.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        b0: f64,
        /// Gradient phase to estimate.
        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        b1: f64,
        /// Number of shots.
        #[arg(long, default_value_t = 100_000)]
        nu: usize,
        /// Number of batches used for the variance estimate.
        #[arg(long, default_value_t = 1000)]
        batches: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Compare the brute-force qubit register against the symmetric-subspace results.
    Verify {
        /// Largest total particle number (at most 12).
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Closed-form moment-scheme precision and its ratio to the optimum.
    Moments {
        /// Largest total particle number in the sweep.
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Split {
    /// Particles in well a.
    #[arg(long, default_value_t = 4)]
    na: u32,
    /// Particles in well b.
    #[arg(long, default_value_t = 4)]
    nb: u32,
}

#[derive(Debug, Args)]
struct StateArg {
    /// dicke, flipped-dicke, ghz, flipped-ghz or product-dicke.
    #[arg(long, default_value = "flipped-dicke")]
    state: StateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; relative paths resolve against GRADIOMETRY_OUT_DIR when set.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Command failures and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Inconsistent(String),
}

impl From<gradiometry::Error> for Failure {
    fn from(e: gradiometry::Error) -> Self {
        use gradiometry::Error as E;
        match e {
            E::EmptyWell { .. }
            | E::OddTotal(_)
            | E::OddWell { .. }
            | E::Domain(_)
            | E::InvalidParameter(_)
            | E::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Inconsistent(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds { split, state, axis, out } => commands::bounds(split.na, split.nb, state.state, axis, &out),
        Command::Table1 { split, out } => commands::table1(split.na, split.nb, &out),
        Command::Polytope { split, state, out } => commands::polytope(split.na, split.nb, state.state, &out),
        Command::Optmeas { split, state, reduced, out } => {
            commands::optmeas(split.na, split.nb, state.state, reduced, &out)
        }
        Command::Montecarlo { split, state, b0, b1, nu, batches, seed, out } => {
            let config = gradiometry::EstimationConfig {
                state: state.state,
                batches,
                ..gradiometry::EstimationConfig::new(split.na, split.nb, b0, b1, nu, seed)
            };
            commands::montecarlo(&config, &out)
        }
        Command::Verify { max_n, out } => commands::verify(max_n, &out),
        Command::Moments { max_n, out } => commands::moments(max_n, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("consistency check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
