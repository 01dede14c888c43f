mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use starter_core::{SolverConfig, VariableOrder};

#[derive(Parser)]
#[command(name = "starters", version, about = "Strong starters: verify, search, triplicate, invert")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check each starter in a file.
    Verify {
        #[arg(long, value_name = "FILE")]
        starter: PathBuf,
    },
    /// Count (and optionally list) all strong starters of a small order.
    Enumerate {
        #[arg(long)]
        order: u32,
        /// Write every starter found to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Generate strong starters by hill climbing.
    Hillclimb {
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        /// Starter file to write; stdout (JSON lines) when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build a starter of order 3p from a base of order p and a key.
    Triplicate {
        #[command(flatten)]
        job: Job,
        /// Report path; the two starters go next to it.
        #[arg(long, value_name = "FILE", default_value = "triplication.json")]
        out: PathBuf,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        allow_nonstrong: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write the mod-3 constraint problem for (base, key) as DIMACS CNF.
    Encode {
        #[command(flatten)]
        job: Job,
        #[arg(long, value_name = "FILE")]
        cnf_out: PathBuf,
    },
    /// Solve the mod-3 constraint problem for (base, key).
    Solve {
        #[command(flatten)]
        job: Job,
        /// Command run on the CNF file instead of the built-in solver;
        /// `{cnf}` is replaced by its path.
        #[arg(long, value_name = "COMMAND")]
        external_solver: Option<String>,
        #[arg(long, value_name = "FILE")]
        cnf_out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Decide whether a starter of order 3p could come from triplication.
    Invert {
        #[arg(long, value_name = "FILE")]
        starter: PathBuf,
        /// Write the full verdict as JSON.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run an experiment series and write CSV.
    Series {
        #[command(subcommand)]
        mode: SeriesMode,
    },
}

#[derive(Args)]
struct Job {
    /// Base starter file (JSON or plain text).
    #[arg(long, value_name = "FILE")]
    base: PathBuf,
    #[arg(long)]
    key: u32,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = OrderArg::Wdeg)]
    var_order: OrderArg,
    /// Seed for the random variable order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give up after this many propagation steps.
    #[arg(long)]
    step_budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Wdeg,
    Linear,
    Domain,
    Random,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let variable_order = match self.var_order {
            OrderArg::Wdeg => VariableOrder::WeightedDegree,
            OrderArg::Linear => VariableOrder::LinearIndex,
            OrderArg::Domain => VariableOrder::SmallestDomain,
            OrderArg::Random => VariableOrder::Random(self.seed),
        };
        SolverConfig {
            variable_order,
            step_budget: self.step_budget,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum SeriesMode {
    /// Every admissible key of one base.
    Keys {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
    },
    /// One hill-climbed base and one random admissible key per order.
    Orders {
        #[arg(long, value_delimiter = ',', required = true)]
        order: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
    },
    /// Repeated key sweeps of one base, plus per-key mean times.
    Repeat {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        /// Per-key means; defaults to `<out>.means.csv`.
        #[arg(long, value_name = "CSV")]
        means_out: Option<PathBuf>,
    },
    /// Inverse test on hill-climbed starters of order 3p.
    Sampling {
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
