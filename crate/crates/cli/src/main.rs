//! `fwkit`: batch driver for Frank-Wolfe experiments.
//!
//! Exit codes: 0 success, 1 a certificate failed, 2 bad input, 3 solver
//! error, 4 undecided separation.

mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fwkit::certify::{LowerBoundTarget, DEFAULT_PAIRS, DEFAULT_SEED};
use fwkit::Region;

use commands::{CaratheodoryArgs, CertifyArgs, CompareArgs, Globals, SeparateArgs, SolveArgs};
use output::CliError;

#[derive(Parser, Debug)]
#[command(name = "fwkit", version, about = "Frank-Wolfe experiments: solve, compare, certify")]
struct Cli {
    /// Seed for random targets, default instances and sampled certificates.
    #[arg(long, global = true, env = "FWKIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Leave the elapsed_ns column empty so traces are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one step rule on a problem spec and write the trace CSV.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        /// Step rule, e.g. open2, open-ell:4, short:2, adaptive, linesearch.
        #[arg(long, default_value = "open2")]
        step: String,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Stop once the Frank-Wolfe gap is at most this value.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Output CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several step rules on one problem and write gap columns side by side.
    Compare {
        /// Problem spec; defaults to a seeded K-sparse instance (n=100, K=10, tau=1).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "open2,short:2,adaptive")]
        rules: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the problem spec that was run.
        #[arg(long)]
        save_spec: Option<PathBuf>,
    },
    /// Check a trace CSV against convergence bounds and write a JSON report bundle.
    Certify {
        /// Problem spec the trace was produced from.
        #[arg(long)]
        spec: PathBuf,
        /// Trace CSV written by `solve`.
        #[arg(long)]
        trace: PathBuf,
        /// Certificates to run.
        #[arg(long, value_delimiter = ',', default_value = "primal-rate,dual-rate,smoothness-progress")]
        which: Vec<String>,
        /// Sample pairs (or points) for the sampled checks.
        #[arg(long, default_value_t = DEFAULT_PAIRS)]
        pairs: usize,
        /// Output JSON; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a point of a region as a sparse convex combination of vertices.
    Caratheodory {
        /// Spec whose distance_squared center is the target.
        #[arg(long, conflicts_with_all = ["region", "target"])]
        spec: Option<PathBuf>,
        /// Region, e.g. simplex:100 or box:3:0:1.
        #[arg(long, requires = "target")]
        region: Option<Region>,
        /// `uniform`, `random`, or comma-separated coordinates.
        #[arg(long, requires = "region")]
        target: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Defaults to ceil(4 D² / epsilon²).
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long, default_value = "short:2")]
        step: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separate a point from a region by a valid inequality, or certify it is within epsilon.
    Separate {
        #[arg(long)]
        region: Region,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Defaults to ceil(13.5 D² / epsilon²).
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long, default_value = "short:2")]
        step: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the spec of the simplex lower-bound instance.
    Lowerbound {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Target::Origin)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    /// f(x) = ‖x‖²
    Origin,
    /// f(x) = ‖x − (1/n, …, 1/n)‖²
    Uniform,
}

fn dispatch(cli: Cli) -> Result<output::Status, CliError> {
    let globals = Globals { seed: cli.seed, timing: !cli.no_timing };
    match cli.command {
        Command::Solve { spec, step, max_iter, epsilon, out } => {
            commands::cmd_solve(&SolveArgs { spec, step, max_iter, epsilon, out }, globals)
        }
        Command::Compare { spec, rules, max_iter, epsilon, out, save_spec } => {
            commands::cmd_compare(&CompareArgs { spec, rules, max_iter, epsilon, out, save_spec }, globals)
        }
        Command::Certify { spec, trace, which, pairs, out } => {
            commands::cmd_certify(&CertifyArgs { spec, trace, which, pairs, out }, globals)
        }
        Command::Caratheodory { spec, region, target, epsilon, max_iter, step, out } => {
            commands::cmd_caratheodory(
                &CaratheodoryArgs { spec, region, target, epsilon, max_iter, step, out },
                globals,
            )
        }
        Command::Separate { region, point, epsilon, max_iter, step, out } => {
            commands::cmd_separate(&SeparateArgs { region, point, epsilon, max_iter, step, out }, globals)
        }
        Command::Lowerbound { n, target, out } => {
            let target = match target {
                Target::Origin => LowerBoundTarget::Origin,
                Target::Uniform => LowerBoundTarget::Uniform,
            };
            commands::cmd_lowerbound(n, target, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("fwkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
