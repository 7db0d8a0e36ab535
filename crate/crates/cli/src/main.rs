mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Failure;
use crate::output::Format;

const THREADS_VAR: &str = "CEVOPT_THREADS";

#[derive(Parser)]
#[command(
    name = "cevopt",
    version,
    about = "Cevian sub-simplex volume ratios and their maximum"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume ratios V_i/V at a point given by barycentric coordinates
    Ratio(RatioArgs),
    /// Maximum of (V_1 + ... + V_k)/V and the point attaining it
    Optimum(OptimumArgs),
    /// Cross-check the maximum against direct search and Cartesian geometry
    Verify(VerifyArgs),
    /// Samples of the reduced objective, its derivative and the cubic
    Curve(CurveArgs),
    /// Exact search for rational zeros of the cubic over a (k, m) grid
    Search(SearchArgs),
    /// Maximum for every valid (n, k) up to a dimension
    Table(TableArgs),
}

#[derive(Args)]
pub struct RatioArgs {
    /// Comma-separated coordinates, decimal or p/r
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// 1-based vertex index
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub index: Option<usize>,
    /// Report every index
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct Config {
    /// Dimension of the simplex
    #[arg(long)]
    pub n: usize,
    /// Number of leading sub-volumes in the sum
    #[arg(long)]
    pub k: usize,
}

#[derive(Args)]
pub struct OptimumArgs {
    #[command(flatten)]
    pub config: Config,
    /// Width of the final root bracket
    #[arg(long, default_value_t = cevopt_core::optimum::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub config: Config,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Random simplex and point pairs for the geometric check
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub config: Config,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub k_max: u64,
    #[arg(long)]
    pub m_max: u64,
    /// Resume from and append to this file
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => {
                return Err(Failure::Usage(format!(
                    "{THREADS_VAR} must be a positive integer, got {raw:?}"
                )))
            }
        }
    }
    builder
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn dispatch(command: Command) -> Result<commands::Report, Failure> {
    match command {
        Command::Ratio(a) => commands::ratio::run(&a),
        Command::Optimum(a) => commands::optimum::run(&a),
        Command::Verify(a) => commands::verify::run(&a),
        Command::Curve(a) => commands::curve::run(&a),
        Command::Search(a) => commands::search::run(&a),
        Command::Table(a) => commands::table::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(cli.command)));
    match result {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout
                .write_all(report.stdout.as_bytes())
                .and_then(|_| stdout.flush())
            {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(3);
            }
            for line in &report.stderr {
                eprintln!("{line}");
            }
            if report.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
