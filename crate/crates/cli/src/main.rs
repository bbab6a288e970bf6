//! `wht`: command-line front end for the Walsh-Hadamard spectral toolkit.

mod bench;
mod error;
mod io;
mod report;
mod solve;
mod table;
mod transform;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use wht_core::hybrid::{HybridConfig, MeasurementMode};
use wht_core::walsh::DEFAULT_MAX_QUBITS;

use crate::error::{CliError, CliResult};

/// Environment variable overriding the default cap on the qubit count `n`.
pub const MAX_QUBITS_ENV: &str = "WHT_MAX_QUBITS";

const EXPR_HELP: &str = "\
Right-hand side expressions use t, x1..xm, numbers, + - * / ^, unary minus,
parentheses and sin cos tan exp log sqrt abs. `^` is right-associative and
binds tighter than unary minus (-2^2 = -4). Multiplication must be explicit
(2*x1, not 2x1).";

#[derive(Debug, Parser)]
#[command(
    name = "wht",
    version,
    about = "Walsh-Hadamard transforms, operational matrices and Picard ODE solving"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transform a vector file with the normalized Walsh-Hadamard transform.
    Transform(TransformArgs),
    /// Print the character table or an operational matrix as CSV.
    Table(TableArgs),
    /// Solve an initial value problem by Picard iteration.
    #[command(after_help = EXPR_HELP)]
    Solve(SolveArgs),
    /// Measure operation counts and wall time of the transform backends.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformBackend {
    Naive,
    Fast,
    HybridExact,
    HybridSampled,
}

#[derive(Debug, clap::Args)]
pub struct HybridArgs {
    /// Measurement shots for the sampled backend.
    #[arg(long)]
    pub shots: Option<u64>,
    /// RNG seed; required by the sampled backend.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shift margin epsilon (default 1e-3 * (1 + sum |v_k|)).
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl HybridArgs {
    pub fn config(&self, mode: MeasurementMode) -> CliResult<HybridConfig> {
        let mut cfg = match mode {
            MeasurementMode::Exact => HybridConfig::exact(),
            MeasurementMode::Sampled => {
                let seed = self
                    .seed
                    .ok_or_else(|| CliError::Usage("the sampled backend requires --seed".into()))?;
                let shots = self.shots.ok_or_else(|| {
                    CliError::Usage("the sampled backend requires --shots".into())
                })?;
                HybridConfig::sampled(shots, seed)
            }
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(eps) = self.epsilon {
            cfg = cfg.with_epsilon(eps);
        }
        Ok(cfg)
    }
}

#[derive(Debug, clap::Args)]
pub struct TransformArgs {
    /// Input vector file (one value per line, `#` comments).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output vector file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "fast")]
    pub backend: TransformBackend,
    #[command(flatten)]
    pub hybrid: HybridArgs,
    /// Apply the inverse transform.
    #[arg(long)]
    pub inverse: bool,
    /// Write the JSON run report here instead of stderr.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Character,
    Integration,
    Differentiation,
}

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub kind: TableKind,
    /// Qubit count; the matrix is 2^n x 2^n.
    #[arg(long)]
    pub n: u32,
    /// Output CSV file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveBackend {
    Classical,
    HybridExact,
    HybridSampled,
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("system").required(true).args(["problem", "rhs"])))]
pub struct SolveArgs {
    /// Built-in problem: riccati or beer_system.
    #[arg(long, conflicts_with_all = ["rhs", "init"])]
    pub problem: Option<String>,
    /// Right-hand side expressions, one per equation.
    #[arg(long, num_args = 1.., requires = "init")]
    pub rhs: Vec<String>,
    /// Initial values, one per equation.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub init: Vec<f64>,
    /// Resolution exponent; N = 2^n samples.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Maximum number of sweeps.
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
    /// Stop when the max-norm update falls strictly below this.
    #[arg(long, default_value_t = wht_core::ode::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "classical")]
    pub backend: SolveBackend,
    #[command(flatten)]
    pub hybrid: HybridArgs,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub domain: Option<Vec<f64>>,
    /// Directory for the per-variable CSV files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write every sweep to <name>_trace.csv.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchBackend {
    Naive,
    Fast,
    HybridExact,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Comma-separated transform lengths (powers of two).
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256, 1024, 4096])]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["fast", "hybrid-exact"])]
    pub backend: Vec<BenchBackend>,
    /// Timed repetitions per row; the minimum wall time is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: u32,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Cap on `n` from the environment, falling back to the library default.
pub fn max_qubits() -> CliResult<u32> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{MAX_QUBITS_ENV}={s} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

pub fn check_qubits(n: u32, cap: u32) -> CliResult<()> {
    if n > cap {
        return Err(wht_core::Error::ResourceLimit { n, max: cap }.into());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Transform(args) => transform::run(&args),
        Command::Table(args) => table::run(&args),
        Command::Solve(args) => solve::run(&args),
        Command::Bench(args) => bench::run(&args),
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
