//! `fracwell`: symbol identity checks, single integrals, grid scans and
//! spectral residuals for the fractional infinite well.
//!
//! Exit codes: 0 success, 2 property violation, 3 non-convergence, 4 failed
//! scan cells, 64 usage error, 66 unreadable input, 74 output I/O failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_CELL_FAILURES: u8 = 4;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_NO_INPUT: u8 = 66;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(name = "fracwell", about = "Fractional infinite-well consistency checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check |q|^alpha = [(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2)) on random real q
    SymbolCheck(SymbolCheckArgs),
    /// Evaluate the integral representation at one point
    Integrate(IntegrateArgs),
    /// Run a grid scan described by a config file
    Scan(ScanArgs),
    /// Check the grid Riesz operator and the eigenvalue residual of the piecewise state
    SpectralCheck(SpectralCheckArgs),
}

#[derive(Debug, Args)]
struct SymbolCheckArgs {
    #[arg(long, default_value_t = 1.01)]
    alpha_min: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 50.0)]
    q_max: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Print `q,alpha,relative_residual` for every sample
    #[arg(long)]
    per_sample: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    DirectTail,
    DirectAbel,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct WellArgs {
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    d_alpha: f64,
    #[arg(long, default_value_t = 1.0, conflicts_with = "normalized_amplitude")]
    amplitude: f64,
    /// Use the box normalization A = 1 / sqrt(a)
    #[arg(long)]
    normalized_amplitude: bool,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    x_tilde: f64,
    #[arg(long, default_value_t = 1)]
    n: i64,
    #[arg(long, value_enum, default_value_t = MethodArg::Contour)]
    method: MethodArg,
    #[command(flatten)]
    well: WellArgs,
    #[arg(long, default_value_t = 1e-8)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_evaluations: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct ScanArgs {
    config: PathBuf,
    /// Overrides `output` from the config; `-` writes to stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overrides `format` from the config
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Overrides `workers` from the config; 1 runs sequentially
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct SpectralCheckArgs {
    /// Grid size, a power of two >= 8
    #[arg(long = "grid", default_value_t = 1024)]
    grid: usize,
    /// Period in units of a
    #[arg(long, default_value_t = 16.0)]
    period: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    n: i64,
    /// Index k of the pure mode exp(2 pi i k x / L)
    #[arg(long, default_value_t = 3)]
    mode: usize,
    #[command(flatten)]
    well: WellArgs,
}

fn version() -> &'static str {
    Box::leak(format!("{} (schema {})", fracwell::TOOL_VERSION, fracwell::SCHEMA_VERSION).into_boxed_str())
}

fn main() -> ExitCode {
    let matches = Cli::command().version(version()).try_get_matches();
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let code = match cli.command {
        Command::SymbolCheck(args) => commands::symbol_check(&args),
        Command::Integrate(args) => commands::integrate(&args),
        Command::Scan(args) => commands::scan(&args),
        Command::SpectralCheck(args) => commands::spectral_check(&args),
    };
    ExitCode::from(code)
}
