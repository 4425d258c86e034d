//! `qgamma`: verification tables for the quaternionic Gamma functions, the
//! conductor operator and the truncated trace.
//!
//! Exit codes: `0` success, `1` numerical failure (including a result outside
//! `--tol`), `2` usage error. The worker-thread count is read from
//! `QGAMMA_THREADS` (default: available parallelism).

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::CliError;

pub const THREADS_ENV: &str = "QGAMMA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qgamma", version, about = "Quaternionic Tate Gamma functions: tables and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Γ_N on the critical line (τ-grid) or on a strip grid (--s-grid).
    GammaTable(GammaTableArgs),
    /// h_N and k_N on a τ-grid, with extrema in the summary.
    SpectralScan(SpectralScanArgs),
    /// Residuals of the Gaussian-moment functional equation on a strip grid.
    FunctionalEq(FunctionalEqArgs),
    /// Brute-force 4D Fourier transform against ω and the Γ multiplier.
    OracleCheck(OracleCheckArgs),
    /// Truncated trace by both routes over a Λ list, with the leading-term fit.
    TraceSweep(TraceSweepArgs),
    /// The point-mass constant 4 log 2π + 4γ - 2 from the ε-expansion of Γ₀.
    GConstant(GConstantArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModeRange {
    /// Smallest representation index N.
    #[arg(long, default_value_t = 0)]
    pub n_min: u32,
    /// Largest representation index N.
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
}

#[derive(Debug, Clone, Args)]
pub struct TauRange {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tau_step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GammaTableArgs {
    #[command(flatten)]
    pub modes: ModeRange,
    #[command(flatten)]
    pub tau: TauRange,
    /// Use a K×K strip grid instead of the critical line: Re s at the
    /// midpoints of K cells of (0, 1), Im s uniform on [tau-min, tau-max].
    #[arg(long)]
    pub s_grid: Option<usize>,
    /// Fail if any critical-line entry has ||γ_N| - 1| above this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectralScanArgs {
    #[command(flatten)]
    pub modes: ModeRange,
    #[command(flatten)]
    pub tau: TauRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionalEqArgs {
    #[command(flatten)]
    pub modes: ModeRange,
    /// Strip grid size K (K×K points); 0 gives an empty table.
    #[arg(long, default_value_t = 20)]
    pub s_grid: usize,
    /// Im s range of the strip grid.
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub tau_max: f64,
    /// Fail if any residual exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleCheckArgs {
    /// Half-extent L of the cube [-L, L]⁴.
    #[arg(long, default_value_t = 2.0)]
    pub grid_l: f64,
    /// Points per axis M (odd).
    #[arg(long, default_value_t = 33)]
    pub grid_m: usize,
    #[arg(long, default_value_t = 10)]
    pub probes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail if any relative error exceeds this; errors are only reported otherwise.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TraceSweepArgs {
    #[arg(long, default_value_t = 0)]
    pub n_min: u32,
    #[arg(long, default_value_t = 0)]
    pub n_max: u32,
    /// Comma-separated, strictly increasing, all > 1.
    #[arg(long, default_value = "2,4,8,16,32,64")]
    pub lambda_list: String,
    /// Test profile K(v) = amplitude·exp(-(v - center)²/(2 width²)).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Fail if the two routes disagree by more than this (relative).
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GConstantArgs {
    /// Convergence tolerance of the Richardson extrapolation (≥ 1e-10).
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::GammaTable(a) => commands::gamma_table(&a),
        Command::SpectralScan(a) => commands::spectral_scan(&a),
        Command::FunctionalEq(a) => commands::functional_eq(&a),
        Command::OracleCheck(a) => commands::oracle_check(&a),
        Command::TraceSweep(a) => commands::trace_sweep(&a),
        Command::GConstant(a) => commands::g_constant(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgamma: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
