//! `pk`: kernels of paired and Toeplitz operators from JSON symbol files.
//!
//! Exit codes: 0 success, 1 schema or flag error, 2 degenerate input or
//! failed precondition, 3 engine and oracle disagree.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pk_core::oracle::OracleConfig;

#[derive(Parser, Debug)]
#[command(name = "pk", version, about = "Exact kernels of paired and Toeplitz operators, checked by an FFT/SVD oracle")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Kernel route: normalize (cross-checked), rewrite or printed.
    #[arg(long, global = true)]
    pub route: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Grid size N for sampling on the circle.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Finite-section cutoff M.
    #[arg(long, default_value_t = 128)]
    pub cutoff: usize,
    /// Extra output rows of the tall section.
    #[arg(long, default_value_t = 64)]
    pub buffer: usize,
    /// Tolerance for principal angles and residuals.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

impl OracleArgs {
    pub fn config(&self) -> OracleConfig {
        OracleConfig { grid_n: self.grid, cutoff_m: self.cutoff, buffer_k: self.buffer, ..OracleConfig::default() }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kernel of S = aP+ + bP- on H2+ for a pair file {"a": .., "b": ..}.
    Kernel {
        pair: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Minimal Toeplitz kernel containing b ker T(a).
    Minimal {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Kernel of a finite-rank asymmetric truncated Toeplitz operator.
    Atto {
        spec: PathBuf,
        /// Recompute the compression kernel for a second alpha and compare.
        #[arg(long)]
        alpha_check: bool,
        /// Second alpha (blaschke JSON); defaults to z^(deg alpha + 3).
        #[arg(long, requires = "alpha_check")]
        second_alpha: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Oracle-only check of the engine kernel or of a claimed kernel report.
    Verify {
        pair: PathBuf,
        /// Kernel report whose "dim" and "factor" are checked instead.
        #[arg(long)]
        claim: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Split ker+(a, b) into k explicit elements and ker+(a z^k, b).
    Decompose {
        pair: PathBuf,
        #[arg(long)]
        k: usize,
    },
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
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli, &outcome.report) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if let Some(msg) = &outcome.mismatch {
                eprintln!("verification failed: {msg}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
