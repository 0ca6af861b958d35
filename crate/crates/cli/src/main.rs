use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evpkit::NormTag;
use evpkit_cli::{
    cmd_analyze, cmd_approx, cmd_scan, cmd_solve, cmd_validate, cmd_verify, AnalyzeArgs, SolveArgs, DEFAULT_SEED,
    DEFAULT_TRIALS,
};

/// Exact vector Ekeland points on finite metric spaces.
#[derive(Parser)]
#[command(name = "evpkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every instance invariant (metric axioms, D ⊂ K, 0 ∉ D + K).
    Validate { path: PathBuf },
    /// Compute an Ekeland point from a start and write its certificate.
    Solve {
        path: PathBuf,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a certificate against an instance with the independent oracle.
    Verify { instance: PathBuf, certificate: PathBuf },
    /// List every point with no strict r-successor.
    Scan {
        path: PathBuf,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Approximate-solution status and the localization bound d(x, x̄) < λ.
    Approx {
        path: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        lambda: String,
    },
    /// Gap, separating functional, Bishop–Phelps and Rolewicz checks.
    Analyze {
        path: PathBuf,
        /// Comma-separated functional, e.g. `1,1`.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = NormTag::Inf)]
        norm: NormTag,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Solve { path, start, scale, out } => cmd_solve(
            path,
            &SolveArgs {
                start: start.as_deref(),
                scale: scale.as_deref(),
                out: out.as_deref(),
            },
        ),
        Command::Verify { instance, certificate } => cmd_verify(instance, certificate),
        Command::Scan { path, scale, csv } => cmd_scan(path, scale.as_deref(), csv.as_deref()),
        Command::Approx { path, point, eps, lambda } => cmd_approx(path, point, eps, lambda),
        Command::Analyze { path, phi, alpha, norm, trials, seed } => cmd_analyze(
            path,
            &AnalyzeArgs {
                phi: phi.as_deref(),
                alpha: alpha.as_deref(),
                norm: *norm,
                trials: *trials,
                seed: *seed,
            },
        ),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprint!("{failure}");
            if !failure.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(failure.code as u8)
        }
    }
}
