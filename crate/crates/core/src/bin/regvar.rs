//! `regvar`: classify filters, build counterexamples, trace failure curves
//! and run tail verification scenarios.
//!
//! Exit codes: 0 determining / pass, 2 not determining, 3 window only,
//! 4 a verification check failed, 1 invalid input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use regvar::cli::{run, CheckTarget, Command, RunConfig, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "regvar", version, about = "Regular variation under linear filters")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Coefficients `w1,w2,...`, `geom:first,ratio` or `powerlaw:e`.
    #[arg(long)]
    weights: Option<String>,
    /// Random factor, e.g. `gamma:2,1` or `two-point:1,0.73,2.718,0.27`.
    #[arg(long)]
    dist: Option<String>,
    /// Kernel, e.g. `exp:1`, `step:0.5,1,1,2`.
    #[arg(long)]
    kernel: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a filter determines regular variation; prints a verdict.
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Moment slack; defaults to alpha/2.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        theta_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the verdict to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a log-periodic counterexample and verify it by simulation.
    Counterexample {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        theta0: Option<f64>,
        /// Weights whose transform vanishes; theta0 is derived from them.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        b: f64,
        #[arg(long)]
        trunc: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace failure curves of three coefficients; writes CSV and SVG.
    Curves {
        #[arg(long, default_value_t = 8)]
        branches: i64,
        #[arg(long)]
        theta_max: Option<f64>,
        /// CSV path (the SVG goes next to it) or directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named scenario from the catalog.
    Verify {
        scenario: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the shipped scenarios.
    Catalog,
}

fn config(cmd: Cmd) -> RunConfig {
    match cmd {
        Cmd::Check { target, alpha, delta, theta_max, tol, out } => {
            let target = match (target.weights, target.dist, target.kernel) {
                (Some(w), _, _) => CheckTarget::Weights(w),
                (_, Some(d), _) => CheckTarget::Dist(d),
                (_, _, Some(k)) => CheckTarget::Kernel(k),
                _ => unreachable!("clap enforces one target"),
            };
            RunConfig { command: Command::Check { target, alpha, delta, theta_max, tol }, out }
        }
        Cmd::Counterexample { alpha, theta0, weights, a, b, trunc, n, seed, out } => {
            RunConfig { command: Command::Counterexample { alpha, theta0, weights, a, b, trunc, n, seed }, out }
        }
        Cmd::Curves { branches, theta_max, out } => RunConfig { command: Command::Curves { branches, theta_max }, out },
        Cmd::Verify { scenario, n, seed, out } => RunConfig { command: Command::Verify { scenario, n, seed }, out },
        Cmd::Catalog => RunConfig { command: Command::Catalog, out: None },
    }
}

fn main() -> ExitCode {
    // clap's own usage exit code (2) would collide with "not determining"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    match run(&config(cli.command)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
