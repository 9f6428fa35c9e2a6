//! `menger-lab`: evaluate symmetrized kernels, run verification suites,
//! reproduce the worked examples and search for extremal triples.
//!
//! ```text
//! menger-lab eval --kernel kgamma --curve parabola:1 --xs -2,0,2
//! menger-lab verify --suite all --n 10000 --seed 1 --out-dir reports
//! menger-lab reproduce --example 4.3 --a 1 --lambda 100
//! menger-lab extremal --curve parabola:1 --objective max-im-ratio --budget 100000
//! menger-lab curves --curve cubic --lo -2 --hi 2 --n 101
//! ```
//!
//! Every option may also come from `--config FILE` (`key = value` lines);
//! the command line wins. Reports go to `--out-dir`, else `out-dir` in the
//! config, else `$MENGER_LAB_OUT`, else the working directory.
//!
//! Exit status: 0 when every assertion passes, 1 when one fails, 2 on error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "menger-lab",
    version,
    about = "Three-point symmetrization of Cauchy-type kernels on graph curves"
)]
struct Cli {
    /// `key = value` file supplying defaults for any option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetrize one kernel at one triple or a CSV of triples.
    Eval(EvalArgs),
    /// Run verification suites and write JSON-lines reports.
    Verify(VerifyArgs),
    /// Recompute a worked example, direct sum beside its closed form.
    Reproduce(ReproduceArgs),
    /// Search a box of abscissa triples for an extremal ratio.
    Extremal(ExtremalArgs),
    /// Tabulate height, slope, speed, curvature and phase along a curve.
    Curves(CurvesArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// k0 | kgamma | kh | khstar | ks
    #[arg(long)]
    pub kernel: Option<String>,
    /// line[:m[:c]] | parabola:<a> | cubic | bumpsine | cosh
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// const:<v> | graph:<curve> | sinusoidal
    #[arg(long)]
    pub phase: Option<String>,
    /// Three points `re,im;re,im;re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// Three abscissas `a,b,c` on the curve.
    #[arg(long, allow_hyphen_values = true)]
    pub xs: Option<String>,
    /// CSV of triples (z1_re,z1_im,z2_re,z2_im,z3_re,z3_im).
    #[arg(long)]
    pub triples: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite id, or `all`.
    #[arg(long)]
    pub suite: Option<String>,
    /// Samples per sampler.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Replace the curve of on-curve suites.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// Sampling interval for on-curve suites.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    /// Sampling window `x0 +/- delta` for on-curve suites.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Also write `<suite>.samples.csv` with the raw per-triple results.
    #[arg(long)]
    pub samples_csv: bool,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// 4.1 | 4.2 | 4.3
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// min-re-ratio | max-im-ratio | min-re
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Box `lo1:hi1,lo2:hi2,lo3:hi3`.
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
    /// Cube `[lo, hi]^3` when `--region` is absent.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::Config::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Eval(a) => commands::eval(cfg, a),
        Command::Verify(a) => commands::verify(cfg, a),
        Command::Reproduce(a) => commands::reproduce(cfg, a),
        Command::Extremal(a) => commands::extremal(cfg, a),
        Command::Curves(a) => commands::curves(cfg, a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
