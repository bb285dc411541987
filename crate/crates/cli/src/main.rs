//! `surfcode` command-line front end.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Surface-code threshold simulations, exact gate checks and resource
/// estimates.
///
/// Options may also come from a flat `key = value` file given with
/// `--config`; keys are the long option names (`shots = 100000`) and flags
/// on the command line take precedence. Grids of rates use `start:stop:step`
/// (inclusive) or a comma list. Data goes to standard output or `--out`;
/// progress goes to standard error. Exit codes: 0 success, 1 check failure,
/// 2 usage error.
#[derive(Debug, Parser)]
#[command(name = "surfcode", version, arg_required_else_help = true)]
pub struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for Monte Carlo shots (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print the distance-D planar layout (`d=<D>`, then `row col role
    /// active` per site) and exit.
    #[arg(long, value_name = "D")]
    pub dump_layout: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo logical error rates over distances and a p-grid, with
    /// the crossing estimate and fitted slopes.
    Threshold(ThresholdArgs),
    /// Run the exact gate, distillation and logical-operation checks.
    Verify(VerifyArgs),
    /// Factoring-machine resource estimate.
    Estimate(EstimateArgs),
    /// Closed-form logical error rate or qubit-count curves.
    ModelCurves(CurveArgs),
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Code distances, comma separated, each in 3..=11 [default: 3,5,7].
    #[arg(long)]
    pub d: Option<String>,
    /// Per-step error rates, `start:stop:step` or a list, within (0, 0.02]
    /// [default: 0.002:0.012:0.002].
    #[arg(long)]
    pub p: Option<String>,
    /// Shots per point [default: 10000].
    #[arg(long)]
    pub shots: Option<u64>,
    /// Master seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noisy rounds per shot; 0 means d rounds [default: 0].
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Error classes set to p, comma separated; the others are noiseless
    /// [default: 0,1,2].
    #[arg(long)]
    pub classes: Option<String>,
    /// CSV output path instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only these suites, comma separated: stabilizer_pair, cnot, phase,
    /// distill, identities, braid, hadamard, scenarios, lattice.
    #[arg(long)]
    pub only: Option<String>,
    /// Write braid, Hadamard and scenario transcripts into this directory.
    #[arg(long)]
    pub emit_scripts: Option<PathBuf>,
    /// Seed for sampled checks and random measurement outcomes [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Key size N in bits [default: 2000].
    #[arg(long)]
    pub bits: Option<u64>,
    /// Measurement time in ns [default: 100].
    #[arg(long)]
    pub tmeas_ns: Option<f64>,
    /// Surface-code cycle time in ns [default: 200].
    #[arg(long)]
    pub cycle_ns: Option<f64>,
    /// Per-step physical error rate [default: 1e-3].
    #[arg(long)]
    pub p: Option<f64>,
    /// Injected magic-state error rate [default: 0.005].
    #[arg(long)]
    pub p_inject: Option<f64>,
    /// Also print one row (1..=4) of the factoring-circuit trade-off table.
    #[arg(long)]
    pub table1_row: Option<usize>,
    /// Logical-rate model: `factoring` (0.03 (p/0.01)^(d/2)) or `power-law`
    /// (0.03 (p/0.0057)^d_e) [default: factoring].
    #[arg(long)]
    pub model: Option<String>,
    /// `text` (aligned) or `kv` (`key = value`) [default: text].
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// `rate` (closed-form P_L against p per distance) or `qubits` (n_q
    /// against p/p_th per target) [default: rate].
    #[arg(long)]
    pub curve: Option<String>,
    /// Distances for `rate`, comma separated; may be empty
    /// [default: 3,7,11,25,55].
    #[arg(long)]
    pub d: Option<String>,
    /// Error rates for `rate` [default: 0.0005:0.01:0.0005].
    #[arg(long)]
    pub p: Option<String>,
    /// Target logical rates for `qubits` [default: 1e-10,1e-15,1e-20].
    #[arg(long)]
    pub targets: Option<String>,
    /// p/p_th values for `qubits`, each in (0, 1) [default: 0.05:0.95:0.05].
    #[arg(long)]
    pub ratios: Option<String>,
    /// CSV output path instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a command ended.
#[derive(Debug)]
pub enum Failure {
    /// Some check failed; exit 1.
    Check(String),
    /// Bad input or configuration; exit 2.
    Usage(String),
}

impl From<surfcode::Error> for Failure {
    fn from(e: surfcode::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
