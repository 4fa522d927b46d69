mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::CliError;

#[derive(Parser)]
#[command(name = "dunkl", version, about = "Dunkl transform, square-function and multiplier experiments")]
struct Cli {
    /// Seed for randomized batteries; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward or inverse Dunkl transform of a sampled field.
    Transform(TransformArgs),
    /// g, g* and maximal function values at a set of points.
    Gfunc(GfuncArgs),
    /// Modified Hörmander condition for a multiplier.
    HormanderCheck(HormanderArgs),
    /// Symbolic Leibniz rule for Dunkl derivatives.
    #[command(subcommand)]
    Leibniz(LeibnizCommand),
    /// L^p ratio sweep of a multiplier over a function battery.
    MultiplierSweep(ConfigArgs),
    /// Pointwise domination of g_{k+1} of the multiplied field by g*.
    Domination(DominationArgs),
    /// Dunkl kernel E_κ(ix, y) at one pair of points.
    KernelEval(KernelArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Group config: a TOML file with keys d and kappas, or the same keys inline ("d = 1, kappas = [0.5]").
    #[arg(long, default_value = "d = 1, kappas = [0.0]")]
    group: String,
}

#[derive(Args)]
struct GridArgs {
    /// Nodes per axis.
    #[arg(long)]
    n: Option<usize>,
    /// Box half-width per axis.
    #[arg(long)]
    l: Option<f64>,
}

#[derive(Args)]
pub struct TransformArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV of samples on the grid nodes (columns: coordinates…, re, im).
    #[arg(long, conflicts_with = "field", required_unless_present = "field")]
    input: Option<PathBuf>,
    /// Expression to sample instead of reading a CSV.
    #[arg(long)]
    field: Option<String>,
    /// Output CSV; defaults to transform.csv in the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat the input as frequency samples and apply the inverse transform.
    #[arg(long)]
    inverse: bool,
    /// Largest accepted relative Plancherel defect.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Args)]
pub struct GfuncArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Expression for f.
    #[arg(long)]
    field: String,
    /// Evaluation points separated by ';', coordinates by ','.
    #[arg(long)]
    points: Option<String>,
    /// Order of the maximal-function weight; defaults to s.
    #[arg(long)]
    maximal_order: Option<f64>,
    /// Skip the maximal function.
    #[arg(long)]
    no_maximal: bool,
}

#[derive(Args)]
pub struct HormanderArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Multiplier expression in ξ (see the README); "one" is an alias for 1.
    #[arg(long)]
    m: String,
    /// Smoothness; defaults to the least integer above d_κ/2.
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Number of log-spaced times in [1e-3, 1e3].
    #[arg(long)]
    t_nodes: Option<usize>,
    /// Also write an SVG plot of the per-time values.
    #[arg(long)]
    plot: bool,
}

#[derive(Subcommand)]
pub enum LeibnizCommand {
    /// Print the expansion of D^α(m g) for radial g.
    Expand(LeibnizExpandArgs),
    /// Compare expansions with direct exact differentiation on the symbol battery.
    Verify(LeibnizVerifyArgs),
}

#[derive(Args)]
pub struct LeibnizExpandArgs {
    /// Multi-index, one entry per axis.
    #[arg(long, num_args = 1.., required = true)]
    alpha: Vec<u32>,
    /// Substitute these multiplicities (TOML file or inline keys d and kappas).
    #[arg(long)]
    group: Option<String>,
    /// Use the radial-symbol form.
    #[arg(long)]
    radial: bool,
}

#[derive(Args)]
pub struct LeibnizVerifyArgs {
    /// Check a single multi-index; otherwise every |α| ≤ max-order.
    #[arg(long, num_args = 1..)]
    alpha: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    max_order: usize,
}

#[derive(Args)]
pub struct ConfigArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
pub struct DominationArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Repeat on the refined grid and report the change of each constant.
    #[arg(long)]
    refine: bool,
    /// Largest accepted relative change under refinement.
    #[arg(long, default_value_t = 0.1)]
    refine_tolerance: f64,
}

#[derive(Args)]
pub struct KernelArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    x: Vec<f64>,
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    y: Vec<f64>,
    /// Evaluate E_κ(x, y) at real arguments instead.
    #[arg(long)]
    real: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Transform(a) => commands::transform(&a),
        Command::Gfunc(a) => commands::gfunc(&a),
        Command::HormanderCheck(a) => commands::hormander_check(&a),
        Command::Leibniz(LeibnizCommand::Expand(a)) => commands::leibniz_expand(&a),
        Command::Leibniz(LeibnizCommand::Verify(a)) => commands::leibniz_verify(&a),
        Command::MultiplierSweep(a) => commands::multiplier_sweep(&a, seed),
        Command::Domination(a) => commands::domination(&a, seed),
        Command::KernelEval(a) => commands::kernel_eval(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("FAILED: {msg}");
            ExitCode::from(1)
        }
    }
}
