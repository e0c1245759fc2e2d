mod commands;
mod error;
mod input;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "rro", version, about = "Robust rank-order test of a difference in medians")]
struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test two samples for a difference in medians.
    Test(TestArgs),
    /// Fit a distribution family to one sample by maximum likelihood.
    Fit(FitArgs),
    /// Run a type-1 error / power simulation set.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Mc,
    Normal,
    Exact,
    /// Monte-Carlo and normal, plus exact when enumeration is within the cap.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailArg {
    Left,
    Right,
    Two,
}

impl From<TailArg> for rro_core::Tail {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Left => rro_core::Tail::Left,
            TailArg::Right => rro_core::Tail::Right,
            TailArg::Two => rro_core::Tail::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    JohnsonSu,
    Normal,
}

impl FamilyArg {
    pub fn name(self) -> &'static str {
        match self {
            FamilyArg::JohnsonSu => "johnson-su",
            FamilyArg::Normal => "normal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct TestArgs {
    /// First sample, one value per line.
    #[arg(long)]
    x: PathBuf,
    /// Second sample, one value per line.
    #[arg(long)]
    y: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = TailArg::Two)]
    tail: TailArg,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Size of the Monte-Carlo null.
    #[arg(long, default_value_t = rro_core::mc::DEFAULT_REPLICATES)]
    mc_samples: usize,
    /// Master seed of the Monte-Carlo null.
    #[arg(long, env = "RRO_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FamilyArg::JohnsonSu)]
    family: FamilyArg,
    /// Use (k + 1) / (B + 1) instead of k / B for Monte-Carlo p-values.
    #[arg(long)]
    smoothed_p: bool,
    /// Restrict Johnson S_U fits to gamma > 0.
    #[arg(long)]
    paper_constraints: bool,
    /// Largest number of interleavings the exact backend may enumerate.
    #[arg(long, default_value_t = rro_core::DEFAULT_ENUMERATION_CAP)]
    exact_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// Sample, one value per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FamilyArg::JohnsonSu)]
    family: FamilyArg,
    #[arg(long)]
    paper_constraints: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Simulation set: 1, 2, 3a, 3b, 4, 5, 6, 7 or 8.
    #[arg(long)]
    set: String,
    /// Skew direction (ls or rs); defaults to every direction of the set.
    #[arg(long)]
    direction: Option<String>,
    /// Sample pairs per size pair.
    #[arg(long, default_value_t = rro_core::sim::DEFAULT_PAIR_COUNT)]
    pairs: usize,
    /// Null cardinality; comma-separated values sweep (set 8 defaults to 100,1000,10000,100000).
    #[arg(long, value_delimiter = ',')]
    mc_samples: Option<Vec<usize>>,
    #[arg(long, env = "RRO_SEED", default_value_t = 0)]
    seed: u64,
    /// Output directory for the CSV, JSON and manifest files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Size pairs as "m,n;m,n;...".
    #[arg(long)]
    sizes: Option<String>,
    /// Significance levels, comma-separated (default 0.01,...,0.10).
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Include every p-value in the JSON summary.
    #[arg(long)]
    retain_p_values: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Test(args) => commands::test(&args, &mut stdout),
        Command::Fit(args) => commands::fit(&args, &mut stdout),
        Command::Simulate(args) => commands::simulate(&args, &mut stdout),
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
