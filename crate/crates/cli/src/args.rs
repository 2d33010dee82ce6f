use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spinring::Method;

/// Pairwise thermal entanglement in the ferromagnetic Heisenberg ring.
#[derive(Debug, Parser)]
#[command(name = "spinring", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence C(d) for d = 1..N/2.
    Profile(ProfileArgs),
    /// Two-site density matrix, its spectrum and concurrence.
    Rdm(RdmArgs),
    /// Exact, truncated and Gaussian results side by side.
    Compare(CompareArgs),
    /// Data for the two Gaussian profiles of the N = 20 reference figure.
    Figure1(Figure1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Exact,
    Truncated,
    Gaussian,
    All,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Exact => vec![Method::Exact],
            MethodChoice::Truncated => vec![Method::Truncated],
            MethodChoice::Gaussian => vec![Method::Gaussian],
            MethodChoice::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Number of sites N (>= 3).
    #[arg(long = "n", allow_negative_numbers = true)]
    pub n: Option<usize>,
    /// Coupling over temperature, J/kT (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub beta_j: Option<f64>,
    /// Field over temperature, muB/kT (>= 0; > 0 for truncated and gaussian).
    #[arg(long, allow_negative_numbers = true)]
    pub beta_mub: Option<f64>,
    /// Largest ring handled by exact diagonalization [default: 14].
    #[arg(long)]
    pub max_exact_n: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// [default: truncated]
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,
}

#[derive(Debug, Args)]
pub struct RdmArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// [default: exact]
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,
    /// The two sites m and n.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    pub sites: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Directory for the data files.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    /// Also write a gnuplot script for the two curves.
    #[arg(long)]
    pub emit_plot: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}
