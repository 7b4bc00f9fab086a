use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "oat", version, about = "One-axis twisting squeezing with collective dephasing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact squeezing metrics on a time grid.
    Evolve(EvolveArgs),
    /// Exact optimum compared with the analytic predictions.
    Minimize(CommonArgs),
    /// Optimum against the initial polar angle.
    SweepTheta(SweepThetaArgs),
    /// Optimum against the spin or against ln(gamma)/ln(S).
    Scaling(ScalingArgs),
    /// Dephasing regime of a parameter set.
    Regime(CommonArgs),
    /// Seeded comparison of the closed forms with the dense oracle.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingMode {
    /// Fixed gamma, varying S, with a power-law fit.
    Spin,
    /// Fixed S, gamma = S^r over a grid of r.
    GammaRatio,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    #[arg(long)]
    pub spin: Option<f64>,
    /// Dephasing rate in units of the twisting strength.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub phi0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_points: Option<usize>,
    /// Logarithmic time spacing.
    #[arg(long)]
    pub log: bool,
    /// Write the dense density matrix at the last grid time.
    #[arg(long)]
    pub dump_state: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SweepThetaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Interior grid points, theta_k = k pi / (n + 1).
    #[arg(long)]
    pub theta_points: Option<usize>,
    /// Comma-separated dephasing rates; defaults to --gamma.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub mode: Option<ScalingMode>,
    #[arg(long)]
    pub spin_min: Option<f64>,
    #[arg(long)]
    pub spin_max: Option<f64>,
    #[arg(long)]
    pub spin_points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub ratio_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_points: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub tol_dense: Option<f64>,
    #[arg(long)]
    pub tol_xi2: Option<f64>,
    #[arg(long)]
    pub tol_ode: Option<f64>,
}
