//! Command-line grammar.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qcollide::collision::Backend;
use qcollide::{DensityOperator, PauliWeights};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qcollide", version, about = "Collision-model simulation of indivisible qubit channels")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Final state and affine map after J collisions.
    Simulate(SimulateArgs),
    /// Bloch trajectories under the continuous family E_t, t in [0, n].
    Trajectory(TrajectoryArgs),
    /// Lower bounds on the step distances ||E_{j+1} - E_j||_cb.
    Distance(DistanceArgs),
    /// Numeric generator coefficients next to the printed closed forms.
    Generator(GeneratorArgs),
    /// Whether the weights give an indivisible family.
    Divisible(DivisibleArgs),
    /// Random-unitary collision model driven by a JSON spec.
    Randomunitary(RandomUnitaryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Fast,
    Dense,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Fast => Backend::Fast,
            BackendArg::Dense => Backend::Dense,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Pauli weights; entries may be decimals or fractions such as `1/3`.
#[derive(Debug, Clone, clap::Args)]
pub struct WeightsArg {
    #[arg(long, value_name = "QX,QY,QZ", default_value = "1/3,1/3,1/3")]
    pub q: String,
}

impl WeightsArg {
    pub fn weights(&self) -> Result<PauliWeights, CliError> {
        let v = parse_triple(&self.q)?;
        Ok(PauliWeights::from_array(v)?)
    }
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub q: WeightsArg,
    #[arg(long)]
    pub n: usize,
    /// Collisions to apply; defaults to n.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
    pub backend: BackendArg,
    /// Initial Bloch vector `x,y,z` or one of z+, z-, x+, x-, y+, y-.
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
    /// Replace the interaction angle pi/(2n).
    #[arg(long, allow_hyphen_values = true)]
    pub eta_override: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, clap::Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub q: WeightsArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Initial states separated by `;` (flag may be repeated).
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true, default_value = "z+;z-")]
    pub states: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub q: WeightsArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GeneratorArgs {
    #[command(flatten)]
    pub q: WeightsArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Emit NaN rows inside singular windows instead of failing.
    #[arg(long)]
    pub segment: bool,
    /// Evaluate at a single time instead of the grid.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct DivisibleArgs {
    #[command(flatten)]
    pub q: WeightsArg,
}

#[derive(Debug, clap::Args)]
pub struct RandomUnitaryArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub state_file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Invalid(format!("cannot parse number {s:?}"));
    let v = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_triple(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Invalid(format!("expected three comma-separated values, got {s:?}")));
    }
    Ok([parse_number(parts[0])?, parse_number(parts[1])?, parse_number(parts[2])?])
}

/// Bloch vector for an alias or an explicit triple.
pub fn parse_state(s: &str) -> Result<[f64; 3], CliError> {
    let alias = s.trim().replace('\u{2212}', "-");
    let r = match alias.as_str() {
        "z+" => [0.0, 0.0, 1.0],
        "z-" => [0.0, 0.0, -1.0],
        "x+" => [1.0, 0.0, 0.0],
        "x-" => [-1.0, 0.0, 0.0],
        "y+" => [0.0, 1.0, 0.0],
        "y-" => [0.0, -1.0, 0.0],
        _ => parse_triple(s)?,
    };
    DensityOperator::from_bloch(r)?;
    Ok(r)
}

/// Label written to the `state` CSV column; commas would break the row.
pub fn state_label(s: &str) -> String {
    s.trim().replace('\u{2212}', "-").replace(',', ":")
}
