use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::Serialize;
use smu_core::datasets::DatasetSpec;
use smu_core::micronet::{parse_model_spec, OptimizerKind, TrainConfig};
use smu_core::Preset;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "smu",
    version,
    about = "Smooth Maximum Unit activations: curves, gradient checks and small training experiments",
    args_override_self = true
)]
pub struct Cli {
    /// JSON object whose keys mirror the subcommand's flags; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an activation and its derivative over an x range, one column pair per mu
    Plot(PlotArgs),
    /// Check analytic derivatives against central differences on the standard grid
    Gradcheck(GradcheckArgs),
    /// Train one network; writes log.csv and summary.json
    Train(TrainArgs),
    /// Train several activations on shared seeds; writes compare.csv and runs.csv
    Compare(CompareArgs),
    /// Train SMU or SMU-1 once per value of a frozen-mu grid
    SweepMu(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Plot(_) => "plot",
            Command::Gradcheck(_) => "gradcheck",
            Command::Train(_) => "train",
            Command::Compare(_) => "compare",
            Command::SweepMu(_) => "sweep-mu",
        }
    }
}

/// Shape options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ShapeArgs {
    /// Negative-branch slope (SMU, SMU-1, Leaky ReLU, PReLU) or ELU scale [default: from preset or activation]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// classification (alpha 0.25) or detection (alpha 0.01); also sets the initial mu
    #[arg(long, default_value = "classification")]
    pub preset: Preset,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// two-moons, spirals or csv:<path>
    #[arg(long, default_value = "two-moons")]
    pub dataset: String,

    /// Generated sample count [default: 2000 for two-moons, 600 for spirals]
    #[arg(long)]
    pub samples: Option<usize>,

    /// Standard deviation of the Gaussian noise on generated points [default: 0.1 / 0.02]
    #[arg(long)]
    pub noise: Option<f64>,

    /// Number of turns of each spiral arm [default: 2]
    #[arg(long)]
    pub turns: Option<f64>,

    /// Name of the label column of a CSV dataset [default: label]
    #[arg(long)]
    pub label_column: Option<String>,

    /// Share of samples held out for testing
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
}

impl DataArgs {
    pub fn spec(&self) -> Result<DatasetSpec, CliError> {
        let reject = |flag: &str, what: &str| CliError::Usage(format!("--{flag} does not apply to {what} datasets"));
        let spec = match self.dataset.as_str() {
            "two-moons" | "moons" => {
                if self.turns.is_some() {
                    return Err(reject("turns", "two-moons"));
                }
                if self.label_column.is_some() {
                    return Err(reject("label-column", "generated"));
                }
                DatasetSpec::TwoMoons { samples: self.samples.unwrap_or(2000), noise: self.noise.unwrap_or(0.1) }
            }
            "spirals" => {
                if self.label_column.is_some() {
                    return Err(reject("label-column", "generated"));
                }
                DatasetSpec::Spirals {
                    samples: self.samples.unwrap_or(600),
                    turns: self.turns.unwrap_or(2.0),
                    noise: self.noise.unwrap_or(0.02),
                }
            }
            other => match other.strip_prefix("csv:") {
                Some(path) if !path.is_empty() => {
                    for (flag, given) in [
                        ("samples", self.samples.is_some()),
                        ("noise", self.noise.is_some()),
                        ("turns", self.turns.is_some()),
                    ] {
                        if given {
                            return Err(reject(flag, "CSV"));
                        }
                    }
                    DatasetSpec::Csv {
                        path: path.to_owned(),
                        label_column: self.label_column.clone().unwrap_or_else(|| "label".into()),
                    }
                }
                _ => {
                    return Err(CliError::Usage(format!(
                        "unknown dataset '{other}' (expected two-moons, spirals or csv:<path>)"
                    )))
                }
            },
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Layer widths from input to output, e.g. 2x32x32x2
    #[arg(long, default_value = "2x32x32x2")]
    pub model: String,

    #[arg(long, default_value_t = 200)]
    pub epochs: usize,

    /// Seed for the data, the initial weights and the batch order
    #[arg(long, env = "SMU_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Learning rate; 0 runs the loop without updating anything
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub lr: f64,

    /// sgd, sgd-momentum (0.9) or adam (0.9, 0.999, 1e-8)
    #[arg(long, default_value = "sgd-momentum")]
    pub optimizer: OptimizerKind,

    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
}

impl FitArgs {
    pub fn sizes(&self) -> Result<Vec<usize>, CliError> {
        Ok(parse_model_spec(&self.model)?)
    }

    pub fn train_config(&self, preset: Preset) -> Result<TrainConfig, CliError> {
        let cfg = TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.lr,
            optimizer: self.optimizer,
            seed: self.seed,
            preset,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    #[arg(long, default_value = "smu")]
    pub activation: String,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Comma-separated mu values, one value/derivative column pair each [default: preset mu]
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, allow_negative_numbers = true)]
    pub mu: Vec<f64>,

    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub x_min: f64,

    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x_max: f64,

    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub step: f64,

    /// Output CSV, or - for standard output
    #[arg(long, default_value = "plot.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GradcheckArgs {
    #[arg(long, default_value = "smu")]
    pub activation: String,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Smoothing strength [default: preset mu]
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    /// Relative tolerance of each check
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,

    /// Report CSV, or - for standard output
    #[arg(long, default_value = "-")]
    pub out: PathBuf,

    /// Offsets the analytic x-derivative so every x check fails (negative control)
    #[arg(long, hide = true)]
    pub corrupt_derivative: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long, default_value = "smu")]
    pub activation: String,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Initial mu [default: preset mu]
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    /// Train alpha as well as mu (SMU, SMU-1)
    #[arg(long)]
    pub train_alpha: bool,

    /// Keep mu at its initial value (SMU, SMU-1)
    #[arg(long)]
    pub freeze_mu: bool,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub fit: FitArgs,

    /// Output directory
    #[arg(long, default_value = "runs/train")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Comma-separated activation names
    #[arg(
        long,
        value_delimiter = ',',
        action = ArgAction::Set,
        default_value = "smu,smu1,relu,leaky-relu,gelu,swish"
    )]
    pub activation: Vec<String>,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Initial mu for SMU and SMU-1 [default: preset mu]
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    /// Runs per activation; run i uses seed + i for weights and batch order
    #[arg(long, default_value_t = 15)]
    pub seeds: usize,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub fit: FitArgs,

    /// Output directory
    #[arg(long, default_value = "runs/compare")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// smu or smu1
    #[arg(long, default_value = "smu")]
    pub activation: String,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Comma-separated frozen mu values
    #[arg(
        long,
        value_delimiter = ',',
        action = ArgAction::Set,
        allow_negative_numbers = true,
        default_value = "0.01,0.1,1,10,100"
    )]
    pub mu: Vec<f64>,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub fit: FitArgs,

    /// Output CSV, or - for standard output
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
}
