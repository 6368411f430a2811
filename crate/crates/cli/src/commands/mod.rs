mod compare;
mod gradcheck;
mod plot;
mod sweep;
mod train;

use std::path::Path;

use serde::Serialize;
use smu_core::activation::ActivationKind;
use smu_core::datasets::Dataset;
use smu_core::micronet::{train as fit, Network, TrainConfig, TrainingLog};

pub use compare::{compare, CompareRow, COMPARE_HEADER};
pub use gradcheck::gradcheck;
pub use plot::plot;
pub use sweep::sweep_mu;
pub use train::{train, Summary};

use crate::args::{Command, ShapeArgs};
use crate::error::CliError;

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Plot(a) => plot(a),
        Command::Gradcheck(a) => gradcheck(a),
        Command::Train(a) => train(a),
        Command::Compare(a) => compare(a),
        Command::SweepMu(a) => sweep_mu(a),
    }
}

/// Builds an activation from its name and the shape flags.
///
/// With `strict`, `--alpha` or `--mu` on an activation that has no use for them is an error;
/// otherwise they are applied only where they mean something.
fn resolve_activation(
    name: &str,
    shape: &ShapeArgs,
    mu: Option<f64>,
    strict: bool,
) -> Result<ActivationKind, CliError> {
    let probe = ActivationKind::from_name(name, None, None, shape.preset)?;
    let takes_alpha = matches!(
        probe,
        ActivationKind::Smu(_)
            | ActivationKind::Smu1(_)
            | ActivationKind::LeakyRelu { .. }
            | ActivationKind::Prelu { .. }
            | ActivationKind::Elu { .. }
    );
    let takes_mu = probe.smu_params().is_some();
    if strict && shape.alpha.is_some() && !takes_alpha {
        return Err(CliError::Usage(format!("--alpha does not apply to {}", probe.name())));
    }
    if strict && mu.is_some() && !takes_mu {
        return Err(CliError::Usage(format!("--mu applies only to smu and smu1, not {}", probe.name())));
    }
    let alpha = shape.alpha.filter(|_| takes_alpha);
    let mu = mu.filter(|_| takes_mu);
    Ok(ActivationKind::from_name(name, alpha, mu, shape.preset)?)
}

/// Writes to `path`, or to standard output when it is `-`.
fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        print!("{contents}");
        return Ok(());
    }
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Usage(format!("cannot create output directory {}: {e}", path.display())))
}

/// Prints the fully resolved configuration of a run to stderr as one JSON line.
fn print_resolved(command: &str, resolved: &impl Serialize) {
    let json = serde_json::to_string(resolved).unwrap_or_else(|e| format!("\"unserializable: {e}\""));
    eprintln!("resolved config ({command}): {json}");
}

fn run_one(
    dataset: &Dataset,
    sizes: &[usize],
    kind: ActivationKind,
    cfg: &TrainConfig,
) -> Result<TrainingLog, CliError> {
    let mut net = Network::mlp(sizes, kind, cfg.seed)?;
    Ok(fit(&mut net, dataset, cfg)?)
}

/// Mean and sample standard deviation; the deviation of a single value is 0.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
