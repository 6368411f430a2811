use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use smu_core::activation::ActivationKind;
use smu_core::datasets::DatasetSpec;
use smu_core::micronet::TrainConfig;

use super::{create_dir, print_resolved, resolve_activation, run_one, write_output};
use crate::args::TrainArgs;
use crate::error::CliError;

/// Contents of `summary.json`.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub activation: ActivationKind,
    pub dataset: DatasetSpec,
    pub model: Vec<usize>,
    pub config: TrainConfig,
    pub train_accuracy: f64,
    pub train_loss: f64,
    pub test_accuracy: f64,
    pub test_loss: f64,
    pub mu_initial: Vec<f64>,
    pub mu_final: Vec<f64>,
    pub wall_time_seconds: f64,
}

pub fn train(args: &TrainArgs) -> Result<(), CliError> {
    let mut kind = resolve_activation(&args.activation, &args.shape, args.mu, true)?;
    match kind.smu_params_mut() {
        Some(p) => {
            p.alpha_trainable = args.train_alpha;
            p.mu_trainable = !args.freeze_mu;
        }
        None if args.train_alpha || args.freeze_mu => {
            return Err(CliError::Usage("--train-alpha and --freeze-mu apply only to smu and smu1".into()))
        }
        None => {}
    }
    let spec = args.data.spec()?;
    let sizes = args.fit.sizes()?;
    let cfg = args.fit.train_config(args.shape.preset)?;
    print_resolved(
        "train",
        &json!({ "args": args, "activation": kind, "dataset": spec, "model": sizes, "config": cfg }),
    );

    let dataset = spec.build(cfg.seed, args.data.test_fraction)?;
    let start = Instant::now();
    let log = run_one(&dataset, &sizes, kind, &cfg)?;
    let wall_time_seconds = start.elapsed().as_secs_f64();

    let (tr, te) = match (log.final_train(), log.final_test()) {
        (Some(tr), Some(te)) => (tr.clone(), te.clone()),
        _ => return Err(CliError::Verification("internal error: training log is empty".into())),
    };
    let summary = Summary {
        activation: kind,
        dataset: spec,
        model: sizes,
        config: cfg,
        train_accuracy: tr.accuracy,
        train_loss: tr.loss,
        test_accuracy: te.accuracy,
        test_loss: te.loss,
        mu_initial: log.initial_mus().to_vec(),
        mu_final: log.final_mus().to_vec(),
        wall_time_seconds,
    };

    create_dir(&args.out)?;
    write_output(&args.out.join("log.csv"), &log.to_csv())?;
    let mut json = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Usage(e.to_string()))?;
    json.push('\n');
    write_output(&args.out.join("summary.json"), &json)?;
    println!(
        "{kind}: train accuracy {:.4} (loss {:.4}), test accuracy {:.4} (loss {:.4}), mu {:?} -> {:?}, {:.1} s",
        summary.train_accuracy,
        summary.train_loss,
        summary.test_accuracy,
        summary.test_loss,
        summary.mu_initial,
        summary.mu_final,
        summary.wall_time_seconds
    );
    Ok(())
}
