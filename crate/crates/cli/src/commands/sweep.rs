use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;

use super::{print_resolved, resolve_activation, run_one, write_output};
use crate::args::SweepArgs;
use crate::error::CliError;

const SWEEP_HEADER: &str = "mu,train_accuracy,test_accuracy,train_loss,test_loss";

pub fn sweep_mu(args: &SweepArgs) -> Result<(), CliError> {
    if args.mu.is_empty() {
        return Err(CliError::Usage("the mu grid is empty".into()));
    }
    let kinds = args
        .mu
        .iter()
        .map(|&m| {
            let mut kind = resolve_activation(&args.activation, &args.shape, Some(m), true)?;
            let p = kind.smu_params_mut().expect("--mu was accepted");
            p.alpha_trainable = false;
            p.mu_trainable = false;
            Ok(kind)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let spec = args.data.spec()?;
    let sizes = args.fit.sizes()?;
    let cfg = args.fit.train_config(args.shape.preset)?;
    print_resolved(
        "sweep-mu",
        &json!({ "args": args, "activations": kinds, "dataset": spec, "model": sizes, "config": cfg }),
    );

    let dataset = spec.build(cfg.seed, args.data.test_fraction)?;
    let logs = kinds
        .par_iter()
        .map(|&kind| run_one(&dataset, &sizes, kind, &cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = format!("{SWEEP_HEADER}\n");
    for (mu, log) in args.mu.iter().zip(&logs) {
        let (tr, te) = (log.final_train().expect("epoch records"), log.final_test().expect("epoch records"));
        writeln!(csv, "{mu},{},{},{},{}", tr.accuracy, te.accuracy, tr.loss, te.loss).unwrap();
        println!("mu {mu}: train accuracy {:.4}, test accuracy {:.4}", tr.accuracy, te.accuracy);
    }
    write_output(&args.out, &csv)
}
