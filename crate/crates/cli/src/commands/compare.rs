use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;
use smu_core::activation::ActivationKind;

use super::{create_dir, mean_std, print_resolved, resolve_activation, run_one, write_output};
use crate::args::CompareArgs;
use crate::error::CliError;

pub const COMPARE_HEADER: &str = "activation,mean_acc,std_acc,mean_final_mu";
const RUNS_HEADER: &str = "activation,seed,train_accuracy,test_accuracy,train_loss,test_loss,final_mu";

/// One line of `compare.csv`. Accuracies are final train accuracies; `mean_final_mu` averages
/// the per-run mean of the final mu over layers and is `None` for activations without mu.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub activation: String,
    pub mean_acc: f64,
    pub std_acc: f64,
    pub mean_final_mu: Option<f64>,
}

struct RunResult {
    train_accuracy: f64,
    test_accuracy: f64,
    train_loss: f64,
    test_loss: f64,
    final_mu: Option<f64>,
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    if args.activation.is_empty() {
        return Err(CliError::Usage("at least one activation is required".into()));
    }
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let kinds = args
        .activation
        .iter()
        .map(|name| resolve_activation(name, &args.shape, args.mu, false))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = BTreeSet::new();
    for k in &kinds {
        if !seen.insert(k.name()) {
            return Err(CliError::Usage(format!("activation '{}' is listed twice", k.name())));
        }
    }
    let spec = args.data.spec()?;
    let sizes = args.fit.sizes()?;
    let cfg = args.fit.train_config(args.shape.preset)?;
    let seeds: Vec<u64> = (0..args.seeds as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    print_resolved(
        "compare",
        &json!({ "args": args, "activations": kinds, "dataset": spec, "model": sizes, "config": cfg, "run_seeds": seeds }),
    );

    let dataset = spec.build(cfg.seed, args.data.test_fraction)?;
    let jobs: Vec<(ActivationKind, u64)> = kinds.iter().flat_map(|&k| seeds.iter().map(move |&s| (k, s))).collect();
    let results: Vec<Result<RunResult, CliError>> = jobs
        .par_iter()
        .map(|&(kind, seed)| {
            let run_cfg = smu_core::micronet::TrainConfig { seed, ..cfg.clone() };
            let log = run_one(&dataset, &sizes, kind, &run_cfg)?;
            let (tr, te) = (log.final_train().expect("epoch records"), log.final_test().expect("epoch records"));
            let mus = log.final_mus();
            Ok(RunResult {
                train_accuracy: tr.accuracy,
                test_accuracy: te.accuracy,
                train_loss: tr.loss,
                test_loss: te.loss,
                final_mu: (!mus.is_empty()).then(|| mus.iter().sum::<f64>() / mus.len() as f64),
            })
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut runs_csv = format!("{RUNS_HEADER}\n");
    for ((kind, seed), r) in jobs.iter().zip(&results) {
        let mu = r.final_mu.map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            runs_csv,
            "{},{seed},{},{},{},{},{mu}",
            kind.name(),
            r.train_accuracy,
            r.test_accuracy,
            r.train_loss,
            r.test_loss
        )
        .unwrap();
    }

    let rows: Vec<CompareRow> = kinds
        .iter()
        .zip(results.chunks(seeds.len()))
        .map(|(kind, runs)| {
            let accs: Vec<f64> = runs.iter().map(|r| r.train_accuracy).collect();
            let (mean_acc, std_acc) = mean_std(&accs);
            let mus: Option<Vec<f64>> = runs.iter().map(|r| r.final_mu).collect();
            CompareRow {
                activation: kind.name().to_owned(),
                mean_acc,
                std_acc,
                mean_final_mu: mus.map(|m| mean_std(&m).0),
            }
        })
        .collect();

    let mut table = format!("{COMPARE_HEADER}\n");
    for r in &rows {
        let mu = r.mean_final_mu.map(|m| m.to_string()).unwrap_or_default();
        writeln!(table, "{},{},{},{mu}", r.activation, r.mean_acc, r.std_acc).unwrap();
    }
    create_dir(&args.out)?;
    write_output(&args.out.join("compare.csv"), &table)?;
    write_output(&args.out.join("runs.csv"), &runs_csv)?;

    println!("{} seeds per activation, mean +- std of final train accuracy:", seeds.len());
    for r in &rows {
        println!("  {:<11} {:.4} +- {:.4}", r.activation, r.mean_acc, r.std_acc);
    }
    let find = |name: &str| rows.iter().find(|r| r.activation == name);
    if let (Some(s), Some(r)) = (find("smu"), find("relu")) {
        let order = match s.mean_acc.total_cmp(&r.mean_acc) {
            std::cmp::Ordering::Greater => "smu > relu",
            std::cmp::Ordering::Less => "smu < relu",
            std::cmp::Ordering::Equal => "smu = relu",
        };
        println!("ordering: {order} ({:.4} vs {:.4})", s.mean_acc, r.mean_acc);
    }
    Ok(())
}
