use std::fmt::Write as _;

use serde_json::json;

use super::{print_resolved, resolve_activation, write_output};
use crate::args::PlotArgs;
use crate::error::CliError;

const MAX_ROWS: usize = 10_000_000;

pub fn plot(args: &PlotArgs) -> Result<(), CliError> {
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(CliError::Usage(format!("--step must be a positive number, got {}", args.step)));
    }
    if !(args.x_min.is_finite() && args.x_max.is_finite() && args.x_max > args.x_min) {
        return Err(CliError::Usage(format!(
            "x range [{}, {}] must be finite with x-min < x-max",
            args.x_min, args.x_max
        )));
    }
    let intervals = ((args.x_max - args.x_min) / args.step * (1.0 + 1e-12)).floor();
    if intervals >= MAX_ROWS as f64 {
        return Err(CliError::Usage(format!("range and step give more than {MAX_ROWS} rows")));
    }
    let rows = intervals as usize + 1;

    let base = resolve_activation(&args.activation, &args.shape, args.mu.first().copied(), true)?;
    let kinds = match base.smu_params() {
        Some(p) if args.mu.is_empty() => vec![(Some(p.mu), base)],
        Some(_) => args
            .mu
            .iter()
            .map(|&m| resolve_activation(&args.activation, &args.shape, Some(m), true).map(|k| (Some(m), k)))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![(None, base)],
    };
    print_resolved(
        "plot",
        &json!({ "args": args, "activations": kinds.iter().map(|(_, k)| k).collect::<Vec<_>>(), "rows": rows }),
    );

    let mut csv = String::from("x");
    for prefix in ["value", "derivative"] {
        for (mu, _) in &kinds {
            match mu {
                Some(m) => write!(csv, ",{prefix}_mu={m}").unwrap(),
                None => write!(csv, ",{prefix}").unwrap(),
            }
        }
    }
    csv.push('\n');
    for i in 0..rows {
        let x = args.x_min + i as f64 * args.step;
        write!(csv, "{x}").unwrap();
        for (_, k) in &kinds {
            write!(csv, ",{}", k.eval(x)).unwrap();
        }
        for (_, k) in &kinds {
            write!(csv, ",{}", k.dx(x)).unwrap();
        }
        csv.push('\n');
    }
    write_output(&args.out, &csv)
}
