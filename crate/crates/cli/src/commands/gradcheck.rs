use serde_json::json;
use smu_core::activation::Param;
use smu_core::gradcheck::{check_activation, check_activation_with, reports_to_csv, standard_grid, ParamLabel};

use super::{print_resolved, resolve_activation, write_output};
use crate::args::GradcheckArgs;
use crate::error::CliError;

const CORRUPTION: f64 = 1e-3;

pub fn gradcheck(args: &GradcheckArgs) -> Result<(), CliError> {
    let kind = resolve_activation(&args.activation, &args.shape, args.mu, true)?;
    let grid = standard_grid(&kind);
    print_resolved("gradcheck", &json!({ "args": args, "activation": kind, "grid_points": grid.len() }));

    let reports = if args.corrupt_derivative {
        check_activation_with(&kind, &grid, args.tolerance, |k, label, x| match label {
            ParamLabel::X => k.dx(x) + CORRUPTION,
            ParamLabel::Alpha => k.dparam(Param::Alpha, x),
            ParamLabel::Mu => k.dparam(Param::Mu, x),
            ParamLabel::Weight(_) => f64::NAN,
        })?
    } else {
        check_activation(&kind, &grid, args.tolerance)?
    };
    write_output(&args.out, &reports_to_csv(&reports))?;

    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("gradcheck {kind}: {} checks, {failed} failed", reports.len());
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} of {} gradient checks failed", reports.len())));
    }
    Ok(())
}
