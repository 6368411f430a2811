//! Central-difference gradient checking.
//!
//! The numeric side only ever calls forward evaluations ([`ActivationKind::eval`] or a
//! caller-supplied loss), never the analytic derivative code it is compared against.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::activation::{ActivationKind, Param};
use crate::error::{Result, SmuError};

/// Below this magnitude the absolute difference decides pass/fail.
pub const ABSOLUTE_FLOOR: f64 = 1e-9;
/// Denominator floor of the relative error.
pub const RELATIVE_FLOOR: f64 = 1e-10;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Which quantity a report differentiates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ParamLabel {
    X,
    Alpha,
    Mu,
    Weight(usize),
}

impl ParamLabel {
    fn sort_key(&self) -> (u8, usize) {
        // alphabetical: alpha < mu < w<i> < x
        match self {
            ParamLabel::Alpha => (0, 0),
            ParamLabel::Mu => (1, 0),
            ParamLabel::Weight(i) => (2, *i),
            ParamLabel::X => (3, 0),
        }
    }
}

impl From<Param> for ParamLabel {
    fn from(p: Param) -> Self {
        match p {
            Param::Alpha => ParamLabel::Alpha,
            Param::Mu => ParamLabel::Mu,
        }
    }
}

impl fmt::Display for ParamLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamLabel::X => f.write_str("x"),
            ParamLabel::Alpha => f.write_str("alpha"),
            ParamLabel::Mu => f.write_str("mu"),
            ParamLabel::Weight(i) => write!(f, "w{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradCheckReport {
    pub point: f64,
    pub parameter: ParamLabel,
    pub analytic: f64,
    pub numeric: f64,
    pub relative_error: f64,
    pub passed: bool,
}

impl GradCheckReport {
    /// Compares one analytic/numeric pair. Non-finite values always fail.
    pub fn compare(point: f64, parameter: ParamLabel, analytic: f64, numeric: f64, tolerance: f64) -> Self {
        let diff = (analytic - numeric).abs();
        let relative_error = diff / analytic.abs().max(numeric.abs()).max(RELATIVE_FLOOR);
        let passed =
            analytic.is_finite() && numeric.is_finite() && (relative_error < tolerance || diff < ABSOLUTE_FLOOR);
        Self { point, parameter, analytic, numeric, relative_error, passed }
    }
}

/// `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `1e-5 * max(1, |x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// `-8, -7.5, ..., 8`; shifted by a quarter for kinked activations so no point sits on a kink.
///
/// SMU-1 with `mu` below `1e-3` counts as kinked: at `x = 0` its `mu`-difference
/// would straddle the corner of `|mu|` at the default step.
pub fn standard_grid(kind: &ActivationKind) -> Vec<f64> {
    let near_kink = matches!(kind, ActivationKind::Smu1(p) if p.mu.abs() < 1e-3);
    if kind.is_smooth() && !near_kink {
        (-16..=16).map(|i| f64::from(i) * 0.5).collect()
    } else {
        (-16..16).map(|i| f64::from(i) * 0.5 + 0.25).collect()
    }
}

/// Checks `dx` and every differentiable parameter of `kind` at each grid point.
pub fn check_activation(kind: &ActivationKind, grid: &[f64], tolerance: f64) -> Result<Vec<GradCheckReport>> {
    check_activation_with(kind, grid, tolerance, |k, label, x| match label {
        ParamLabel::X => k.dx(x),
        ParamLabel::Alpha => k.dparam(Param::Alpha, x),
        ParamLabel::Mu => k.dparam(Param::Mu, x),
        ParamLabel::Weight(_) => f64::NAN,
    })
}

/// Same as [`check_activation`] with the analytic side supplied by the caller.
pub fn check_activation_with<A>(
    kind: &ActivationKind,
    grid: &[f64],
    tolerance: f64,
    analytic: A,
) -> Result<Vec<GradCheckReport>>
where
    A: Fn(&ActivationKind, ParamLabel, f64) -> f64,
{
    if grid.is_empty() {
        return Err(SmuError::InvalidArgument("gradient check grid is empty".into()));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(SmuError::InvalidArgument(format!("tolerance must be > 0, got {tolerance}")));
    }
    let mut labels: Vec<ParamLabel> =
        std::iter::once(ParamLabel::X).chain(kind.params().iter().map(|&p| ParamLabel::from(p))).collect();
    labels.sort_by_key(ParamLabel::sort_key);

    let mut points = grid.to_vec();
    points.sort_by(f64::total_cmp);

    let mut reports = Vec::with_capacity(points.len() * labels.len());
    for &x in &points {
        for &label in &labels {
            let numeric = match label {
                ParamLabel::X => central_difference(|v| kind.eval(v), x, default_step(x)),
                ParamLabel::Alpha | ParamLabel::Mu => {
                    let param = if label == ParamLabel::Alpha { Param::Alpha } else { Param::Mu };
                    let theta = kind.param(param).expect("listed parameter exists");
                    let forward = |v: f64| {
                        let mut shifted = *kind;
                        shifted.set_param(param, v).expect("listed parameter exists");
                        shifted.eval(x)
                    };
                    central_difference(forward, theta, default_step(theta))
                }
                ParamLabel::Weight(_) => unreachable!("activations have no weights"),
            };
            reports.push(GradCheckReport::compare(x, label, analytic(kind, label, x), numeric, tolerance));
        }
    }
    Ok(reports)
}

/// Checks a gradient vector of a scalar function of many parameters.
///
/// `loss` is called with perturbed copies of `params`; reports carry
/// [`ParamLabel::Weight`] with the coordinate index and `point` set to its value.
pub fn check_vector_gradient<L>(
    mut loss: L,
    params: &[f64],
    analytic: &[f64],
    tolerance: f64,
) -> Result<Vec<GradCheckReport>>
where
    L: FnMut(&[f64]) -> f64,
{
    if params.len() != analytic.len() {
        return Err(SmuError::Shape(format!("{} parameters but {} gradient entries", params.len(), analytic.len())));
    }
    let mut probe = params.to_vec();
    let mut reports = Vec::with_capacity(params.len());
    for (i, (&theta, &grad)) in params.iter().zip(analytic).enumerate() {
        let h = default_step(theta);
        probe[i] = theta + h;
        let up = loss(&probe);
        probe[i] = theta - h;
        let down = loss(&probe);
        probe[i] = theta;
        let numeric = (up - down) / (2.0 * h);
        reports.push(GradCheckReport::compare(theta, ParamLabel::Weight(i), grad, numeric, tolerance));
    }
    Ok(reports)
}

pub const REPORT_CSV_HEADER: &str = "point,parameter,analytic,numeric,rel_error,passed";

/// Renders reports as `point,parameter,analytic,numeric,rel_error,passed`.
pub fn reports_to_csv(reports: &[GradCheckReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e},{}",
            r.point, r.parameter, r.analytic, r.numeric, r.relative_error, r.passed
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::SmuParams;

    #[test]
    fn central_difference_basics() {
        assert!((central_difference(|x| x * x, 3.0, 1e-5) - 6.0).abs() < 1e-8);
        for x in [-2.0, 0.0, 0.5, 1.0] {
            assert_eq!(central_difference(|v| v, x, 0.5), 1.0);
        }
        let p = SmuParams::new(0.25, 1.0);
        let d = central_difference(|v| crate::activation::smu(v, &p), 0.0, 1e-5);
        assert!((d - 0.625).abs() < 1e-7);
    }

    #[test]
    fn smu_three_points_nine_reports() {
        let kind = ActivationKind::Smu(SmuParams::new(0.25, 1.0));
        let reports = check_activation(&kind, &[2.0, -2.0, 0.0], 1e-6).unwrap();
        assert_eq!(reports.len(), 9);
        assert!(reports.iter().all(|r| r.passed), "{reports:#?}");
        let order: Vec<_> = reports.iter().map(|r| (r.point, r.parameter.to_string())).collect();
        assert_eq!(order[0], (-2.0, "alpha".to_string()));
        assert_eq!(order[1], (-2.0, "mu".to_string()));
        assert_eq!(order[2], (-2.0, "x".to_string()));
        assert_eq!(order[8], (2.0, "x".to_string()));
    }

    #[test]
    fn relu_single_report() {
        let reports = check_activation(&ActivationKind::Relu, &[1.0], 1e-6).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed);
        assert_eq!(reports[0].analytic, 1.0);
    }

    #[test]
    fn empty_grid_rejected() {
        let kind = ActivationKind::Smu(SmuParams::new(0.25, 1.0));
        assert!(matches!(check_activation(&kind, &[], 1e-6), Err(SmuError::InvalidArgument(_))));
    }

    #[test]
    fn non_finite_is_a_failure_not_a_panic() {
        let r = GradCheckReport::compare(0.0, ParamLabel::X, f64::NAN, 1.0, 1e-6);
        assert!(!r.passed);
        let r = GradCheckReport::compare(0.0, ParamLabel::X, 1.0, f64::INFINITY, 1e-6);
        assert!(!r.passed);
    }

    #[test]
    fn absolute_floor() {
        let r = GradCheckReport::compare(0.0, ParamLabel::Mu, 1e-12, 5e-10, 1e-6);
        assert!(r.relative_error > 1e-6);
        assert!(r.passed);
    }

    #[test]
    fn corrupted_derivative_is_caught() {
        let kind = ActivationKind::Smu(SmuParams::new(0.25, 1.0));
        let reports = check_activation_with(&kind, &[0.5], 1e-6, |k, l, x| match l {
            ParamLabel::X => k.dx(x) * 1.001,
            ParamLabel::Alpha => k.dparam(Param::Alpha, x),
            ParamLabel::Mu => k.dparam(Param::Mu, x),
            ParamLabel::Weight(_) => 0.0,
        })
        .unwrap();
        assert!(reports.iter().any(|r| !r.passed));
    }

    #[test]
    fn csv_rendering() {
        let kind = ActivationKind::Relu;
        let csv = reports_to_csv(&check_activation(&kind, &[1.0], 1e-6).unwrap());
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REPORT_CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("1,x,1e0,"));
    }

    #[test]
    fn vector_gradient() {
        let params = [1.0, -2.0, 0.5];
        let analytic = [2.0, -4.0, 1.0];
        let reports = check_vector_gradient(|p| p.iter().map(|v| v * v).sum(), &params, &analytic, 1e-6).unwrap();
        assert!(reports.iter().all(|r| r.passed));
        assert_eq!(reports[2].parameter, ParamLabel::Weight(2));
    }

    #[test]
    fn standard_grids_avoid_kinks() {
        assert_eq!(standard_grid(&ActivationKind::Gelu).len(), 33);
        let g = standard_grid(&ActivationKind::Relu6);
        assert!(g.iter().all(|&x| x != 0.0 && x != 6.0));
    }
}
