//! Smooth approximations of `max(x1, x2) = ((x1 + x2) + |x1 - x2|) / 2`.
//!
//! Replacing `|d|` by `d * erf(mu * d)` approaches the max from below as `mu -> inf`;
//! replacing it by `sqrt(d^2 + mu^2)` approaches from above as `mu -> 0`.

use super::erf::erf;

/// Erf-smoothed maximum; converges to `max(x1, x2)` from below as `mu` grows.
pub fn smooth_max_erf(x1: f64, x2: f64, mu: f64) -> f64 {
    let d = x1 - x2;
    0.5 * (x1 + x2) + 0.5 * (d * erf(mu * d))
}

/// Sqrt-smoothed maximum; converges to `max(x1, x2)` from above as `mu` shrinks.
///
/// `hypot` keeps the result finite for `|x1 - x2|` near `f64::MAX`.
pub fn smooth_max_sqrt(x1: f64, x2: f64, mu: f64) -> f64 {
    0.5 * (x1 + x2) + 0.5 * (x1 - x2).hypot(mu)
}

/// Exact `max`, the limit of both families.
pub fn hard_max(x1: f64, x2: f64) -> f64 {
    0.5 * (x1 + x2) + 0.5 * (x1 - x2).abs()
}
