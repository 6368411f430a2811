//! Smooth Maximum Unit (SMU) and its sqrt-smoothed sibling SMU-1.
//!
//! Both are the smooth maxima of `x` and `alpha * x`:
//!
//! ```text
//! smu(x)  = ((1 + a) x + (1 - a) x erf(mu (1 - a) x)) / 2
//! smu1(x) = ((1 + a) x + sqrt((1 - a)^2 x^2 + mu^2)) / 2
//! ```
//!
//! SMU approaches Leaky ReLU from below as `mu -> inf`, SMU-1 from above as `mu -> 0`.
//! With `a = 0` and `mu = 1/sqrt(2)`, SMU is exactly GELU.
//!
//! All derivatives are written in terms of `u = (1 - a) x` and `t = mu u` so that no
//! intermediate overflows for `|x| <= 1e300`, `mu <= 1e6`.

use serde::{Deserialize, Serialize};

use super::erf::{erf, gauss, FRAC_2_SQRT_PI};
use crate::error::{Result, SmuError};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Shape parameters of SMU / SMU-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmuParams {
    /// Slope of the negative branch.
    pub alpha: f64,
    /// Smoothing strength.
    pub mu: f64,
    pub alpha_trainable: bool,
    pub mu_trainable: bool,
}

impl SmuParams {
    /// Fixed `alpha`, trainable `mu`.
    pub fn new(alpha: f64, mu: f64) -> Self {
        Self { alpha, mu, alpha_trainable: false, mu_trainable: true }
    }

    pub fn frozen(alpha: f64, mu: f64) -> Self {
        Self { alpha, mu, alpha_trainable: false, mu_trainable: false }
    }

    pub fn with_trainable(mut self, alpha: bool, mu: bool) -> Self {
        self.alpha_trainable = alpha;
        self.mu_trainable = mu;
        self
    }

    /// Checks user-supplied values: both finite, `mu >= 0`.
    ///
    /// `alpha = 1` is accepted (the unit becomes the identity); see [`Self::is_degenerate`].
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(SmuError::InvalidArgument(format!("alpha must be finite, got {}", self.alpha)));
        }
        if !self.mu.is_finite() || self.mu < 0.0 {
            return Err(SmuError::InvalidArgument(format!("mu must be finite and >= 0, got {}", self.mu)));
        }
        Ok(())
    }

    /// `alpha == 1` collapses SMU to `x`.
    pub fn is_degenerate(&self) -> bool {
        self.alpha == 1.0
    }
}

/// Task presets for the fixed `alpha` and the initial `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `alpha = 0.25`; `mu0 = 1.0` (SMU) or `4.352665993287951e-9` (SMU-1).
    Classification,
    /// Detection and segmentation: `alpha = 0.01`; `mu0 = 2.5` (SMU) or `4.332461424154261e-9` (SMU-1).
    Detection,
}

impl Preset {
    pub fn alpha(self) -> f64 {
        match self {
            Preset::Classification => 0.25,
            Preset::Detection => 0.01,
        }
    }

    pub fn smu_mu0(self) -> f64 {
        match self {
            Preset::Classification => 1.0,
            Preset::Detection => 2.5,
        }
    }

    pub fn smu1_mu0(self) -> f64 {
        match self {
            Preset::Classification => 4.352_665_993_287_951e-9,
            Preset::Detection => 4.332_461_424_154_261e-9,
        }
    }

    pub fn smu_params(self) -> SmuParams {
        SmuParams::new(self.alpha(), self.smu_mu0())
    }

    pub fn smu1_params(self) -> SmuParams {
        SmuParams::new(self.alpha(), self.smu1_mu0())
    }
}

impl std::str::FromStr for Preset {
    type Err = SmuError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classification" => Ok(Preset::Classification),
            "detection" | "segmentation" => Ok(Preset::Detection),
            other => Err(SmuError::InvalidArgument(format!("unknown preset '{other}'"))),
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Preset::Classification => "classification",
            Preset::Detection => "detection",
        })
    }
}

// x * t * exp(-t^2) without forming inf * 0.
#[inline]
fn x_t_gauss(x: f64, t: f64) -> f64 {
    let g = gauss(t);
    if g == 0.0 {
        0.0
    } else {
        x * g * t
    }
}

// u^2 * exp(-t^2), saturated to f64::MAX when the true value is out of range.
#[inline]
fn u2_gauss(u: f64, t: f64) -> f64 {
    let g = gauss(t);
    if g == 0.0 {
        0.0
    } else {
        (u * g * u).min(f64::MAX)
    }
}

pub fn smu(x: f64, p: &SmuParams) -> f64 {
    let u = (1.0 - p.alpha) * x;
    0.5 * ((1.0 + p.alpha) * x) + 0.5 * (u * erf(p.mu * u))
}

pub fn smu_dx(x: f64, p: &SmuParams) -> f64 {
    let k = 1.0 - p.alpha;
    let t = p.mu * (k * x);
    // mu (1-a)^2 x == (1-a) t
    0.5 * ((1.0 + p.alpha) + k * erf(t) + FRAC_2_SQRT_PI * x_t_gauss(k, t))
}

/// `d smu / d alpha`, obtained by differentiating [`smu`] directly.
///
/// The exponential term carries the `2/sqrt(pi)` factor from `erf'`; see
/// [`unscaled::smu_dalpha`] for the variant without it.
pub fn smu_dalpha(x: f64, p: &SmuParams) -> f64 {
    let t = p.mu * ((1.0 - p.alpha) * x);
    // (1-a) mu x^2 == x t
    0.5 * (x - x * erf(t) - FRAC_2_SQRT_PI * x_t_gauss(x, t))
}

/// `d smu / d mu = (1-a)^2 x^2 exp(-t^2) / sqrt(pi)`; never negative.
pub fn smu_dmu(x: f64, p: &SmuParams) -> f64 {
    let u = (1.0 - p.alpha) * x;
    FRAC_1_SQRT_PI * u2_gauss(u, p.mu * u)
}

/// Derivatives of one unit in `x`, `alpha` and `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGrad {
    pub dx: f64,
    pub dalpha: f64,
    pub dmu: f64,
}

/// [`smu_dx`], [`smu_dalpha`] and [`smu_dmu`] sharing one `erf` and one `exp`.
/// Bit-identical to the separate functions.
pub fn smu_grads(x: f64, p: &SmuParams) -> LocalGrad {
    let k = 1.0 - p.alpha;
    let u = k * x;
    let t = p.mu * u;
    let e = erf(t);
    let g = gauss(t);
    let (kgt, xgt, ugu) = if g == 0.0 { (0.0, 0.0, 0.0) } else { (k * g * t, x * g * t, (u * g * u).min(f64::MAX)) };
    LocalGrad {
        dx: 0.5 * ((1.0 + p.alpha) + k * e + FRAC_2_SQRT_PI * kgt),
        dalpha: 0.5 * (x - x * e - FRAC_2_SQRT_PI * xgt),
        dmu: FRAC_1_SQRT_PI * ugu,
    }
}

pub fn smu1(x: f64, p: &SmuParams) -> f64 {
    let u = (1.0 - p.alpha) * x;
    0.5 * ((1.0 + p.alpha) * x) + 0.5 * u.hypot(p.mu)
}

// u / sqrt(u^2 + mu^2), zero at the kink u = mu = 0.
#[inline]
fn smu1_ratio(u: f64, mu: f64) -> f64 {
    let s = u.hypot(mu);
    if s == 0.0 {
        0.0
    } else {
        u / s
    }
}

/// At `x = 0, mu = 0` (the only non-smooth point) this returns `(1 + a) / 2`.
pub fn smu1_dx(x: f64, p: &SmuParams) -> f64 {
    let k = 1.0 - p.alpha;
    0.5 * ((1.0 + p.alpha) + k * smu1_ratio(k * x, p.mu))
}

pub fn smu1_dalpha(x: f64, p: &SmuParams) -> f64 {
    let u = (1.0 - p.alpha) * x;
    0.5 * (x - x * smu1_ratio(u, p.mu))
}

pub fn smu1_dmu(x: f64, p: &SmuParams) -> f64 {
    let s = ((1.0 - p.alpha) * x).hypot(p.mu);
    if s == 0.0 {
        0.0
    } else {
        0.5 * (p.mu / s)
    }
}

pub fn smu1_grads(x: f64, p: &SmuParams) -> LocalGrad {
    LocalGrad { dx: smu1_dx(x, p), dalpha: smu1_dalpha(x, p), dmu: smu1_dmu(x, p) }
}

/// Parameter gradients with the `2/sqrt(pi)` factor omitted from the exponential term.
///
/// These disagree with finite differences of [`smu`] wherever `exp(-t^2)` is not
/// negligible, by exactly that factor on the exponential term. Kept for comparison with
/// implementations that use them; training uses [`smu_dalpha`] and [`smu_dmu`].
pub mod unscaled {
    use super::*;

    pub fn smu_dalpha(x: f64, p: &SmuParams) -> f64 {
        let t = p.mu * ((1.0 - p.alpha) * x);
        0.5 * (x - x * erf(t) - x_t_gauss(x, t))
    }

    pub fn smu_dmu(x: f64, p: &SmuParams) -> f64 {
        let u = (1.0 - p.alpha) * x;
        0.5 * u2_gauss(u, p.mu * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::smooth_max::{smooth_max_erf, smooth_max_sqrt};

    fn p(alpha: f64, mu: f64) -> SmuParams {
        SmuParams::new(alpha, mu)
    }

    #[test]
    fn smu_values() {
        assert_eq!(smu(0.0, &p(0.25, 3.0)), 0.0);
        assert!((smu(-10.0, &p(0.25, 25.0)) + 2.5).abs() < 1e-12);
        for x in [-3.0, 0.2, 7.0] {
            assert_eq!(smu(x, &p(1.0, 4.0)), x);
        }
    }

    #[test]
    fn smu_matches_smooth_max() {
        for x in [-5.0, -0.3, 0.0, 0.9, 4.0] {
            for (a, mu) in [(0.25, 1.0), (0.01, 2.5), (0.0, 0.7)] {
                let direct = smu(x, &p(a, mu));
                let via = smooth_max_erf(x, a * x, mu);
                assert!((direct - via).abs() <= 1e-15 * (1.0 + x.abs()));
                let direct1 = smu1(x, &p(a, mu));
                let via1 = smooth_max_sqrt(x, a * x, mu);
                assert!((direct1 - via1).abs() <= 1e-15 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn smu_derivative_values() {
        assert_eq!(smu_dx(0.0, &p(0.25, 1.0)), 0.625);
        assert_eq!(smu_dx(0.0, &p(0.0, std::f64::consts::FRAC_1_SQRT_2)), 0.5);
        assert_eq!(smu_dalpha(0.0, &p(0.25, 1.0)), 0.0);
        assert_eq!(smu_dalpha(1.0, &p(0.25, 0.0)), 0.5);
        assert_eq!(smu_dmu(0.0, &p(0.25, 1.0)), 0.0);
        assert_eq!(smu_dmu(1.0, &p(1.0, 1.0)), 0.0);
    }

    #[test]
    fn unscaled_forms_differ_only_in_gaussian_term() {
        let q = p(0.25, 1.0);
        let x = 1.5;
        let t = q.mu * (1.0 - q.alpha) * x;
        let g_term = x * t * (-t * t).exp();
        let gap = unscaled::smu_dalpha(x, &q) - smu_dalpha(x, &q);
        assert!((gap - 0.5 * (FRAC_2_SQRT_PI - 1.0) * g_term).abs() < 1e-15);
        let ratio = smu_dmu(x, &q) / unscaled::smu_dmu(x, &q);
        assert!((ratio - FRAC_2_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn smu1_values() {
        assert_eq!(smu1(0.0, &p(0.25, 1.0)), 0.5);
        assert!((smu1(-4.0, &p(0.25, 3.0)) - (-0.378_679_656_440_357_4)).abs() < 1e-15);
        for x in [-2.0, -0.1, 0.0, 0.3, 5.0] {
            assert!((smu1(x, &p(0.25, 0.0)) - f64::max(x, 0.25 * x)).abs() <= 1e-15 * (1.0 + x.abs()));
        }
        assert_eq!(smu1_dx(0.0, &p(0.25, 1.0)), 0.625);
        assert_eq!(smu1_dmu(0.0, &p(0.25, 2.0)), 0.5);
    }

    #[test]
    fn smu1_kink_convention() {
        let q = p(0.25, 0.0);
        assert_eq!(smu1_dx(0.0, &q), 0.625);
        assert_eq!(smu1_dalpha(0.0, &q), 0.0);
        assert_eq!(smu1_dmu(0.0, &q), 0.0);
    }

    #[test]
    fn non_monotone_dip_at_zero_alpha() {
        assert!(smu_dx(-1.1, &p(0.0, 2.0)) < 0.0);
    }

    #[test]
    fn extreme_inputs_never_nan() {
        for x in [1e300, -1e300, 1e-300, 0.0, 3.0] {
            for mu in [0.0, 1e-305, 1.0, 1e6] {
                for a in [0.0, 0.25, 0.99] {
                    let q = p(a, mu);
                    for v in [
                        smu(x, &q),
                        smu_dx(x, &q),
                        smu_dalpha(x, &q),
                        smu_dmu(x, &q),
                        smu1(x, &q),
                        smu1_dx(x, &q),
                        smu1_dalpha(x, &q),
                        smu1_dmu(x, &q),
                    ] {
                        assert!(v.is_finite(), "x={x} mu={mu} a={a} -> {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn presets() {
        let c = Preset::Classification;
        assert_eq!((c.alpha(), c.smu_mu0(), c.smu1_mu0()), (0.25, 1.0, 4.352665993287951e-09));
        let d = Preset::Detection;
        assert_eq!((d.alpha(), d.smu_mu0(), d.smu1_mu0()), (0.01, 2.5, 4.332461424154261e-09));
        assert!(!c.smu_params().alpha_trainable);
        assert!(c.smu_params().mu_trainable);
    }

    #[test]
    fn validation() {
        assert!(p(0.25, -1.0).validate().is_err());
        assert!(p(f64::NAN, 1.0).validate().is_err());
        assert!(p(1.0, 1.0).validate().is_ok());
        assert!(p(1.0, 1.0).is_degenerate());
    }

    #[test]
    fn fused_grads_match_separate_bitwise() {
        for (a, mu) in [(0.25, 1.0), (0.01, 2.5), (0.0, 1e6), (0.25, 4e-9)] {
            let q = p(a, mu);
            for i in -400..=400 {
                let x = f64::from(i) * 0.037;
                let g = smu_grads(x, &q);
                assert_eq!(g.dx.to_bits(), smu_dx(x, &q).to_bits());
                assert_eq!(g.dalpha.to_bits(), smu_dalpha(x, &q).to_bits());
                assert_eq!(g.dmu.to_bits(), smu_dmu(x, &q).to_bits());
            }
        }
        let g = smu_grads(1e300, &p(0.0, 1e-300));
        assert_eq!(g.dmu, smu_dmu(1e300, &p(0.0, 1e-300)));
    }
}
