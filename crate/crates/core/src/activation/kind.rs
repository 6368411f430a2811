use serde::{Deserialize, Serialize};

use super::baseline;
use super::smu::{self, LocalGrad, Preset, SmuParams};
use crate::error::{Result, SmuError};

/// A differentiable activation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    Mu,
}

impl Param {
    pub fn as_str(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Mu => "mu",
        }
    }
}

/// Activation choice together with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ActivationKind {
    Smu(SmuParams),
    Smu1(SmuParams),
    Relu,
    LeakyRelu {
        alpha: f64,
    },
    /// Leaky ReLU with a trainable slope.
    Prelu {
        alpha: f64,
    },
    Relu6,
    Elu {
        alpha: f64,
    },
    Softplus,
    Swish,
    Gelu,
}

pub const ACTIVATION_NAMES: &[&str] =
    &["smu", "smu1", "relu", "leaky-relu", "prelu", "relu6", "elu", "softplus", "swish", "gelu"];

const NO_PARAMS: &[Param] = &[];
const ALPHA_MU: &[Param] = &[Param::Alpha, Param::Mu];
const ALPHA: &[Param] = &[Param::Alpha];

impl ActivationKind {
    /// Builds an activation by name.
    ///
    /// SMU and SMU-1 take `alpha` and the initial `mu` from `preset` unless overridden.
    /// Baselines with a slope default to Leaky ReLU `0.01`, PReLU `0.25`, ELU `1.0`.
    pub fn from_name(name: &str, alpha: Option<f64>, mu: Option<f64>, preset: Preset) -> Result<Self> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "smu" => {
                let base = preset.smu_params();
                ActivationKind::Smu(SmuParams { alpha: alpha.unwrap_or(base.alpha), mu: mu.unwrap_or(base.mu), ..base })
            }
            "smu1" | "smu-1" => {
                let base = preset.smu1_params();
                ActivationKind::Smu1(SmuParams {
                    alpha: alpha.unwrap_or(base.alpha),
                    mu: mu.unwrap_or(base.mu),
                    ..base
                })
            }
            "relu" => ActivationKind::Relu,
            "leaky-relu" | "leakyrelu" | "lrelu" => ActivationKind::LeakyRelu { alpha: alpha.unwrap_or(0.01) },
            "prelu" => ActivationKind::Prelu { alpha: alpha.unwrap_or(0.25) },
            "relu6" => ActivationKind::Relu6,
            "elu" => ActivationKind::Elu { alpha: alpha.unwrap_or(1.0) },
            "softplus" => ActivationKind::Softplus,
            "swish" | "silu" => ActivationKind::Swish,
            "gelu" => ActivationKind::Gelu,
            other => {
                return Err(SmuError::Config(format!(
                    "unknown activation '{other}' (expected one of {})",
                    ACTIVATION_NAMES.join(", ")
                )))
            }
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ActivationKind::Smu(p) | ActivationKind::Smu1(p) => p.validate(),
            ActivationKind::LeakyRelu { alpha } | ActivationKind::Prelu { alpha } | ActivationKind::Elu { alpha } => {
                if alpha.is_finite() {
                    Ok(())
                } else {
                    Err(SmuError::InvalidArgument(format!("alpha must be finite, got {alpha}")))
                }
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ActivationKind::Smu(_) => "smu",
            ActivationKind::Smu1(_) => "smu1",
            ActivationKind::Relu => "relu",
            ActivationKind::LeakyRelu { .. } => "leaky-relu",
            ActivationKind::Prelu { .. } => "prelu",
            ActivationKind::Relu6 => "relu6",
            ActivationKind::Elu { .. } => "elu",
            ActivationKind::Softplus => "softplus",
            ActivationKind::Swish => "swish",
            ActivationKind::Gelu => "gelu",
        }
    }

    pub fn smu_params(&self) -> Option<&SmuParams> {
        match self {
            ActivationKind::Smu(p) | ActivationKind::Smu1(p) => Some(p),
            _ => None,
        }
    }

    pub fn smu_params_mut(&mut self) -> Option<&mut SmuParams> {
        match self {
            ActivationKind::Smu(p) | ActivationKind::Smu1(p) => Some(p),
            _ => None,
        }
    }

    /// Whether the forward map is twice continuously differentiable everywhere, which is
    /// what central differences need to reach their `h^2` accuracy.
    pub fn is_smooth(&self) -> bool {
        match self {
            ActivationKind::Smu(_) | ActivationKind::Softplus | ActivationKind::Swish | ActivationKind::Gelu => true,
            ActivationKind::Smu1(p) => p.mu != 0.0 || p.alpha == 1.0,
            ActivationKind::Elu { .. }
            | ActivationKind::Relu
            | ActivationKind::LeakyRelu { .. }
            | ActivationKind::Prelu { .. }
            | ActivationKind::Relu6 => false,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ActivationKind::Smu(p) => smu::smu(x, p),
            ActivationKind::Smu1(p) => smu::smu1(x, p),
            ActivationKind::Relu => baseline::relu(x),
            ActivationKind::LeakyRelu { alpha } | ActivationKind::Prelu { alpha } => baseline::leaky_relu(x, *alpha),
            ActivationKind::Relu6 => baseline::relu6(x),
            ActivationKind::Elu { alpha } => baseline::elu(x, *alpha),
            ActivationKind::Softplus => baseline::softplus(x),
            ActivationKind::Swish => baseline::swish(x),
            ActivationKind::Gelu => baseline::gelu(x),
        }
    }

    pub fn dx(&self, x: f64) -> f64 {
        match self {
            ActivationKind::Smu(p) => smu::smu_dx(x, p),
            ActivationKind::Smu1(p) => smu::smu1_dx(x, p),
            ActivationKind::Relu => baseline::relu_dx(x),
            ActivationKind::LeakyRelu { alpha } | ActivationKind::Prelu { alpha } => baseline::leaky_relu_dx(x, *alpha),
            ActivationKind::Relu6 => baseline::relu6_dx(x),
            ActivationKind::Elu { alpha } => baseline::elu_dx(x, *alpha),
            ActivationKind::Softplus => baseline::softplus_dx(x),
            ActivationKind::Swish => baseline::swish_dx(x),
            ActivationKind::Gelu => baseline::gelu_dx(x),
        }
    }

    /// Parameters the forward map is differentiable in, in a fixed order.
    pub fn params(&self) -> &'static [Param] {
        match self {
            ActivationKind::Smu(_) | ActivationKind::Smu1(_) => ALPHA_MU,
            ActivationKind::Prelu { .. } => ALPHA,
            _ => NO_PARAMS,
        }
    }

    /// Subset of [`Self::params`] that a network updates.
    pub fn trainable_params(&self) -> Vec<Param> {
        match self {
            ActivationKind::Smu(p) | ActivationKind::Smu1(p) => {
                let mut out = Vec::with_capacity(2);
                if p.alpha_trainable {
                    out.push(Param::Alpha);
                }
                if p.mu_trainable {
                    out.push(Param::Mu);
                }
                out
            }
            ActivationKind::Prelu { .. } => vec![Param::Alpha],
            _ => Vec::new(),
        }
    }

    pub fn param(&self, which: Param) -> Option<f64> {
        match (self, which) {
            (ActivationKind::Smu(p) | ActivationKind::Smu1(p), Param::Alpha) => Some(p.alpha),
            (ActivationKind::Smu(p) | ActivationKind::Smu1(p), Param::Mu) => Some(p.mu),
            (ActivationKind::Prelu { alpha }, Param::Alpha) => Some(*alpha),
            _ => None,
        }
    }

    pub fn set_param(&mut self, which: Param, value: f64) -> Result<()> {
        match (self, which) {
            (ActivationKind::Smu(p) | ActivationKind::Smu1(p), Param::Alpha) => p.alpha = value,
            (ActivationKind::Smu(p) | ActivationKind::Smu1(p), Param::Mu) => p.mu = value,
            (ActivationKind::Prelu { alpha }, Param::Alpha) => *alpha = value,
            (kind, _) => {
                return Err(SmuError::Config(format!(
                    "activation '{}' has no parameter '{}'",
                    kind.name(),
                    which.as_str()
                )))
            }
        }
        Ok(())
    }

    /// Partial derivative of the output in `which`; zero for parameters the kind lacks.
    pub fn dparam(&self, which: Param, x: f64) -> f64 {
        match (self, which) {
            (ActivationKind::Smu(p), Param::Alpha) => smu::smu_dalpha(x, p),
            (ActivationKind::Smu(p), Param::Mu) => smu::smu_dmu(x, p),
            (ActivationKind::Smu1(p), Param::Alpha) => smu::smu1_dalpha(x, p),
            (ActivationKind::Smu1(p), Param::Mu) => smu::smu1_dmu(x, p),
            (ActivationKind::Prelu { .. }, Param::Alpha) => baseline::leaky_relu_dalpha(x),
            _ => 0.0,
        }
    }

    /// `dx` and both parameter partials at once; equal to [`Self::dx`] and [`Self::dparam`].
    pub fn grads(&self, x: f64) -> LocalGrad {
        match self {
            ActivationKind::Smu(p) => smu::smu_grads(x, p),
            ActivationKind::Smu1(p) => smu::smu1_grads(x, p),
            _ => LocalGrad { dx: self.dx(x), dalpha: self.dparam(Param::Alpha, x), dmu: 0.0 },
        }
    }
}

impl std::fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActivationKind::Smu(p) | ActivationKind::Smu1(p) => {
                write!(f, "{}(alpha={}, mu={})", self.name(), p.alpha, p.mu)
            }
            ActivationKind::LeakyRelu { alpha } | ActivationKind::Prelu { alpha } | ActivationKind::Elu { alpha } => {
                write!(f, "{}(alpha={alpha})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in ACTIVATION_NAMES {
            let k = ActivationKind::from_name(name, None, None, Preset::Classification).unwrap();
            assert_eq!(k.name(), *name);
        }
        assert!(matches!(
            ActivationKind::from_name("bogus", None, None, Preset::Classification),
            Err(SmuError::Config(_))
        ));
    }

    #[test]
    fn preset_and_overrides() {
        let k = ActivationKind::from_name("smu1", None, None, Preset::Detection).unwrap();
        assert_eq!(k.param(Param::Mu), Some(4.332461424154261e-09));
        assert_eq!(k.param(Param::Alpha), Some(0.01));
        let k = ActivationKind::from_name("smu", Some(0.0), Some(2.0), Preset::Classification).unwrap();
        assert_eq!(k.param(Param::Mu), Some(2.0));
        assert!(ActivationKind::from_name("smu", None, Some(-1.0), Preset::Classification).is_err());
    }

    #[test]
    fn trainable_sets() {
        let mut k = ActivationKind::Smu(SmuParams::new(0.25, 1.0));
        assert_eq!(k.trainable_params(), vec![Param::Mu]);
        k.smu_params_mut().unwrap().alpha_trainable = true;
        assert_eq!(k.trainable_params(), vec![Param::Alpha, Param::Mu]);
        assert_eq!(ActivationKind::Prelu { alpha: 0.25 }.trainable_params(), vec![Param::Alpha]);
        assert!(ActivationKind::Gelu.trainable_params().is_empty());
        assert!(ActivationKind::Relu.set_param(Param::Mu, 1.0).is_err());
    }

    #[test]
    fn relu_baselines() {
        assert_eq!(ActivationKind::Relu.eval(-3.0), 0.0);
        assert!((ActivationKind::LeakyRelu { alpha: 0.01 }.eval(-3.0) + 0.03).abs() < 1e-17);
    }
}
