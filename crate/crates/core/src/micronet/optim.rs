use serde::{Deserialize, Serialize};

use crate::error::{Result, SmuError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum OptimizerKind {
    Sgd,
    SgdMomentum { momentum: f64 },
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl OptimizerKind {
    pub const MOMENTUM: OptimizerKind = OptimizerKind::SgdMomentum { momentum: 0.9 };
    pub const ADAM: OptimizerKind = OptimizerKind::Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8 };

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::SgdMomentum { .. } => "sgd-momentum",
            OptimizerKind::Adam { .. } => "adam",
        }
    }
}

impl Default for OptimizerKind {
    fn default() -> Self {
        Self::MOMENTUM
    }
}

impl std::str::FromStr for OptimizerKind {
    type Err = SmuError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(OptimizerKind::Sgd),
            "sgd-momentum" | "momentum" => Ok(Self::MOMENTUM),
            "adam" => Ok(Self::ADAM),
            other => Err(SmuError::InvalidArgument(format!(
                "unknown optimizer '{other}' (expected sgd, sgd-momentum or adam)"
            ))),
        }
    }
}

/// Optimizer state over a flat parameter vector.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    first: Vec<f64>,
    second: Vec<f64>,
    steps: i32,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, len: usize) -> Self {
        let second = if matches!(kind, OptimizerKind::Adam { .. }) { len } else { 0 };
        Self { kind, first: vec![0.0; len], second: vec![0.0; second], steps: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) {
        assert_eq!(params.len(), grads.len());
        assert_eq!(params.len(), self.first.len());
        self.steps = self.steps.saturating_add(1);
        match self.kind {
            OptimizerKind::Sgd => {
                for (p, g) in params.iter_mut().zip(grads) {
                    *p -= lr * g;
                }
            }
            OptimizerKind::SgdMomentum { momentum } => {
                for ((p, g), v) in params.iter_mut().zip(grads).zip(&mut self.first) {
                    *v = momentum * *v + g;
                    *p -= lr * *v;
                }
            }
            OptimizerKind::Adam { beta1, beta2, eps } => {
                let c1 = 1.0 - beta1.powi(self.steps);
                let c2 = 1.0 - beta2.powi(self.steps);
                for (((p, g), m), v) in params.iter_mut().zip(grads).zip(&mut self.first).zip(&mut self.second) {
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimise(kind: OptimizerKind, lr: f64) -> f64 {
        // f(p) = (p - 3)^2
        let mut p = [0.0];
        let mut opt = Optimizer::new(kind, 1);
        for _ in 0..500 {
            let g = [2.0 * (p[0] - 3.0)];
            opt.step(&mut p, &g, lr);
        }
        p[0]
    }

    #[test]
    fn all_optimizers_converge_on_a_quadratic() {
        assert!((minimise(OptimizerKind::Sgd, 0.1) - 3.0).abs() < 1e-9);
        assert!((minimise(OptimizerKind::MOMENTUM, 0.05) - 3.0).abs() < 1e-9);
        assert!((minimise(OptimizerKind::ADAM, 0.05) - 3.0).abs() < 1e-3);
    }

    #[test]
    fn first_adam_step_is_lr_sized() {
        let mut p = [1.0];
        let mut opt = Optimizer::new(OptimizerKind::ADAM, 1);
        opt.step(&mut p, &[123.0], 0.01);
        assert!((p[0] - 0.99).abs() < 1e-9);
    }

    #[test]
    fn parse() {
        assert_eq!("adam".parse::<OptimizerKind>().unwrap(), OptimizerKind::ADAM);
        assert!("rmsprop".parse::<OptimizerKind>().is_err());
    }
}
