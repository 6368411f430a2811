use super::layer::{ActivationLayer, DenseLayer};
use super::loss::{accuracy, softmax_cross_entropy};
use crate::activation::{ActivationKind, Param};
use crate::datasets::Rng;
use crate::error::{Result, SmuError};
use crate::tensor::Tensor2D;

#[derive(Debug, Clone)]
pub enum Layer {
    Dense(DenseLayer),
    Activation(ActivationLayer),
}

/// Sequential stack of dense and activation layers producing logits.
///
/// Trainable parameters are exposed as one flat vector: per layer in order, dense
/// weights (row-major) then bias; activation layers contribute their trainable
/// shape parameters (alpha before mu). Frozen parameters are not part of it.
#[derive(Debug, Clone)]
pub struct Network {
    layers: Vec<Layer>,
}

/// Parses `2x32x32x2` into layer widths.
pub fn parse_model_spec(spec: &str) -> Result<Vec<usize>> {
    let sizes = spec
        .split(['x', 'X'])
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| SmuError::InvalidArgument(format!("bad layer width '{s}' in model '{spec}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() < 2 {
        return Err(SmuError::InvalidArgument(format!("model '{spec}' needs at least input and output widths")));
    }
    Ok(sizes)
}

impl Network {
    pub fn new(layers: Vec<Layer>) -> Self {
        Self { layers }
    }

    /// Dense layers of the given widths with `activation` after every hidden layer.
    ///
    /// Hidden layers use He-uniform weights (`limit = sqrt(6 / fan_in)`), the output layer
    /// Glorot-uniform (`sqrt(6 / (fan_in + fan_out))`); biases start at zero. Weights are
    /// drawn from `Rng::new(seed)` layer by layer, so they do not depend on the activation.
    pub fn mlp(sizes: &[usize], activation: ActivationKind, seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(SmuError::InvalidArgument(format!("invalid layer widths {sizes:?}")));
        }
        activation.validate()?;
        let mut rng = Rng::new(seed);
        let mut layers = Vec::with_capacity(2 * sizes.len());
        let last = sizes.len() - 2;
        for (i, w) in sizes.windows(2).enumerate() {
            let (fan_in, fan_out) = (w[0], w[1]);
            if i < last {
                let limit = (6.0 / fan_in as f64).sqrt();
                layers.push(Layer::Dense(DenseLayer::uniform(fan_in, fan_out, limit, &mut rng)));
                layers.push(Layer::Activation(ActivationLayer::new(activation)));
            } else {
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                layers.push(Layer::Dense(DenseLayer::uniform(fan_in, fan_out, limit, &mut rng)));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> Option<usize> {
        self.layers.iter().find_map(|l| match l {
            Layer::Dense(d) => Some(d.inputs()),
            Layer::Activation(_) => None,
        })
    }

    pub fn output_dim(&self) -> Option<usize> {
        self.layers.iter().rev().find_map(|l| match l {
            Layer::Dense(d) => Some(d.outputs()),
            Layer::Activation(_) => None,
        })
    }

    pub fn activation_layers(&self) -> impl Iterator<Item = &ActivationLayer> {
        self.layers.iter().filter_map(|l| match l {
            Layer::Activation(a) => Some(a),
            Layer::Dense(_) => None,
        })
    }

    /// Current `mu` of each activation layer that has one.
    pub fn mus(&self) -> Vec<f64> {
        self.activation_layers().filter_map(|a| a.kind.param(Param::Mu)).collect()
    }

    fn check_input(&self, batch: &Tensor2D) -> Result<()> {
        match self.input_dim() {
            Some(d) if d == batch.cols() => Ok(()),
            Some(d) => Err(SmuError::Config(format!("network expects {d} input features, batch has {}", batch.cols()))),
            None => Ok(()),
        }
    }

    fn describe(&self, index: usize) -> String {
        match &self.layers[index] {
            Layer::Dense(d) => format!("layer {index} (dense {}->{})", d.inputs(), d.outputs()),
            Layer::Activation(a) => format!("layer {index} ({})", a.kind),
        }
    }

    /// Logits without touching the backward caches.
    pub fn infer(&self, batch: &Tensor2D) -> Result<Tensor2D> {
        self.check_input(batch)?;
        let mut x = batch.clone();
        for layer in &self.layers {
            x = match layer {
                Layer::Dense(d) => d.apply(&x)?,
                Layer::Activation(a) => a.apply(&x),
            };
        }
        Ok(x)
    }

    /// Logits, caching what [`Self::backward`] needs.
    ///
    /// Fails with [`SmuError::Divergence`] naming the first layer whose output is not finite
    /// (the epoch field is 0; training fills it in).
    pub fn forward(&mut self, batch: &Tensor2D) -> Result<Tensor2D> {
        self.check_input(batch)?;
        let mut x = batch.clone();
        for i in 0..self.layers.len() {
            x = match &mut self.layers[i] {
                Layer::Dense(d) => d.forward(&x)?,
                Layer::Activation(a) => a.forward(&x),
            };
            if !x.all_finite() {
                return Err(SmuError::Divergence { epoch: 0, location: self.describe(i) });
            }
        }
        Ok(x)
    }

    /// Backpropagates `logit_grads` and returns the flat gradient of the trainable
    /// parameters (same order as [`Self::params`]).
    pub fn backward(&mut self, logit_grads: &Tensor2D) -> Result<Vec<f64>> {
        let mut g = logit_grads.clone();
        for layer in self.layers.iter_mut().rev() {
            g = match layer {
                Layer::Dense(d) => d.backward(&g)?,
                Layer::Activation(a) => a.backward(&g)?,
            };
        }
        Ok(self.grads())
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Dense(d) => d.weights.data().len() + d.bias.len(),
                Layer::Activation(a) => a.kind.trainable_params().len(),
            })
            .sum()
    }

    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            match layer {
                Layer::Dense(d) => {
                    out.extend_from_slice(d.weights.data());
                    out.extend_from_slice(&d.bias);
                }
                Layer::Activation(a) => {
                    for p in a.kind.trainable_params() {
                        out.push(a.kind.param(p).expect("trainable parameter exists"));
                    }
                }
            }
        }
        out
    }

    pub fn grads(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            match layer {
                Layer::Dense(d) => {
                    out.extend_from_slice(d.grad_weights.data());
                    out.extend_from_slice(&d.grad_bias);
                }
                Layer::Activation(a) => {
                    for p in a.kind.trainable_params() {
                        out.push(a.grad(p));
                    }
                }
            }
        }
        out
    }

    pub fn set_params(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.param_count() {
            return Err(SmuError::Shape(format!("{} values for {} parameters", values.len(), self.param_count())));
        }
        let mut rest = values;
        for layer in &mut self.layers {
            match layer {
                Layer::Dense(d) => {
                    let (w, tail) = rest.split_at(d.weights.data().len());
                    d.weights.data_mut().copy_from_slice(w);
                    let (b, tail) = tail.split_at(d.bias.len());
                    d.bias.copy_from_slice(b);
                    rest = tail;
                }
                Layer::Activation(a) => {
                    for p in a.kind.trainable_params() {
                        a.kind.set_param(p, rest[0])?;
                        rest = &rest[1..];
                    }
                }
            }
        }
        Ok(())
    }

    /// Index and description of the first layer holding a non-finite parameter.
    pub fn first_non_finite_layer(&self) -> Option<String> {
        self.layers.iter().enumerate().find_map(|(i, l)| {
            let bad = match l {
                Layer::Dense(d) => !d.weights.all_finite() || d.bias.iter().any(|b| !b.is_finite()),
                Layer::Activation(a) => a.kind.params().iter().any(|&p| !a.kind.param(p).unwrap_or(0.0).is_finite()),
            };
            bad.then(|| self.describe(i))
        })
    }

    /// Mean loss and accuracy over `features`, evaluated in chunks.
    pub fn evaluate(&self, features: &Tensor2D, labels: &[usize]) -> Result<(f64, f64)> {
        if labels.is_empty() {
            return Ok((0.0, 0.0));
        }
        let logits = self.infer(features)?;
        let (loss, _) = softmax_cross_entropy(&logits, labels)?;
        Ok((loss, accuracy(&logits, labels)))
    }

    /// Loss on a batch via forward, backward, and the flat gradient.
    pub fn loss_and_grad(&mut self, batch: &Tensor2D, labels: &[usize]) -> Result<(f64, Vec<f64>)> {
        let logits = self.forward(batch)?;
        let (loss, g) = softmax_cross_entropy(&logits, labels)?;
        let grads = self.backward(&g)?;
        Ok((loss, grads))
    }
}
