use crate::activation::{ActivationKind, Param};
use crate::datasets::Rng;
use crate::error::{Result, SmuError};
use crate::tensor::{dot, Tensor2D};

/// Fully connected layer `y = x W^T + b` with `W` stored `out x in`.
#[derive(Debug, Clone)]
pub struct DenseLayer {
    pub weights: Tensor2D,
    pub bias: Vec<f64>,
    pub grad_weights: Tensor2D,
    pub grad_bias: Vec<f64>,
    cached_input: Option<Tensor2D>,
}

impl DenseLayer {
    pub fn new(weights: Tensor2D, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(SmuError::Shape(format!("bias of length {} for {} output units", bias.len(), weights.rows())));
        }
        let (o, i) = weights.shape();
        Ok(Self { grad_weights: Tensor2D::zeros(o, i), grad_bias: vec![0.0; o], weights, bias, cached_input: None })
    }

    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self::new(Tensor2D::zeros(outputs, inputs), vec![0.0; outputs]).expect("consistent shapes")
    }

    /// Weights uniform in `[-limit, limit]`, drawn row-major; zero bias.
    pub fn uniform(inputs: usize, outputs: usize, limit: f64, rng: &mut Rng) -> Self {
        let mut layer = Self::zeros(inputs, outputs);
        for w in layer.weights.data_mut() {
            *w = rng.uniform_in(-limit, limit);
        }
        layer
    }

    pub fn inputs(&self) -> usize {
        self.weights.cols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.rows()
    }

    pub fn apply(&self, x: &Tensor2D) -> Result<Tensor2D> {
        let mut y = x.matmul_transposed(&self.weights)?;
        for r in 0..y.rows() {
            for (v, b) in y.row_mut(r).iter_mut().zip(&self.bias) {
                *v += b;
            }
        }
        Ok(y)
    }

    pub fn forward(&mut self, x: &Tensor2D) -> Result<Tensor2D> {
        let y = self.apply(x)?;
        self.cached_input = Some(x.clone());
        Ok(y)
    }

    /// Overwrites the parameter gradients and returns the input gradient.
    pub fn backward(&mut self, dy: &Tensor2D) -> Result<Tensor2D> {
        let x =
            self.cached_input.take().ok_or_else(|| SmuError::State("dense backward called before forward".into()))?;
        if dy.shape() != (x.rows(), self.outputs()) {
            return Err(SmuError::Shape(format!(
                "upstream gradient {:?}, expected {:?}",
                dy.shape(),
                (x.rows(), self.outputs())
            )));
        }
        self.grad_weights.data_mut().fill(0.0);
        self.grad_bias.fill(0.0);
        for b in 0..x.rows() {
            let xr = x.row(b);
            for (o, &g) in dy.row(b).iter().enumerate() {
                self.grad_bias[o] += g;
                if g != 0.0 {
                    for (w, &xi) in self.grad_weights.row_mut(o).iter_mut().zip(xr) {
                        *w += g * xi;
                    }
                }
            }
        }
        dy.matmul(&self.weights)
    }
}

/// Elementwise activation with one shared value per shape parameter.
#[derive(Debug, Clone)]
pub struct ActivationLayer {
    pub kind: ActivationKind,
    pub accumulated_grad_mu: f64,
    pub accumulated_grad_alpha: f64,
    cached_preactivation: Option<Tensor2D>,
}

impl ActivationLayer {
    pub fn new(kind: ActivationKind) -> Self {
        Self { kind, accumulated_grad_mu: 0.0, accumulated_grad_alpha: 0.0, cached_preactivation: None }
    }

    pub fn apply(&self, x: &Tensor2D) -> Tensor2D {
        x.map(|v| self.kind.eval(v))
    }

    pub fn forward(&mut self, x: &Tensor2D) -> Tensor2D {
        let y = self.apply(x);
        self.cached_preactivation = Some(x.clone());
        y
    }

    /// Returns the input gradient and sets the accumulated parameter gradients to
    /// `sum(dy * d act / d param)` over every element.
    pub fn backward(&mut self, dy: &Tensor2D) -> Result<Tensor2D> {
        let pre = self
            .cached_preactivation
            .take()
            .ok_or_else(|| SmuError::State("activation backward called before forward".into()))?;
        if dy.shape() != pre.shape() {
            return Err(SmuError::Shape(format!("upstream gradient {:?}, expected {:?}", dy.shape(), pre.shape())));
        }
        let params = self.kind.params();
        let has_alpha = params.contains(&Param::Alpha);
        let has_mu = params.contains(&Param::Mu);
        let mut dx = Tensor2D::zeros(pre.rows(), pre.cols());
        let mut g_alpha = Vec::with_capacity(if has_alpha { pre.data().len() } else { 0 });
        let mut g_mu = Vec::with_capacity(if has_mu { pre.data().len() } else { 0 });
        for ((d, &x), &g) in dx.data_mut().iter_mut().zip(pre.data()).zip(dy.data()) {
            let local = self.kind.grads(x);
            *d = g * local.dx;
            if has_alpha {
                g_alpha.push(local.dalpha);
            }
            if has_mu {
                g_mu.push(local.dmu);
            }
        }
        self.accumulated_grad_alpha = if has_alpha { dot(dy.data(), &g_alpha) } else { 0.0 };
        self.accumulated_grad_mu = if has_mu { dot(dy.data(), &g_mu) } else { 0.0 };
        Ok(dx)
    }

    pub fn grad(&self, which: Param) -> f64 {
        match which {
            Param::Alpha => self.accumulated_grad_alpha,
            Param::Mu => self.accumulated_grad_mu,
        }
    }
}
