//! Reference activations used for comparison runs.

use std::f64::consts::FRAC_1_SQRT_2;

use super::erf::{erf, gauss, FRAC_2_SQRT_PI};

pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

pub fn relu_dx(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

pub fn leaky_relu(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        alpha * x
    }
}

pub fn leaky_relu_dx(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        alpha
    }
}

/// `d leaky_relu / d alpha`, the PReLU parameter gradient.
pub fn leaky_relu_dalpha(x: f64) -> f64 {
    if x > 0.0 {
        0.0
    } else {
        x
    }
}

pub fn relu6(x: f64) -> f64 {
    x.clamp(0.0, 6.0)
}

pub fn relu6_dx(x: f64) -> f64 {
    if x > 0.0 && x < 6.0 {
        1.0
    } else {
        0.0
    }
}

pub fn elu(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        alpha * x.exp_m1()
    }
}

pub fn elu_dx(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        alpha * x.exp()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`, stable for large `|x|`.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

pub fn softplus_dx(x: f64) -> f64 {
    sigmoid(x)
}

pub fn swish(x: f64) -> f64 {
    x * sigmoid(x)
}

pub fn swish_dx(x: f64) -> f64 {
    let s = sigmoid(x);
    s + x * s * (1.0 - s)
}

/// `x * Phi(x)`. Evaluated with the same operation sequence as SMU at `alpha = 0`,
/// `mu = 1/sqrt(2)`, so the two agree bit-for-bit.
pub fn gelu(x: f64) -> f64 {
    0.5 * (1.0 * x) + 0.5 * (x * erf(FRAC_1_SQRT_2 * x))
}

pub fn gelu_dx(x: f64) -> f64 {
    let t = FRAC_1_SQRT_2 * x;
    let g = gauss(t);
    let tail = if g == 0.0 { 0.0 } else { g * t };
    0.5 * (1.0 + erf(t) + FRAC_2_SQRT_PI * tail)
}
