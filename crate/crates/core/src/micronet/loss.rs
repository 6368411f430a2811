use crate::error::{Result, SmuError};
use crate::tensor::Tensor2D;

/// Mean softmax cross-entropy over the batch and its gradient `(softmax - onehot) / batch`.
pub fn softmax_cross_entropy(logits: &Tensor2D, labels: &[usize]) -> Result<(f64, Tensor2D)> {
    let (n, k) = logits.shape();
    if labels.len() != n {
        return Err(SmuError::Shape(format!("{} labels for {n} rows of logits", labels.len())));
    }
    if n == 0 {
        return Err(SmuError::InvalidArgument("empty batch".into()));
    }
    let mut grads = Tensor2D::zeros(n, k);
    let mut total = 0.0;
    for (r, &label) in labels.iter().enumerate() {
        if label >= k {
            return Err(SmuError::InvalidArgument(format!("label {label} out of range for {k} classes")));
        }
        let row = logits.row(r);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = row.iter().map(|&z| (z - max).exp()).sum();
        let log_sum = sum.ln();
        total += log_sum - (row[label] - max);
        let g = grads.row_mut(r);
        for (gi, &z) in g.iter_mut().zip(row) {
            *gi = (z - max).exp() / sum;
        }
        g[label] -= 1.0;
    }
    let scale = 1.0 / n as f64;
    for g in grads.data_mut() {
        *g *= scale;
    }
    Ok((total * scale, grads))
}

pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

pub fn accuracy(logits: &Tensor2D, labels: &[usize]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let hits = labels.iter().enumerate().filter(|&(r, &l)| argmax(logits.row(r)) == l).count();
    hits as f64 / labels.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_give_ln_k() {
        for k in [2usize, 3, 10] {
            let logits = Tensor2D::from_vec(2, k, vec![0.7; 2 * k]).unwrap();
            let (loss, _) = softmax_cross_entropy(&logits, &[0, k - 1]).unwrap();
            assert!((loss - (k as f64).ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn loss_vanishes_with_margin() {
        let mut prev = f64::INFINITY;
        for margin in [1.0, 5.0, 20.0, 50.0] {
            let logits = Tensor2D::from_rows(&[vec![margin, 0.0, 0.0]]).unwrap();
            let (loss, _) = softmax_cross_entropy(&logits, &[0]).unwrap();
            assert!(loss < prev);
            prev = loss;
        }
        assert!(prev < 1e-20);
    }

    #[test]
    fn huge_logits_are_stable() {
        let logits = Tensor2D::from_rows(&[vec![1000.0, -1000.0]]).unwrap();
        let (loss, g) = softmax_cross_entropy(&logits, &[1]).unwrap();
        assert_eq!(loss, 2000.0);
        assert!(g.all_finite());
    }

    #[test]
    fn gradient_rows_sum_to_zero() {
        let logits = Tensor2D::from_rows(&[vec![0.1, 2.0, -1.0], vec![3.0, 0.0, 0.5]]).unwrap();
        let (_, g) = softmax_cross_entropy(&logits, &[2, 0]).unwrap();
        for r in 0..2 {
            assert!(g.row(r).iter().sum::<f64>().abs() < 1e-16);
        }
    }

    #[test]
    fn label_out_of_range() {
        let logits = Tensor2D::zeros(1, 2);
        assert!(softmax_cross_entropy(&logits, &[2]).is_err());
        assert!(softmax_cross_entropy(&logits, &[0, 1]).is_err());
    }

    #[test]
    fn accuracy_counts() {
        let logits = Tensor2D::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 3.0]]).unwrap();
        assert!((accuracy(&logits, &[0, 1, 0]) - 2.0 / 3.0).abs() < 1e-16);
    }
}
