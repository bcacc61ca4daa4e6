//! Multinomial logistic regression trained by full-batch gradient descent with
//! backtracking line search.
//!
//! Objective for `n` rows, weights `W` (classes × features) and biases `b`:
//!
//! ```text
//! L(W, b) = (1/n) Σ_i −log softmax(W·x_i + b)[y_i]  +  (l2 / 2n) ‖W‖²
//! ```
//!
//! Biases are not penalized. With `l2 = 1/C` this is the usual `C`-scaled
//! formulation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub l2: f64,
    /// Initial step size; shrunk by backtracking, regrown after accepted steps.
    pub lr: f64,
    pub max_epochs: usize,
    /// Stop once the gradient's Euclidean norm falls to this value.
    pub tol: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self {
            l2: 1.0,
            lr: 1.0,
            max_epochs: 500,
            tol: 1e-5,
        }
    }
}

/// Row-major `n_classes × (n_features + 1)` weights; the last column is the bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxWeights {
    pub n_classes: usize,
    pub n_features: usize,
    pub values: Vec<f64>,
}

impl SoftmaxWeights {
    pub fn zeros(n_classes: usize, n_features: usize) -> Self {
        Self {
            n_classes,
            n_features,
            values: vec![0.0; n_classes * (n_features + 1)],
        }
    }

    pub fn row(&self, class: usize) -> &[f64] {
        let w = self.n_features + 1;
        &self.values[class * w..(class + 1) * w]
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_classes)
            .map(|c| {
                let row = self.row(c);
                row[..self.n_features].iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + row[self.n_features]
            })
            .collect()
    }

    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.scores(x))
    }
}

pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

fn log_sum_exp(scores: &[f64]) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln()
}

/// Regularized mean negative log-likelihood and its gradient with respect to
/// `weights.values`.
pub fn loss_and_gradient(weights: &SoftmaxWeights, x: &[Vec<f64>], y: &[usize], l2: f64) -> (f64, Vec<f64>) {
    let (k, d) = (weights.n_classes, weights.n_features);
    let stride = d + 1;
    let n = x.len() as f64;
    let mut grad = vec![0.0; weights.values.len()];
    let mut loss = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let s = weights.scores(xi);
        let lse = log_sum_exp(&s);
        loss += lse - s[yi];
        for c in 0..k {
            let residual = (s[c] - lse).exp() - if c == yi { 1.0 } else { 0.0 };
            let g = &mut grad[c * stride..(c + 1) * stride];
            for (gj, xj) in g[..d].iter_mut().zip(xi) {
                *gj += residual * xj;
            }
            g[d] += residual;
        }
    }
    loss /= n;
    let mut penalty = 0.0;
    for c in 0..k {
        for j in 0..d {
            let w = weights.values[c * stride + j];
            penalty += w * w;
            grad[c * stride + j] = grad[c * stride + j] / n + l2 * w / n;
        }
        grad[c * stride + d] /= n;
    }
    (loss + 0.5 * l2 * penalty / n, grad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub losses: Vec<f64>,
    pub final_grad_norm: f64,
    pub converged: bool,
}

/// Fits softmax weights starting from zero. `y[i]` indexes into `0..n_classes`.
pub fn train_softmax(
    x: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    params: &LogRegParams,
) -> Result<(SoftmaxWeights, TrainingTrace)> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "need matching non-empty features and labels (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    let d = x[0].len();
    if x.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidInput("feature rows differ in length".into()));
    }
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::InvalidInput(format!("label index {bad} out of range")));
    }
    if !(params.l2 >= 0.0 && params.lr > 0.0 && params.tol >= 0.0) {
        return Err(Error::InvalidInput("l2 and tol must be >= 0 and lr > 0".into()));
    }

    let mut w = SoftmaxWeights::zeros(n_classes, d);
    let mut losses = Vec::new();
    let mut lr = params.lr;
    let mut grad_norm = f64::INFINITY;
    let mut converged = false;
    for epoch in 0..params.max_epochs {
        let (loss, grad) = loss_and_gradient(&w, x, y, params.l2);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        losses.push(loss);
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        grad_norm = g2.sqrt();
        if grad_norm <= params.tol {
            converged = true;
            break;
        }
        // Armijo backtracking
        let mut accepted = false;
        for _ in 0..60 {
            let trial = SoftmaxWeights {
                values: w.values.iter().zip(&grad).map(|(wi, gi)| wi - lr * gi).collect(),
                ..w.clone()
            };
            let (trial_loss, _) = loss_and_gradient(&trial, x, y, params.l2);
            if trial_loss.is_finite() && trial_loss <= loss - 1e-4 * lr * g2 {
                w = trial;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if !accepted {
            // step underflowed; we are at numerical precision
            converged = true;
            break;
        }
        lr = (lr * 2.0).min(params.lr * 1e3);
    }
    Ok((
        w,
        TrainingTrace {
            losses,
            final_grad_norm: grad_norm,
            converged,
        },
    ))
}
