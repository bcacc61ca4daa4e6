//! Confidence-thresholded prediction over a closed-set probability model.
//!
//! For each instance the model's distribution is scored (maximum probability,
//! or negative entropy in nats), the argmax class is taken, and the instance
//! is rejected when its score is at or below the threshold.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that maps an instance to a probability distribution over a fixed,
/// ordered class list.
pub trait ProbabilityModel<I: ?Sized> {
    type Label: Clone + Ord;

    fn classes(&self) -> &[Self::Label];

    /// Probabilities aligned with [`Self::classes`].
    fn predict_proba(&self, instance: &I) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreType {
    MaxProb,
    NegEntropy,
}

impl ScoreType {
    /// Checks that `delta` is a meaningful threshold for `n_classes`:
    /// `[0, 1]` for max-probability, `[-ln n, 0]` for negative entropy.
    pub fn validate_delta(self, delta: f64, n_classes: usize) -> Result<()> {
        if delta.is_nan() {
            return Err(Error::InvalidInput("delta is NaN".into()));
        }
        let (lo, hi) = match self {
            ScoreType::MaxProb => (0.0, 1.0),
            ScoreType::NegEntropy => (-(n_classes.max(1) as f64).ln(), 0.0),
        };
        if delta < lo || delta > hi {
            return Err(Error::InvalidInput(format!(
                "{self} delta must lie in [{lo:.4}, {hi}], got {delta}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ScoreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreType::MaxProb => "maxprob",
            ScoreType::NegEntropy => "negentropy",
        })
    }
}

impl std::str::FromStr for ScoreType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "maxprob" => Ok(ScoreType::MaxProb),
            "negentropy" | "negativeentropy" => Ok(ScoreType::NegEntropy),
            _ => Err(Error::InvalidInput(format!("unknown score type `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpenSetLabel<L> {
    Known(L),
    Rejected,
}

impl<L> OpenSetLabel<L> {
    pub fn known(&self) -> Option<&L> {
        match self {
            OpenSetLabel::Known(l) => Some(l),
            OpenSetLabel::Rejected => None,
        }
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, OpenSetLabel::Rejected)
    }
}

impl<L: fmt::Display> fmt::Display for OpenSetLabel<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSetLabel::Known(l) => l.fmt(f),
            OpenSetLabel::Rejected => f.write_str("rejected"),
        }
    }
}

pub fn score(probs: &[f64], kind: ScoreType) -> f64 {
    match kind {
        ScoreType::MaxProb => probs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ScoreType::NegEntropy => probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<L> {
    pub label: OpenSetLabel<L>,
    /// The argmax class, kept even when the instance is rejected.
    pub argmax: L,
    pub score: f64,
}

/// Labels one distribution. Ties in the argmax go to the earliest class.
pub fn decide<L: Clone>(classes: &[L], probs: &[f64], delta: f64, kind: ScoreType) -> Result<Prediction<L>> {
    if delta.is_nan() {
        return Err(Error::InvalidInput("delta is NaN".into()));
    }
    if classes.is_empty() || classes.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: classes.len(),
            found: probs.len(),
        });
    }
    let best = (0..probs.len()).fold(0, |b, i| if probs[i] > probs[b] { i } else { b });
    let s = score(probs, kind);
    let argmax = classes[best].clone();
    let label = if s <= delta {
        OpenSetLabel::Rejected
    } else {
        OpenSetLabel::Known(argmax.clone())
    };
    Ok(Prediction {
        label,
        argmax,
        score: s,
    })
}

pub fn predict_with_reject<'a, I, M>(
    model: &M,
    instances: impl IntoIterator<Item = &'a I>,
    delta: f64,
    kind: ScoreType,
) -> Result<Vec<Prediction<M::Label>>>
where
    I: ?Sized + 'a,
    M: ProbabilityModel<I>,
{
    instances
        .into_iter()
        .map(|x| decide(model.classes(), &model.predict_proba(x), delta, kind))
        .collect()
}
