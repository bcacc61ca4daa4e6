use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Draws labels i.i.d. from the empirical training label distribution.
#[derive(Debug, Clone)]
pub struct LabelSampler<L> {
    labels: Vec<L>,
    weights: Vec<f64>,
    dist: WeightedIndex<u64>,
    rng: ChaCha8Rng,
}

impl<L: Clone> LabelSampler<L> {
    pub fn sample(&mut self) -> L {
        self.labels[self.dist.sample(&mut self.rng)].clone()
    }

    pub fn predictions(&mut self, n: usize) -> Vec<L> {
        (0..n).map(|_| self.sample()).collect()
    }

    /// Sampling probabilities, aligned with [`LabelSampler::labels`].
    pub fn probabilities(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }
}

pub fn random_baseline<L: Clone + Ord>(train_labels: &[L], seed: u64) -> Result<LabelSampler<L>> {
    if train_labels.is_empty() {
        return Err(Error::EmptyInput("random baseline needs training labels"));
    }
    let mut counts: BTreeMap<&L, u64> = BTreeMap::new();
    for l in train_labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    let n = train_labels.len() as f64;
    let labels: Vec<L> = counts.keys().map(|&l| l.clone()).collect();
    let weights = counts.values().map(|&c| c as f64 / n).collect();
    let dist = WeightedIndex::new(counts.values().copied()).expect("positive counts");
    Ok(LabelSampler {
        labels,
        weights,
        dist,
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}
