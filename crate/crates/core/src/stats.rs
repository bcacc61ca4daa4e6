//! Evaluation metrics and hypothesis tests shared by the analysis modules.
//!
//! Everything here is a pure function over label or count slices. Labels are
//! generic so the same code scores slang classes, open-set labels and subject
//! categories.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Square matrix of counts; rows are true labels, columns are predictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix<L> {
    labels: Vec<L>,
    counts: Vec<Vec<u64>>,
}

impl<L: Ord + Clone> ConfusionMatrix<L> {
    /// Tallies `truth`/`pred` pairs. Every value must appear in `labels`.
    pub fn from_pairs(truth: &[L], pred: &[L], labels: &[L]) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(Error::InvalidInput(format!(
                "truth has {} labels but predictions have {}",
                truth.len(),
                pred.len()
            )));
        }
        let index: BTreeMap<&L, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        if index.len() != labels.len() {
            return Err(Error::InvalidInput("duplicate label in label list".into()));
        }
        let mut counts = vec![vec![0u64; labels.len()]; labels.len()];
        for (t, p) in truth.iter().zip(pred) {
            let (Some(&i), Some(&j)) = (index.get(t), index.get(p)) else {
                return Err(Error::InvalidInput(
                    "a label value is missing from the label list".into(),
                ));
            };
            counts[i][j] += 1;
        }
        Ok(Self {
            labels: labels.to_vec(),
            counts,
        })
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, truth: &L, pred: &L) -> Option<u64> {
        let i = self.labels.iter().position(|l| l == truth)?;
        let j = self.labels.iter().position(|l| l == pred)?;
        Some(self.counts[i][j])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Number of instances whose true label is `labels[i]`.
    pub fn support(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn predicted(&self, i: usize) -> u64 {
        self.counts.iter().map(|row| row[i]).sum()
    }

    pub fn precision(&self, i: usize) -> f64 {
        ratio(self.counts[i][i], self.predicted(i))
    }

    pub fn recall(&self, i: usize) -> f64 {
        ratio(self.counts[i][i], self.support(i))
    }

    /// F1 for one class; 0 when precision and recall are both 0.
    pub fn f1(&self, i: usize) -> f64 {
        let (p, r) = (self.precision(i), self.recall(i));
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    /// Per-class F1 averaged with weights proportional to true support.
    pub fn weighted_f1(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (0..self.labels.len())
            .map(|i| self.f1(i) * self.support(i) as f64)
            .sum::<f64>()
            / total as f64
    }

    /// Same counts under a different label order. `labels` must be a
    /// permutation of the current labels.
    pub fn reordered(&self, labels: &[L]) -> Result<Self> {
        let pos: Vec<usize> = labels
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| Error::InvalidInput("label not in matrix".into()))
            })
            .collect::<Result<_>>()?;
        if pos.len() != self.labels.len() {
            return Err(Error::InvalidInput("label order is not a permutation".into()));
        }
        let counts = pos
            .iter()
            .map(|&i| pos.iter().map(|&j| self.counts[i][j]).collect())
            .collect();
        Ok(Self {
            labels: labels.to_vec(),
            counts,
        })
    }

    pub fn report(&self) -> Vec<ClassReport<L>> {
        (0..self.labels.len())
            .map(|i| ClassReport {
                label: self.labels[i].clone(),
                precision: self.precision(i),
                recall: self.recall(i),
                f1: self.f1(i),
                support: self.support(i),
            })
            .collect()
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport<L> {
    pub label: L,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Confusion matrix over `labels` plus per-class precision/recall/F1.
pub fn confusion_and_report<L: Ord + Clone>(
    truth: &[L],
    pred: &[L],
    labels: &[L],
) -> Result<(ConfusionMatrix<L>, Vec<ClassReport<L>>)> {
    let cm = ConfusionMatrix::from_pairs(truth, pred, labels)?;
    let report = cm.report();
    Ok((cm, report))
}

/// Support-weighted F1 over every label that occurs in either list.
pub fn weighted_f1<L: Ord + Clone>(truth: &[L], pred: &[L]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyInput("weighted F1 needs at least one instance"));
    }
    let labels: Vec<L> = truth
        .iter()
        .chain(pred)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(ConfusionMatrix::from_pairs(truth, pred, &labels)?.weighted_f1())
}

/// Standard normal CDF.
///
/// Hart's double-precision rational approximation (algorithm 5666, in the
/// arrangement published by G. West, 2005). Absolute error is below 1e-14 over
/// the whole real line, and the lower tail is evaluated directly so small
/// p-values do not suffer cancellation.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let z = x.abs();
    let tail = if z > 37.0 {
        0.0
    } else {
        let e = (-z * z / 2.0).exp();
        if z < 7.071_067_811_865_47 {
            let mut num = 3.526_249_659_989_11e-2 * z + 0.700_383_064_443_688;
            num = num * z + 6.373_962_203_531_65;
            num = num * z + 33.912_866_078_383;
            num = num * z + 112.079_291_497_871;
            num = num * z + 221.213_596_169_931;
            num = num * z + 220.206_867_912_376;
            let mut den = 8.838_834_764_831_84e-2 * z + 1.755_667_163_182_64;
            den = den * z + 16.064_177_579_207;
            den = den * z + 86.780_732_202_946_1;
            den = den * z + 296.564_248_779_674;
            den = den * z + 637.333_633_378_831;
            den = den * z + 793.826_512_519_948;
            den = den * z + 440.413_735_824_752;
            e * num / den
        } else {
            let mut b = z + 0.65;
            b = z + 4.0 / b;
            b = z + 3.0 / b;
            b = z + 2.0 / b;
            b = z + 1.0 / b;
            e / b / 2.506_628_274_631
        }
    };
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionTestResult {
    pub z: f64,
    pub p_value: f64,
    pub adjusted_alpha: f64,
    pub significant: bool,
}

/// Two-sided pooled z-test for `x1/n1` vs `x2/n2`, Bonferroni-corrected for
/// `m` simultaneous comparisons.
pub fn two_proportion_ztest(x1: u64, n1: u64, x2: u64, n2: u64, alpha: f64, m: u32) -> Result<ProportionTestResult> {
    if n1 == 0 || n2 == 0 || x1 > n1 || x2 > n2 {
        return Err(Error::InvalidInput(format!(
            "counts must satisfy 0 <= x <= n and n >= 1 (got {x1}/{n1}, {x2}/{n2})"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("number of comparisons must be >= 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha {alpha} not in (0, 1)")));
    }
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1f + n2f);
    if pooled <= 0.0 || pooled >= 1.0 {
        return Err(Error::Undefined(format!(
            "pooled proportion is {pooled}; z statistic has zero variance"
        )));
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    let z = (x1 as f64 / n1f - x2 as f64 / n2f) / se;
    let p_value = (2.0 * normal_cdf(-z.abs())).min(1.0);
    let adjusted_alpha = alpha / m as f64;
    Ok(ProportionTestResult {
        z,
        p_value,
        adjusted_alpha,
        significant: p_value < adjusted_alpha,
    })
}
