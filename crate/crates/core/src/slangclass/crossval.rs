//! Cross-class validation: hold out one whole class at a time, train on the
//! rest, and score open-set predictions where the held-out class must be
//! rejected.

use std::collections::BTreeSet;

use super::openset::{predict_with_reject, OpenSetLabel, ProbabilityModel, ScoreType};
use super::SlangClass;
use crate::corpus::{split_gold, DatasetSplit, GoldClassRecord};
use crate::error::{Error, Result};
use crate::stats::ConfusionMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub held_out: SlangClass,
    pub weighted_f1: f64,
    pub confusion: ConfusionMatrix<OpenSetLabel<SlangClass>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossClassReport {
    pub folds: Vec<FoldResult>,
    pub mean_weighted_f1: f64,
}

/// Runs one fold per class present in `split.train`. In fold `c` the model is
/// trained on training records of every other class and evaluated on the whole
/// test side, where records of class `c` carry the true label `Rejected`.
pub fn cross_class_validate_split<M, F>(
    split: &DatasetSplit<GoldClassRecord>,
    mut factory: F,
    delta: f64,
    kind: ScoreType,
) -> Result<CrossClassReport>
where
    M: ProbabilityModel<str, Label = SlangClass>,
    F: FnMut(&[GoldClassRecord]) -> Result<M>,
{
    let classes: BTreeSet<SlangClass> = split.train.iter().map(|r| r.label).collect();
    if classes.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "cross-class validation needs at least 3 classes, got {}",
            classes.len()
        )));
    }
    if split.test.is_empty() {
        return Err(Error::EmptyInput("cross-class validation needs test records"));
    }
    let mut labels: Vec<OpenSetLabel<SlangClass>> = classes.iter().map(|&c| OpenSetLabel::Known(c)).collect();
    labels.push(OpenSetLabel::Rejected);

    let mut folds = Vec::new();
    for &held_out in &classes {
        let train: Vec<GoldClassRecord> = split.train.iter().filter(|r| r.label != held_out).cloned().collect();
        let model = factory(&train)?;
        let truth: Vec<OpenSetLabel<SlangClass>> = split
            .test
            .iter()
            .map(|r| {
                if r.label == held_out {
                    OpenSetLabel::Rejected
                } else {
                    OpenSetLabel::Known(r.label)
                }
            })
            .collect();
        let pred: Vec<OpenSetLabel<SlangClass>> =
            predict_with_reject(&model, split.test.iter().map(|r| r.word.as_str()), delta, kind)?
                .into_iter()
                .map(|p| p.label)
                .collect();
        let confusion = ConfusionMatrix::from_pairs(&truth, &pred, &labels)?;
        folds.push(FoldResult {
            held_out,
            weighted_f1: confusion.weighted_f1(),
            confusion,
        });
    }
    let mean_weighted_f1 = folds.iter().map(|f| f.weighted_f1).sum::<f64>() / folds.len() as f64;
    Ok(CrossClassReport {
        folds,
        mean_weighted_f1,
    })
}

/// Splits `gold` (stratified, seeded) and runs [`cross_class_validate_split`].
pub fn cross_class_validate<M, F>(
    gold: &[GoldClassRecord],
    factory: F,
    delta: f64,
    kind: ScoreType,
    test_fraction: f64,
    seed: u64,
) -> Result<CrossClassReport>
where
    M: ProbabilityModel<str, Label = SlangClass>,
    F: FnMut(&[GoldClassRecord]) -> Result<M>,
{
    let split = split_gold(gold, test_fraction, seed)?;
    cross_class_validate_split(&split, factory, delta, kind)
}
