use serde::Serialize;

use super::baseline::random_baseline;
use super::features::FeatureKind;
use super::logreg::LogRegParams;
use super::model::{train_classifier, ClassifierModel};
use super::SlangClass;
use crate::corpus::{DatasetSplit, GoldClassRecord};
use crate::error::Result;
use crate::morphology::{train_segmenter, SegmenterParams};
use crate::stats::weighted_f1;

/// Closed-set weighted F1 of the three reference models on one split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub char_ngram: f64,
    pub morpheme: f64,
    pub random: f64,
    pub test_size: usize,
}

impl ModelComparison {
    /// Char n-grams beat morphemes, which beat the label-distribution baseline.
    pub fn ordering_holds(&self) -> bool {
        self.char_ngram > self.morpheme && self.morpheme > self.random
    }
}

/// Trains both feature models plus the random baseline on `split.train` and
/// scores them on `split.test`. The segmenter is trained on the training words.
pub fn compare_feature_models(
    split: &DatasetSplit<GoldClassRecord>,
    cap: usize,
    segmenter: SegmenterParams,
    params: &LogRegParams,
    seed: u64,
) -> Result<ModelComparison> {
    let words: Vec<String> = split.train.iter().map(|r| r.word.clone()).collect();
    let seg = train_segmenter(&words, segmenter)?;
    let (char_model, _) = train_classifier(&split.train, FeatureKind::CharNgram, cap, None, params)?;
    let (morph_model, _) = train_classifier(&split.train, FeatureKind::MorphemeNgram, cap, Some(seg), params)?;

    let truth: Vec<SlangClass> = split.test.iter().map(|r| r.label).collect();
    let predict = |m: &ClassifierModel| -> Vec<SlangClass> { split.test.iter().map(|r| m.predict(&r.word)).collect() };
    let train_labels: Vec<SlangClass> = split.train.iter().map(|r| r.label).collect();
    let random = random_baseline(&train_labels, seed)?.predictions(truth.len());

    Ok(ModelComparison {
        char_ngram: weighted_f1(&truth, &predict(&char_model))?,
        morpheme: weighted_f1(&truth, &predict(&morph_model))?,
        random: weighted_f1(&truth, &random)?,
        test_size: truth.len(),
    })
}
