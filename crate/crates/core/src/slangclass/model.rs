use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::features::{extract_char_ngrams, extract_morpheme_ngrams, FeatureCounts, FeatureKind, FeatureVocabulary};
use super::logreg::{train_softmax, LogRegParams, SoftmaxWeights, TrainingTrace};
use super::openset::ProbabilityModel;
use super::SlangClass;
use crate::corpus::GoldClassRecord;
use crate::error::{Error, Result};
use crate::morphology::{segment, Segmentation, SegmenterModel};

/// Feature vocabulary plus softmax weights over the classes seen in training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub vocab: FeatureVocabulary,
    pub weights: SoftmaxWeights,
    /// Class order of the weight rows.
    pub classes: Vec<SlangClass>,
    pub regularization: f64,
    /// Required to featurize words when `vocab.kind` is morpheme n-grams.
    pub segmenter: Option<SegmenterModel>,
}

impl ClassifierModel {
    pub(crate) fn after_load(mut self) -> Self {
        self.vocab.reindex();
        self
    }

    fn features_with(&self, word: &str, segmenter: Option<&SegmenterModel>) -> FeatureCounts {
        let (lo, hi) = self.vocab.n_range;
        match self.vocab.kind {
            FeatureKind::CharNgram => extract_char_ngrams(word, lo, hi).unwrap_or_default(),
            FeatureKind::MorphemeNgram => {
                let seg = match segmenter.or(self.segmenter.as_ref()) {
                    Some(m) => segment(m, word),
                    None => Segmentation {
                        word: word.to_string(),
                        morphs: vec![word.to_string()],
                    },
                };
                extract_morpheme_ngrams(&seg, lo, hi).unwrap_or_default()
            }
        }
    }

    /// Probabilities aligned with `self.classes`.
    pub fn probabilities(&self, word: &str, segmenter: Option<&SegmenterModel>) -> Vec<f64> {
        let x = self.vocab.vectorize(&self.features_with(word, segmenter));
        self.weights.probabilities(&x)
    }

    pub fn predict(&self, word: &str) -> SlangClass {
        let p = self.probabilities(word, None);
        let best = (0..p.len()).fold(0, |b, i| if p[i] > p[b] { i } else { b });
        self.classes[best]
    }
}

impl ProbabilityModel<str> for ClassifierModel {
    type Label = SlangClass;

    fn classes(&self) -> &[SlangClass] {
        &self.classes
    }

    fn predict_proba(&self, word: &str) -> Vec<f64> {
        self.probabilities(word, None)
    }
}

/// Softmax over class scores; OOV features are ignored.
pub fn predict_proba(
    model: &ClassifierModel,
    word: &str,
    segmenter: Option<&SegmenterModel>,
) -> BTreeMap<SlangClass, f64> {
    model
        .classes
        .iter()
        .copied()
        .zip(model.probabilities(word, segmenter))
        .collect()
}

/// Trains on precomputed feature maps with a vocabulary already fit on the
/// training data.
pub fn train_logreg(
    x: &[FeatureCounts],
    y: &[SlangClass],
    vocab: FeatureVocabulary,
    params: &LogRegParams,
) -> Result<(ClassifierModel, TrainingTrace)> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need matching non-empty features and labels (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    let mut classes: Vec<SlangClass> = y.to_vec();
    classes.sort();
    classes.dedup();
    let index = |c: &SlangClass| classes.binary_search(c).expect("class present");
    let rows: Vec<Vec<f64>> = x.iter().map(|f| vocab.vectorize(f)).collect();
    let labels: Vec<usize> = y.iter().map(index).collect();
    let (weights, trace) = train_softmax(&rows, &labels, classes.len(), params)?;
    Ok((
        ClassifierModel {
            vocab,
            weights,
            classes,
            regularization: params.l2,
            segmenter: None,
        },
        trace,
    ))
}

/// End-to-end training from gold records: featurize, fit a capped vocabulary
/// on the training words, then fit the weights. For morpheme features a
/// segmenter must be supplied; it is stored in the model.
pub fn train_classifier(
    train: &[GoldClassRecord],
    kind: FeatureKind,
    cap: usize,
    segmenter: Option<SegmenterModel>,
    params: &LogRegParams,
) -> Result<(ClassifierModel, TrainingTrace)> {
    let n_range = (1, 5);
    let feats: Vec<FeatureCounts> = match kind {
        FeatureKind::CharNgram => train
            .iter()
            .map(|r| extract_char_ngrams(&r.word, n_range.0, n_range.1))
            .collect::<Result<_>>()?,
        FeatureKind::MorphemeNgram => {
            let seg = segmenter
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("morpheme features need a trained segmenter".into()))?;
            train
                .iter()
                .map(|r| extract_morpheme_ngrams(&segment(seg, &r.word), n_range.0, n_range.1))
                .collect::<Result<_>>()?
        }
    };
    let vocab = FeatureVocabulary::fit(&feats, kind, n_range, cap);
    let labels: Vec<SlangClass> = train.iter().map(|r| r.label).collect();
    let (mut model, trace) = train_logreg(&feats, &labels, vocab, params)?;
    model.segmenter = segmenter;
    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weight_model_is_uniform() {
        let vocab = FeatureVocabulary::from_features(FeatureKind::CharNgram, (1, 5), vec!["a".into()]);
        let model = ClassifierModel {
            vocab,
            weights: SoftmaxWeights::zeros(4, 1),
            classes: SlangClass::ALL.to_vec(),
            regularization: 1.0,
            segmenter: None,
        };
        let p = predict_proba(&model, "anything", None);
        assert!(p.values().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn learns_obvious_surface_cues() {
        let recs: Vec<GoldClassRecord> = [
            ("A.B.C", SlangClass::Alphabetism),
            ("X.Y.Z", SlangClass::Alphabetism),
            ("Q.R.S", SlangClass::Alphabetism),
            ("boo-boo", SlangClass::Reduplicative),
            ("flip-flop", SlangClass::Reduplicative),
            ("teenie-weenie", SlangClass::Reduplicative),
        ]
        .iter()
        .map(|&(w, c)| GoldClassRecord::new(w, c))
        .collect();
        let (m, _) = train_classifier(&recs, FeatureKind::CharNgram, 200, None, &LogRegParams::default()).unwrap();
        assert_eq!(m.classes.len(), 2);
        assert_eq!(m.predict("K.L.M"), SlangClass::Alphabetism);
        assert_eq!(m.predict("flop-boo"), SlangClass::Reduplicative);
        let p = predict_proba(&m, "zzz", None);
        assert!((p.values().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn morpheme_features_require_segmenter() {
        let recs = vec![GoldClassRecord::new("ab", SlangClass::Blend)];
        assert!(train_classifier(&recs, FeatureKind::MorphemeNgram, 10, None, &LogRegParams::default()).is_err());
    }
}
