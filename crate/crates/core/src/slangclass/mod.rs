//! Slang formation classes: a four-way classifier with open-set rejection and
//! rule-based analyzers for clippings, reduplicatives and blends.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

mod baseline;
mod compare;
mod crossval;
mod features;
mod logreg;
mod model;
mod openset;
mod patterns;
pub mod synthetic;

pub use baseline::{random_baseline, LabelSampler};
pub use compare::{compare_feature_models, ModelComparison};
pub use crossval::{cross_class_validate, cross_class_validate_split, CrossClassReport, FoldResult};
pub use features::{
    extract_char_ngrams, extract_morpheme_ngrams, FeatureCounts, FeatureKind, FeatureVocabulary, MORPH_SEPARATOR,
};
pub use logreg::{loss_and_gradient, train_softmax, LogRegParams, SoftmaxWeights, TrainingTrace};
pub use model::{predict_proba, train_classifier, train_logreg, ClassifierModel};
pub use openset::{decide, predict_with_reject, score, OpenSetLabel, Prediction, ProbabilityModel, ScoreType};
pub use patterns::{
    blend_suffix, blend_suffix_stats, classify_clipping, classify_reduplicative, classify_reduplicative_with,
    reduplicative_parts, substitution_stats, BlendSuffixStats, ClippingType, ReduplicativeType, SubstitutionStats,
    VowelSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlangClass {
    Alphabetism,
    Blend,
    Clipping,
    Reduplicative,
}

impl SlangClass {
    pub const ALL: [SlangClass; 4] = [
        SlangClass::Alphabetism,
        SlangClass::Blend,
        SlangClass::Clipping,
        SlangClass::Reduplicative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SlangClass::Alphabetism => "alphabetism",
            SlangClass::Blend => "blend",
            SlangClass::Clipping => "clipping",
            SlangClass::Reduplicative => "reduplicative",
        }
    }
}

impl fmt::Display for SlangClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClass(pub String);

impl fmt::Display for UnknownClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown slang class `{}`", self.0)
    }
}

impl std::error::Error for UnknownClass {}

impl FromStr for SlangClass {
    type Err = UnknownClass;

    /// Accepts full names and the ALP/BLE/CLI/REDUP abbreviations, any case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alphabetism" | "alphabetisms" | "alp" | "acronym" | "initialism" => Ok(SlangClass::Alphabetism),
            "blend" | "blends" | "ble" => Ok(SlangClass::Blend),
            "clipping" | "clippings" | "cli" => Ok(SlangClass::Clipping),
            "reduplicative" | "reduplicatives" | "redup" => Ok(SlangClass::Reduplicative),
            _ => Err(UnknownClass(s.to_string())),
        }
    }
}
