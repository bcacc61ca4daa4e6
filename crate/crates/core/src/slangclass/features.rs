use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphology::Segmentation;

/// Joins morphs inside a morpheme n-gram feature. A control character, so it
/// cannot collide with anything that appears in a headword.
pub const MORPH_SEPARATOR: char = '\u{1f}';

pub type FeatureCounts = BTreeMap<String, u32>;

/// All contiguous character substrings of length `n_min..=n_max`, with
/// multiplicity. Case and punctuation are kept.
pub fn extract_char_ngrams(word: &str, n_min: usize, n_max: usize) -> Result<FeatureCounts> {
    if word.is_empty() {
        return Err(Error::InvalidInput("cannot extract n-grams from an empty word".into()));
    }
    check_range(n_min, n_max)?;
    let offsets: Vec<usize> = word
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(word.len()))
        .collect();
    let n_chars = offsets.len() - 1;
    let mut out = FeatureCounts::new();
    for n in n_min..=n_max.min(n_chars) {
        for start in 0..=n_chars - n {
            *out.entry(word[offsets[start]..offsets[start + n]].to_string())
                .or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Contiguous morph subsequences of length `n_min..=n_max`, joined with
/// [`MORPH_SEPARATOR`].
pub fn extract_morpheme_ngrams(seg: &Segmentation, n_min: usize, n_max: usize) -> Result<FeatureCounts> {
    check_range(n_min, n_max)?;
    let m = &seg.morphs;
    let sep = MORPH_SEPARATOR.to_string();
    let mut out = FeatureCounts::new();
    for n in n_min..=n_max.min(m.len()) {
        for w in m.windows(n) {
            *out.entry(w.join(&sep)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

fn check_range(n_min: usize, n_max: usize) -> Result<()> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidInput(format!("invalid n-gram range {n_min}..={n_max}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    CharNgram,
    MorphemeNgram,
}

/// The `cap` most frequent training features, most frequent first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVocabulary {
    pub kind: FeatureKind,
    pub n_range: (usize, usize),
    pub features: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl FeatureVocabulary {
    /// Ranks features by total count over `docs`; ties are broken
    /// lexicographically.
    pub fn fit(docs: &[FeatureCounts], kind: FeatureKind, n_range: (usize, usize), cap: usize) -> Self {
        let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
        for d in docs {
            for (f, &c) in d {
                *totals.entry(f).or_insert(0) += c as u64;
            }
        }
        let mut ranked: Vec<(&str, u64)> = totals.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let features = ranked.into_iter().take(cap).map(|(f, _)| f.to_string()).collect();
        Self::from_features(kind, n_range, features)
    }

    pub fn from_features(kind: FeatureKind, n_range: (usize, usize), features: Vec<String>) -> Self {
        let index = features.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        Self {
            kind,
            n_range,
            features,
            index,
        }
    }

    /// Rebuilds the lookup index after deserialization.
    pub(crate) fn reindex(&mut self) {
        self.index = self.features.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn column(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    /// Dense count vector; features outside the vocabulary are dropped.
    pub fn vectorize(&self, counts: &FeatureCounts) -> Vec<f64> {
        let mut v = vec![0.0; self.features.len()];
        for (f, &c) in counts {
            if let Some(i) = self.column(f) {
                v[i] = c as f64;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fc(pairs: &[(&str, u32)]) -> FeatureCounts {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn char_ngrams_enumerated() {
        assert_eq!(
            extract_char_ngrams("ab", 1, 2).unwrap(),
            fc(&[("a", 1), ("b", 1), ("ab", 1)])
        );
        assert_eq!(
            extract_char_ngrams("boo", 1, 2).unwrap(),
            fc(&[("b", 1), ("o", 2), ("bo", 1), ("oo", 1)])
        );
        let dotted = extract_char_ngrams("A.B", 1, 5).unwrap();
        for f in [".", "A.", ".B", "A.B"] {
            assert!(dotted.contains_key(f), "{f}");
        }
        assert!(extract_char_ngrams("", 1, 5).is_err());
    }

    #[test]
    fn morph_ngrams() {
        let s = |ms: &[&str]| Segmentation {
            word: ms.concat(),
            morphs: ms.iter().map(|m| m.to_string()).collect(),
        };
        let got = extract_morpheme_ngrams(&s(&["dog", "cat"]), 1, 5).unwrap();
        let joined = format!("dog{MORPH_SEPARATOR}cat");
        assert_eq!(got, fc(&[("dog", 1), ("cat", 1), (joined.as_str(), 1)]));
        assert_eq!(extract_morpheme_ngrams(&s(&["x"]), 1, 5).unwrap().len(), 1);
        let abc = extract_morpheme_ngrams(&s(&["a", "b", "c"]), 1, 5).unwrap();
        let by_len = |k: usize| abc.keys().filter(|f| f.split(MORPH_SEPARATOR).count() == k).count();
        assert_eq!((by_len(1), by_len(2), by_len(3)), (3, 2, 1));
    }

    #[test]
    fn vocabulary_cap_and_ties() {
        let docs = [fc(&[("b", 2), ("a", 1), ("c", 1)]), fc(&[("c", 1), ("d", 1)])];
        let v = FeatureVocabulary::fit(&docs, FeatureKind::CharNgram, (1, 5), 3);
        assert_eq!(v.features, ["b", "c", "a"]);
        assert_eq!(v.vectorize(&fc(&[("a", 4), ("zz", 9)])), vec![0.0, 0.0, 4.0]);
    }

    proptest! {
        #[test]
        fn ngram_total_matches_formula(word in "\\PC{1,20}", n_max in 1usize..6) {
            let len = word.chars().count();
            let total: u32 = extract_char_ngrams(&word, 1, n_max).unwrap().values().sum();
            let want: usize = (1..=n_max.min(len)).map(|n| len - n + 1).sum();
            prop_assert_eq!(total as usize, want);
        }
    }
}
