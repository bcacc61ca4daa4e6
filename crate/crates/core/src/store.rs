//! Versioned binary container for trained models and ingested corpora.
//!
//! Layout: the 8 magic bytes `SLANGLEX`, a one-byte payload kind, a
//! little-endian `u16` format version, then the bincode-encoded payload.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::corpus::LexiconEntry;
use crate::error::{Error, Result};
use crate::morphology::SegmenterModel;
use crate::slangclass::ClassifierModel;
use crate::social::{KnnModel, SubjectLabel};

pub const MAGIC: &[u8; 8] = b"SLANGLEX";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum PayloadKind {
    Corpus = 1,
    Segmenter = 2,
    Classifier = 3,
    Knn = 4,
}

impl PayloadKind {
    fn from_byte(b: u8) -> Option<Self> {
        [Self::Corpus, Self::Segmenter, Self::Classifier, Self::Knn]
            .into_iter()
            .find(|k| *k as u8 == b)
    }
}

fn encode<T: Serialize>(kind: PayloadKind, value: &T) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(64);
    out.extend_from_slice(MAGIC);
    out.push(kind as u8);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    bincode::serialize_into(&mut out, value).map_err(|e| Error::Container(e.to_string()))?;
    Ok(out)
}

fn decode<T: DeserializeOwned>(kind: PayloadKind, bytes: &[u8]) -> Result<T> {
    if bytes.len() < 11 || &bytes[..8] != MAGIC {
        return Err(Error::Container("not a slanglex container".into()));
    }
    let found = PayloadKind::from_byte(bytes[8])
        .ok_or_else(|| Error::Container(format!("unknown payload kind {}", bytes[8])))?;
    if found != kind {
        return Err(Error::Container(format!(
            "expected a {kind:?} payload, found {found:?}"
        )));
    }
    let version = u16::from_le_bytes([bytes[9], bytes[10]]);
    if version != FORMAT_VERSION {
        return Err(Error::Container(format!(
            "format version {version} is not supported (expected {FORMAT_VERSION})"
        )));
    }
    bincode::deserialize(&bytes[11..]).map_err(|e| Error::Container(e.to_string()))
}

fn write(path: &Path, bytes: Vec<u8>) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

// LexiconEntry skips absent optionals in JSON, which bincode cannot express.
#[derive(Serialize, Deserialize)]
struct StoredEntry {
    headword: String,
    definitions: Vec<String>,
    examples: Vec<String>,
    upvotes: u64,
    downvotes: u64,
    subjects: Option<BTreeSet<SubjectLabel>>,
    year_added: Option<i32>,
}

pub fn encode_corpus(entries: &[LexiconEntry]) -> Result<Vec<u8>> {
    let stored: Vec<StoredEntry> = entries
        .iter()
        .cloned()
        .map(|e| StoredEntry {
            headword: e.headword,
            definitions: e.definitions,
            examples: e.examples,
            upvotes: e.upvotes,
            downvotes: e.downvotes,
            subjects: e.subjects,
            year_added: e.year_added,
        })
        .collect();
    encode(PayloadKind::Corpus, &stored)
}

pub fn decode_corpus(bytes: &[u8]) -> Result<Vec<LexiconEntry>> {
    let stored: Vec<StoredEntry> = decode(PayloadKind::Corpus, bytes)?;
    Ok(stored
        .into_iter()
        .map(|s| LexiconEntry {
            headword: s.headword,
            definitions: s.definitions,
            examples: s.examples,
            upvotes: s.upvotes,
            downvotes: s.downvotes,
            subjects: s.subjects,
            year_added: s.year_added,
        })
        .collect())
}

pub fn save_corpus(path: impl AsRef<Path>, entries: &[LexiconEntry]) -> Result<()> {
    write(path.as_ref(), encode_corpus(entries)?)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<LexiconEntry>> {
    decode_corpus(&read(path.as_ref())?)
}

pub fn save_classifier(path: impl AsRef<Path>, model: &ClassifierModel) -> Result<()> {
    write(path.as_ref(), encode(PayloadKind::Classifier, model)?)
}

pub fn load_classifier(path: impl AsRef<Path>) -> Result<ClassifierModel> {
    decode::<ClassifierModel>(PayloadKind::Classifier, &read(path.as_ref())?).map(ClassifierModel::after_load)
}

pub fn save_segmenter(path: impl AsRef<Path>, model: &SegmenterModel) -> Result<()> {
    write(path.as_ref(), encode(PayloadKind::Segmenter, model)?)
}

pub fn load_segmenter(path: impl AsRef<Path>) -> Result<SegmenterModel> {
    decode(PayloadKind::Segmenter, &read(path.as_ref())?)
}

pub fn save_knn(path: impl AsRef<Path>, model: &KnnModel) -> Result<()> {
    write(path.as_ref(), encode(PayloadKind::Knn, model)?)
}

pub fn load_knn(path: impl AsRef<Path>) -> Result<KnnModel> {
    decode(PayloadKind::Knn, &read(path.as_ref())?)
}
