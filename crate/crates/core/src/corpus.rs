//! Lexicon data model, ingestion and splitting.
//!
//! Slang lexicons are read from JSON lines (one [`LexiconEntry`] per line),
//! the standard-English reference lexicon from `word<TAB>definition` TSV, and
//! gold class annotations from `word<TAB>label[<TAB>component+component]` TSV.
//! Field names are listed in `docs/schema.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::slangclass::SlangClass;
use crate::social::SubjectLabel;

/// One slang headword with its definitions, usage examples and votes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub headword: String,
    #[serde(default)]
    pub definitions: Vec<String>,
    #[serde(default)]
    pub examples: Vec<String>,
    pub upvotes: u64,
    pub downvotes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subjects: Option<BTreeSet<SubjectLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_added: Option<i32>,
}

impl LexiconEntry {
    pub fn new(headword: impl Into<String>, upvotes: u64, downvotes: u64) -> Self {
        Self {
            headword: headword.into(),
            definitions: Vec::new(),
            examples: Vec::new(),
            upvotes,
            downvotes,
            subjects: None,
            year_added: None,
        }
    }

    pub fn votes(&self) -> u64 {
        self.upvotes + self.downvotes
    }

    /// Lowercased headword used for joins against other lexicons.
    pub fn key(&self) -> String {
        self.headword.trim().to_lowercase()
    }

    fn validate(&self, line: usize) -> Result<()> {
        if self.headword.trim().is_empty() {
            return Err(Error::schema(line, "headword", "must be non-empty"));
        }
        if let Some(i) = self.examples.iter().position(|e| e.trim().is_empty()) {
            return Err(Error::schema(line, "examples", format!("example {i} is empty")));
        }
        Ok(())
    }
}

/// Reference vocabulary of standard English.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardLexicon {
    pub words: BTreeSet<String>,
    pub definitions: BTreeMap<String, Vec<String>>,
}

impl StandardLexicon {
    pub fn insert(&mut self, word: &str, definition: Option<&str>) {
        self.words.insert(word.to_string());
        if let Some(d) = definition {
            self.definitions
                .entry(word.to_string())
                .or_default()
                .push(d.to_string());
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// A word annotated with its formation class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldClassRecord {
    pub word: String,
    pub label: SlangClass,
    /// Source word(s) for blends and clippings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
}

impl GoldClassRecord {
    pub fn new(word: impl Into<String>, label: SlangClass) -> Self {
        Self {
            word: word.into(),
            label,
            components: None,
        }
    }

    pub fn with_components<S: Into<String>>(mut self, parts: impl IntoIterator<Item = S>) -> Self {
        self.components = Some(parts.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit<T> {
    pub train: Vec<T>,
    pub test: Vec<T>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconFormat {
    SlangJsonl,
    StandardTsv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lexicon {
    Slang(Vec<LexiconEntry>),
    Standard(StandardLexicon),
}

pub fn load_lexicon(path: impl AsRef<Path>, format: LexiconFormat) -> Result<Lexicon> {
    Ok(match format {
        LexiconFormat::SlangJsonl => Lexicon::Slang(load_slang_jsonl(path)?),
        LexiconFormat::StandardTsv => Lexicon::Standard(load_standard_tsv(path)?),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

pub fn load_slang_jsonl(path: impl AsRef<Path>) -> Result<Vec<LexiconEntry>> {
    let path = path.as_ref();
    parse_slang_jsonl(open(path)?).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Parses JSON lines. Blank lines are skipped; every other line must be a
/// JSON object satisfying the entry invariants.
pub fn parse_slang_jsonl(reader: impl BufRead) -> Result<Vec<LexiconEntry>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).map_err(|e| Error::schema(line_no, "<line>", format!("invalid JSON: {e}")))?;
        out.push(entry_from_json(&value, line_no)?);
    }
    Ok(out)
}

fn entry_from_json(value: &Value, line: usize) -> Result<LexiconEntry> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema(line, "<line>", "expected a JSON object"))?;

    let headword = match obj.get("headword") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::schema(line, "headword", "must be a string")),
        None => return Err(Error::schema(line, "headword", "missing")),
    };
    let votes = |field: &str| -> Result<u64> {
        match obj.get(field) {
            None | Some(Value::Null) => Ok(0),
            Some(Value::Number(n)) => match (n.as_u64(), n.as_i64()) {
                (Some(v), _) => Ok(v),
                (None, Some(v)) => Err(Error::schema(line, field, format!("negative value {v}"))),
                _ => Err(Error::schema(line, field, format!("not an integer: {n}"))),
            },
            Some(_) => Err(Error::schema(line, field, "must be an integer")),
        }
    };
    let strings = |field: &str| -> Result<Vec<String>> {
        match obj.get(field) {
            None | Some(Value::Null) => Ok(Vec::new()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::schema(line, field, "items must be strings"))
                })
                .collect(),
            Some(_) => Err(Error::schema(line, field, "must be an array of strings")),
        }
    };

    let subjects = match obj.get("subjects") {
        None | Some(Value::Null) => None,
        Some(_) => Some(
            strings("subjects")?
                .iter()
                .map(|s| {
                    s.parse::<SubjectLabel>()
                        .map_err(|_| Error::schema(line, "subjects", format!("unknown subject `{s}`")))
                })
                .collect::<Result<BTreeSet<_>>>()?,
        ),
    };
    let year_added = match obj.get("year_added") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_i64()
                .and_then(|y| i32::try_from(y).ok())
                .ok_or_else(|| Error::schema(line, "year_added", "must be an integer year"))?,
        ),
    };

    let entry = LexiconEntry {
        headword,
        definitions: strings("definitions")?,
        examples: strings("examples")?,
        upvotes: votes("upvotes")?,
        downvotes: votes("downvotes")?,
        subjects,
        year_added,
    };
    entry.validate(line)?;
    Ok(entry)
}

pub fn write_slang_jsonl(entries: &[LexiconEntry], mut out: impl Write) -> Result<()> {
    for e in entries {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n").map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

pub fn load_standard_tsv(path: impl AsRef<Path>) -> Result<StandardLexicon> {
    let path = path.as_ref();
    parse_standard_tsv(open(path)?)
}

/// `word<TAB>definition` per line; a bare word adds it without a definition.
/// Repeated words accumulate definitions. `#` starts a comment line.
pub fn parse_standard_tsv(reader: impl BufRead) -> Result<StandardLexicon> {
    let mut lex = StandardLexicon::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, def) = match line.split_once('\t') {
            Some((w, d)) => (w.trim(), Some(d.trim()).filter(|d| !d.is_empty())),
            None => (line.trim(), None),
        };
        if word.is_empty() {
            return Err(Error::schema(idx + 1, "word", "must be non-empty"));
        }
        lex.insert(word, def);
    }
    Ok(lex)
}

pub fn load_gold_tsv(path: impl AsRef<Path>) -> Result<Vec<GoldClassRecord>> {
    let path = path.as_ref();
    parse_gold_tsv(open(path)?)
}

/// `word<TAB>label[<TAB>part+part...]`.
pub fn parse_gold_tsv(reader: impl BufRead) -> Result<Vec<GoldClassRecord>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let word = cols.next().unwrap_or("").trim();
        if word.is_empty() {
            return Err(Error::schema(line_no, "word", "must be non-empty"));
        }
        let label_str = cols.next().ok_or_else(|| Error::schema(line_no, "label", "missing"))?;
        let label = label_str
            .trim()
            .parse::<SlangClass>()
            .map_err(|_| Error::schema(line_no, "label", format!("unknown class `{label_str}`")))?;
        let components = cols
            .next()
            .map(|c| {
                c.split('+')
                    .map(|p| p.trim().to_string())
                    .filter(|p| !p.is_empty())
                    .collect::<Vec<_>>()
            })
            .filter(|c| !c.is_empty());
        out.push(GoldClassRecord {
            word: word.to_string(),
            label,
            components,
        });
    }
    Ok(out)
}

pub fn write_gold_tsv(records: &[GoldClassRecord], mut out: impl Write) -> Result<()> {
    for r in records {
        let line = match &r.components {
            Some(c) => format!("{}\t{}\t{}\n", r.word, r.label, c.join("+")),
            None => format!("{}\t{}\n", r.word, r.label),
        };
        out.write_all(line.as_bytes()).map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

/// Keeps entries whose total votes (up + down) reach `min_votes`, in order.
pub fn filter_by_votes(entries: &[LexiconEntry], min_votes: u64) -> Vec<LexiconEntry> {
    entries.iter().filter(|e| e.votes() >= min_votes).cloned().collect()
}

/// Stratified split: each class contributes `round(n * test_fraction)` records
/// (at least 1, at most n - 1) to the test side. Both sides keep input order.
pub fn split_gold(records: &[GoldClassRecord], test_fraction: f64, seed: u64) -> Result<DatasetSplit<GoldClassRecord>> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "test fraction {test_fraction} not in (0, 1)"
        )));
    }
    if records.is_empty() {
        return Err(Error::EmptyInput("no gold records to split"));
    }
    let mut by_class: BTreeMap<SlangClass, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.label).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_test = vec![false; records.len()];
    for (class, mut idx) in by_class {
        let n = idx.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "class {class} has {n} record(s); need at least 2 to split"
            )));
        }
        let k = ((n as f64 * test_fraction).round() as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..k] {
            in_test[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (r, t) in records.iter().zip(in_test) {
        if t {
            test.push(r.clone());
        } else {
            train.push(r.clone());
        }
    }
    Ok(DatasetSplit { train, test, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry(up: u64, down: u64) -> LexiconEntry {
        LexiconEntry::new(format!("w{up}_{down}"), up, down)
    }

    #[test]
    fn empty_jsonl() {
        assert!(parse_slang_jsonl("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn one_entry() {
        let line = r#"{"headword":"thizz","definitions":["ecstasy"],"examples":["thizz is NOT pure extacy","he popped a thizz"],"upvotes":120,"downvotes":8,"subjects":["drugs"]}"#;
        let got = parse_slang_jsonl(line.as_bytes()).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].headword, "thizz");
        assert_eq!(got[0].examples.len(), 2);
        assert_eq!(
            got[0].subjects.as_ref().unwrap().iter().next(),
            Some(&SubjectLabel::Drugs)
        );
    }

    #[test]
    fn negative_votes_name_line_and_field() {
        let text =
            "{\"headword\":\"a\",\"upvotes\":1,\"downvotes\":0}\n{\"headword\":\"b\",\"upvotes\":-3,\"downvotes\":0}\n";
        match parse_slang_jsonl(text.as_bytes()) {
            Err(Error::Schema { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "upvotes");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn missing_and_blank_headword() {
        let e = parse_slang_jsonl(r#"{"upvotes":1}"#.as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "headword"));
        let e = parse_slang_jsonl(r#"{"headword":"  "}"#.as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "headword"));
        let e = parse_slang_jsonl(r#"{"headword":"x","examples":["ok",""]}"#.as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "examples"));
    }

    #[test]
    fn headword_kept_verbatim() {
        let got = parse_slang_jsonl(r#"{"headword":"E.V.I.L","upvotes":5}"#.as_bytes()).unwrap();
        assert_eq!(got[0].headword, "E.V.I.L");
        assert_eq!(got[0].key(), "e.v.i.l");
    }

    #[test]
    fn vote_threshold_is_inclusive() {
        let kept = filter_by_votes(&[entry(60, 40), entry(50, 49)], 100);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].votes(), 100);
        assert!(filter_by_votes(&[], 100).is_empty());
    }

    #[test]
    fn standard_tsv() {
        let text = "# comment\ncat\ta small feline\ncat\tto vomit\ndog\n\n";
        let lex = parse_standard_tsv(text.as_bytes()).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.definitions["cat"].len(), 2);
        assert!(!lex.definitions.contains_key("dog"));
    }

    #[test]
    fn gold_tsv() {
        let text = "sextini\tblend\tsex+martini\nBLT\talphabetism\n";
        let gold = parse_gold_tsv(text.as_bytes()).unwrap();
        assert_eq!(
            gold[0].components.as_deref(),
            Some(&["sex".to_string(), "martini".to_string()][..])
        );
        assert_eq!(gold[1].label, SlangClass::Alphabetism);
        let e = parse_gold_tsv("x\tnoun\n".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Schema { line: 1, ref field, .. } if field == "label"));
    }

    fn gold(n_per_class: usize) -> Vec<GoldClassRecord> {
        SlangClass::ALL
            .iter()
            .flat_map(|&c| (0..n_per_class).map(move |i| GoldClassRecord::new(format!("{c}{i}"), c)))
            .collect()
    }

    #[test]
    fn split_single_class_arithmetic() {
        let recs: Vec<_> = (0..100)
            .map(|i| GoldClassRecord::new(format!("w{i}"), SlangClass::Blend))
            .collect();
        let s = split_gold(&recs, 0.10, 1).unwrap();
        assert_eq!(s.test.len(), 10);
        assert_eq!(s.train.len(), 90);
    }

    #[test]
    fn split_is_deterministic_and_stratified() {
        let recs = gold(25);
        let a = split_gold(&recs, 0.10, 42).unwrap();
        let b = split_gold(&recs, 0.10, 42).unwrap();
        assert_eq!(a, b);
        for c in SlangClass::ALL {
            let n = a.test.iter().filter(|r| r.label == c).count();
            assert!((2..=3).contains(&n), "{c}: {n}");
        }
        assert!((10..=12).contains(&a.test.len()));
        for t in &a.test {
            assert!(!a.train.contains(t));
        }
    }

    #[test]
    fn split_needs_two_per_class() {
        let mut recs = gold(5);
        recs.push(GoldClassRecord::new("lonely", SlangClass::Blend));
        recs.retain(|r| r.label != SlangClass::Clipping || r.word == "clipping0");
        assert!(split_gold(&recs, 0.1, 0).is_err());
        assert!(split_gold(&gold(5), 0.0, 0).is_err());
    }

    fn arb_entry() -> impl Strategy<Value = LexiconEntry> {
        (
            "[a-zA-Z][a-zA-Z .'-]{0,12}",
            proptest::collection::vec("[a-z ]{0,10}", 0..3),
            proptest::collection::vec("[a-z]{1,6}( [a-z]{1,6}){0,4}", 0..3),
            0u64..500,
            0u64..500,
            proptest::option::of(proptest::collection::btree_set(
                proptest::sample::select(SubjectLabel::ALL.to_vec()),
                0..3,
            )),
            proptest::option::of(1999i32..2024),
        )
            .prop_map(
                |(headword, definitions, examples, upvotes, downvotes, subjects, year_added)| LexiconEntry {
                    headword,
                    definitions,
                    examples,
                    upvotes,
                    downvotes,
                    subjects,
                    year_added,
                },
            )
    }

    proptest! {
        #[test]
        fn jsonl_round_trip(entries in proptest::collection::vec(arb_entry(), 0..8)) {
            let mut buf = Vec::new();
            write_slang_jsonl(&entries, &mut buf).unwrap();
            prop_assert_eq!(parse_slang_jsonl(buf.as_slice()).unwrap(), entries);
        }

        #[test]
        fn filter_idempotent_and_monotone(
            votes in proptest::collection::vec((0u64..300, 0u64..300), 0..30),
            lo in 0u64..400,
            extra in 0u64..200,
        ) {
            let entries: Vec<_> = votes.iter().map(|&(u, d)| entry(u, d)).collect();
            let once = filter_by_votes(&entries, lo);
            prop_assert_eq!(filter_by_votes(&once, lo), once.clone());
            let higher = filter_by_votes(&entries, lo + extra);
            prop_assert!(higher.iter().all(|e| once.contains(e)));
        }

        #[test]
        fn split_partitions_input(seed in any::<u64>(), n in 2usize..20, frac in 0.05f64..0.9) {
            let recs = gold(n);
            let s = split_gold(&recs, frac, seed).unwrap();
            let mut all: Vec<_> = s.train.iter().chain(&s.test).map(|r| r.word.clone()).collect();
            all.sort();
            let mut want: Vec<_> = recs.iter().map(|r| r.word.clone()).collect();
            want.sort();
            prop_assert_eq!(all, want);
        }
    }
}
