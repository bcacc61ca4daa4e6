//! Grapheme-to-phoneme conversion and phoneme / articulation-manner statistics.
//!
//! Conversion first looks a token up in a CMU-format pronouncing table and
//! falls back to a longest-match letter-cluster rule table for words the table
//! does not cover. Both tables are plain text; small versions are bundled.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{two_proportion_ztest, ProportionTestResult};

const BUNDLED_TABLE: &str = include_str!("../data/cmudict-subset.dict");
const BUNDLED_RULES: &str = include_str!("../data/g2p-rules.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Manner {
    Stop,
    Fricative,
    Vowel,
    Nasal,
    Liquid,
    Affricate,
    Aspirate,
    Semivowel,
}

impl Manner {
    pub const ALL: [Manner; 8] = [
        Manner::Stop,
        Manner::Fricative,
        Manner::Vowel,
        Manner::Nasal,
        Manner::Liquid,
        Manner::Affricate,
        Manner::Aspirate,
        Manner::Semivowel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Manner::Stop => "stop",
            Manner::Fricative => "fricative",
            Manner::Vowel => "vowel",
            Manner::Nasal => "nasal",
            Manner::Liquid => "liquid",
            Manner::Affricate => "affricate",
            Manner::Aspirate => "aspirate",
            Manner::Semivowel => "semivowel",
        }
    }
}

impl fmt::Display for Manner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use Manner::*;

// Alphabetical, so `Phoneme`'s derived ordering is alphabetical too.
const INVENTORY: [(&str, Manner); 39] = [
    ("AA", Vowel),
    ("AE", Vowel),
    ("AH", Vowel),
    ("AO", Vowel),
    ("AW", Vowel),
    ("AY", Vowel),
    ("B", Stop),
    ("CH", Affricate),
    ("D", Stop),
    ("DH", Fricative),
    ("EH", Vowel),
    ("ER", Vowel),
    ("EY", Vowel),
    ("F", Fricative),
    ("G", Stop),
    ("HH", Aspirate),
    ("IH", Vowel),
    ("IY", Vowel),
    ("JH", Affricate),
    ("K", Stop),
    ("L", Liquid),
    ("M", Nasal),
    ("N", Nasal),
    ("NG", Nasal),
    ("OW", Vowel),
    ("OY", Vowel),
    ("P", Stop),
    ("R", Liquid),
    ("S", Fricative),
    ("SH", Fricative),
    ("T", Stop),
    ("TH", Fricative),
    ("UH", Vowel),
    ("UW", Vowel),
    ("V", Fricative),
    ("W", Semivowel),
    ("Y", Semivowel),
    ("Z", Fricative),
    ("ZH", Fricative),
];

/// One of the 39 ARPAbet phonemes, stress stripped.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phoneme(u8);

impl Phoneme {
    /// Parses an ARPAbet symbol, ignoring a trailing stress digit (`AH0`).
    pub fn parse(symbol: &str) -> Result<Self> {
        let bare = symbol.trim_end_matches(|c: char| c.is_ascii_digit());
        let upper = bare.to_ascii_uppercase();
        INVENTORY
            .binary_search_by(|(s, _)| s.cmp(&upper.as_str()))
            .map(|i| Phoneme(i as u8))
            .map_err(|_| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn symbol(self) -> &'static str {
        INVENTORY[self.0 as usize].0
    }

    pub fn manner(self) -> Manner {
        INVENTORY[self.0 as usize].1
    }

    pub fn all() -> impl Iterator<Item = Phoneme> {
        (0..INVENTORY.len() as u8).map(Phoneme)
    }
}

impl fmt::Debug for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Phoneme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Phoneme::parse(s)
    }
}

pub fn manner_of(symbol: &str) -> Result<Manner> {
    Phoneme::parse(symbol).map(Phoneme::manner)
}

fn parse_sequence(symbols: &str) -> Result<Vec<Phoneme>> {
    symbols.split_whitespace().map(Phoneme::parse).collect()
}

/// Word → pronunciation, keyed by lowercased spelling. Only the first
/// pronunciation of a word is kept.
#[derive(Debug, Clone, Default)]
pub struct PronouncingTable {
    entries: HashMap<String, Vec<Phoneme>>,
}

impl PronouncingTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLE.as_bytes()).expect("bundled pronouncing table is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(std::io::BufReader::new(file))
    }

    /// Accepts both the classic `WORD  PH1 PH2` layout and the lowercase
    /// single-space variant. `;;;` lines and `#` trailers are comments;
    /// `WORD(2)` alternates are skipped.
    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut entries = HashMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<reader>", e))?;
            if line.starts_with(";;;") {
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            let Some((word, rest)) = line.split_once(char::is_whitespace) else {
                continue;
            };
            if word.ends_with(')') && word.contains('(') {
                continue;
            }
            let phonemes = parse_sequence(rest).map_err(|e| Error::schema(idx + 1, "phonemes", e.to_string()))?;
            if phonemes.is_empty() {
                continue;
            }
            entries.entry(word.to_lowercase()).or_insert(phonemes);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, word: &str) -> Option<&[Phoneme]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Letter-cluster → phoneme rules applied greedily left to right, longest
/// cluster first.
///
/// A cluster may be anchored: `^ck` only matches at the start of a token,
/// `e$` only at the end, `^e$` only as the whole token. At equal length the
/// most specific anchor wins. A phoneme list of `-` marks a silent cluster.
#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    rules: HashMap<String, Vec<Phoneme>>,
    max_len: usize,
}

impl RuleTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_RULES.as_bytes()).expect("bundled rule table is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(std::io::BufReader::new(file))
    }

    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut rules = HashMap::new();
        let mut max_len = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<reader>", e))?;
            let line = line.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (cluster, phones) = line
                .split_once('\t')
                .ok_or_else(|| Error::schema(idx + 1, "rule", "expected `cluster<TAB>phonemes`"))?;
            let cluster = cluster.trim().to_lowercase();
            let letters = cluster.trim_start_matches('^').trim_end_matches('$');
            if letters.is_empty() || !letters.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(Error::schema(
                    idx + 1,
                    "cluster",
                    format!("invalid cluster `{cluster}`"),
                ));
            }
            let phones = phones.trim();
            let seq = if phones == "-" {
                Vec::new()
            } else {
                parse_sequence(phones).map_err(|e| Error::schema(idx + 1, "phonemes", e.to_string()))?
            };
            max_len = max_len.max(letters.len());
            rules.insert(cluster, seq);
        }
        Ok(Self { rules, max_len })
    }

    /// Applies the rules to a lowercase ASCII-letter token.
    pub fn apply(&self, letters: &str) -> Vec<Phoneme> {
        let bytes = letters.as_bytes();
        let n = bytes.len();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            let mut matched = false;
            for len in (1..=self.max_len.min(n - i)).rev() {
                let cluster = &letters[i..i + len];
                let (at_start, at_end) = (i == 0, i + len == n);
                let candidates = [
                    (at_start && at_end).then(|| format!("^{cluster}$")),
                    at_start.then(|| format!("^{cluster}")),
                    at_end.then(|| format!("{cluster}$")),
                    Some(cluster.to_string()),
                ];
                if let Some(seq) = candidates.iter().flatten().find_map(|key| self.rules.get(key)) {
                    out.extend_from_slice(seq);
                    i += len;
                    matched = true;
                    break;
                }
            }
            if !matched {
                // no rule for this letter
                i += 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PronunciationSource {
    LexiconLookup,
    RuleFallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeSequence {
    pub word: String,
    pub phonemes: Vec<Phoneme>,
    /// `RuleFallback` if any token of the word needed the rule table.
    pub source: PronunciationSource,
}

impl PhonemeSequence {
    pub fn first(&self) -> Phoneme {
        self.phonemes[0]
    }

    pub fn last(&self) -> Phoneme {
        self.phonemes[self.phonemes.len() - 1]
    }
}

/// Converts a headword to phonemes. Multiword headwords are split on any
/// character that is neither alphanumeric nor an apostrophe, converted token
/// by token and concatenated.
pub fn to_phonemes(word: &str, table: &PronouncingTable, rules: &RuleTable) -> Result<PhonemeSequence> {
    let mut phonemes = Vec::new();
    let mut source = PronunciationSource::LexiconLookup;
    for token in word
        .split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '’'))
        .filter(|t| !t.is_empty())
    {
        let token = token.replace('’', "'");
        if let Some(seq) = table.get(&token) {
            phonemes.extend_from_slice(seq);
            continue;
        }
        let letters: String = token.to_lowercase().chars().filter(char::is_ascii_lowercase).collect();
        if letters.is_empty() {
            continue;
        }
        let seq = rules.apply(&letters);
        if !seq.is_empty() {
            source = PronunciationSource::RuleFallback;
            phonemes.extend(seq);
        }
    }
    if phonemes.is_empty() {
        return Err(Error::NotConvertible(word.to_string()));
    }
    Ok(PhonemeSequence {
        word: word.to_string(),
        phonemes,
        source,
    })
}

/// Bundles the two tables used by [`to_phonemes`].
#[derive(Debug, Clone)]
pub struct Phonemizer {
    pub table: PronouncingTable,
    pub rules: RuleTable,
}

impl Phonemizer {
    pub fn bundled() -> Self {
        Self {
            table: PronouncingTable::bundled(),
            rules: RuleTable::bundled(),
        }
    }

    pub fn convert(&self, word: &str) -> Result<PhonemeSequence> {
        to_phonemes(word, &self.table, &self.rules)
    }

    /// Converts every word that can be converted; returns the sequences and
    /// the words that had nothing to pronounce.
    pub fn convert_all<'a, I>(&self, words: I) -> (Vec<PhonemeSequence>, Vec<String>)
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut ok = Vec::new();
        let mut failed = Vec::new();
        for w in words {
            match self.convert(w) {
                Ok(seq) => ok.push(seq),
                Err(_) => failed.push(w.to_string()),
            }
        }
        (ok, failed)
    }
}

/// Relative frequency of each phoneme over all phoneme tokens of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeDistribution {
    pub counts: BTreeMap<Phoneme, u64>,
    pub total: u64,
}

impl PhonemeDistribution {
    pub fn probability(&self, ph: Phoneme) -> f64 {
        self.counts.get(&ph).map_or(0.0, |&c| c as f64 / self.total as f64)
    }

    pub fn probabilities(&self) -> BTreeMap<Phoneme, f64> {
        self.counts.keys().map(|&ph| (ph, self.probability(ph))).collect()
    }
}

/// Each sequence in `corpus` contributes all of its phonemes once; callers
/// pass one sequence per headword type.
pub fn phoneme_distribution(corpus: &[PhonemeSequence]) -> Result<PhonemeDistribution> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("phoneme distribution of an empty corpus"));
    }
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for seq in corpus {
        for &ph in &seq.phonemes {
            *counts.entry(ph).or_insert(0) += 1;
            total += 1;
        }
    }
    Ok(PhonemeDistribution { counts, total })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OddsRatioRow {
    pub phoneme: Phoneme,
    pub p_slang: f64,
    pub p_std: f64,
    pub ratio: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OddsRatioReport {
    /// Sorted by rank (descending ratio, ties alphabetical).
    pub rows: Vec<OddsRatioRow>,
    pub smoothing: f64,
}

impl OddsRatioReport {
    pub fn top(&self, k: usize) -> &[OddsRatioRow] {
        &self.rows[..k.min(self.rows.len())]
    }
}

/// Ranks every phoneme seen in either distribution by
/// `(p_slang + s) / (p_std + s)`.
pub fn odds_ratio_ranking(
    p_slang: &BTreeMap<Phoneme, f64>,
    p_std: &BTreeMap<Phoneme, f64>,
    smoothing: f64,
) -> Result<OddsRatioReport> {
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "smoothing must be positive, got {smoothing}"
        )));
    }
    let mut phonemes: Vec<Phoneme> = p_slang.keys().chain(p_std.keys()).copied().collect();
    phonemes.sort();
    phonemes.dedup();
    let mut rows: Vec<OddsRatioRow> = phonemes
        .into_iter()
        .map(|ph| {
            let a = p_slang.get(&ph).copied().unwrap_or(0.0);
            let b = p_std.get(&ph).copied().unwrap_or(0.0);
            OddsRatioRow {
                phoneme: ph,
                p_slang: a,
                p_std: b,
                ratio: (a + smoothing) / (b + smoothing),
                rank: 0,
            }
        })
        .collect();
    rows.sort_by(|x, y| {
        y.ratio
            .total_cmp(&x.ratio)
            .then_with(|| x.phoneme.symbol().cmp(y.phoneme.symbol()))
    });
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(OddsRatioReport { rows, smoothing })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Position {
    First,
    Final,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::First => "first",
            Position::Final => "final",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MannerDistribution {
    /// All eight manners, zero counts included.
    pub counts: BTreeMap<Manner, u64>,
    pub sample_size: u64,
}

impl MannerDistribution {
    pub fn probability(&self, m: Manner) -> f64 {
        self.counts[&m] as f64 / self.sample_size as f64
    }

    pub fn probabilities(&self) -> BTreeMap<Manner, f64> {
        Manner::ALL.iter().map(|&m| (m, self.probability(m))).collect()
    }
}

/// Manner of the first (or final) phoneme of each word, normalized.
pub fn positional_manner_distribution(corpus: &[PhonemeSequence], position: Position) -> Result<MannerDistribution> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("manner distribution of an empty corpus"));
    }
    let mut counts: BTreeMap<Manner, u64> = Manner::ALL.iter().map(|&m| (m, 0)).collect();
    for seq in corpus {
        let ph = match position {
            Position::First => seq.first(),
            Position::Final => seq.last(),
        };
        *counts.get_mut(&ph.manner()).unwrap() += 1;
    }
    Ok(MannerDistribution {
        counts,
        sample_size: corpus.len() as u64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MannerComparison {
    pub manner: Manner,
    pub p_slang: f64,
    pub p_std: f64,
    /// `None` when the manner never occurs in either corpus.
    pub test: Option<ProportionTestResult>,
}

/// Per-manner two-proportion z-tests, Bonferroni-corrected over the eight
/// manners.
pub fn compare_manners(
    slang: &MannerDistribution,
    std: &MannerDistribution,
    alpha: f64,
) -> Result<Vec<MannerComparison>> {
    Manner::ALL
        .iter()
        .map(|&m| {
            let (x1, x2) = (slang.counts[&m], std.counts[&m]);
            let test = match two_proportion_ztest(
                x1,
                slang.sample_size,
                x2,
                std.sample_size,
                alpha,
                Manner::ALL.len() as u32,
            ) {
                Ok(t) => Some(t),
                Err(Error::Undefined(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(MannerComparison {
                manner: m,
                p_slang: slang.probability(m),
                p_std: std.probability(m),
                test,
            })
        })
        .collect()
}

/// Everything the phonology report needs for one slang/standard contrast.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonologyProfile {
    pub odds: OddsRatioReport,
    pub manners: Vec<(Position, Vec<MannerComparison>)>,
    pub slang_types: usize,
    pub standard_types: usize,
    /// Converted words that needed the rule table, per side.
    pub slang_fallback: usize,
    pub standard_fallback: usize,
    /// Words with nothing to convert, from either side.
    pub failed: Vec<String>,
}

fn convert_types<'a, I>(words: I, phonemizer: &Phonemizer) -> (Vec<PhonemeSequence>, Vec<String>)
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = std::collections::BTreeSet::new();
    let unique: Vec<&str> = words
        .into_iter()
        .filter(|w| seen.insert(w.trim().to_lowercase()))
        .collect();
    phonemizer.convert_all(unique)
}

/// Converts each side once per word type (case-folded), then ranks phoneme
/// odds ratios and compares first/final manners.
pub fn profile<'a, 'b, S, T>(
    slang: S,
    standard: T,
    phonemizer: &Phonemizer,
    smoothing: f64,
    alpha: f64,
) -> Result<PhonologyProfile>
where
    S: IntoIterator<Item = &'a str>,
    T: IntoIterator<Item = &'b str>,
{
    let (s, mut failed) = convert_types(slang, phonemizer);
    let (t, failed_std) = convert_types(standard, phonemizer);
    failed.extend(failed_std);
    let odds = odds_ratio_ranking(
        &phoneme_distribution(&s)?.probabilities(),
        &phoneme_distribution(&t)?.probabilities(),
        smoothing,
    )?;
    let mut manners = Vec::new();
    for pos in [Position::First, Position::Final] {
        let a = positional_manner_distribution(&s, pos)?;
        let b = positional_manner_distribution(&t, pos)?;
        manners.push((pos, compare_manners(&a, &b, alpha)?));
    }
    let fallback = |xs: &[PhonemeSequence]| {
        xs.iter()
            .filter(|x| x.source == PronunciationSource::RuleFallback)
            .count()
    };
    Ok(PhonologyProfile {
        odds,
        manners,
        slang_types: s.len(),
        standard_types: t.len(),
        slang_fallback: fallback(&s),
        standard_fallback: fallback(&t),
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(word: &str, phones: &str) -> PhonemeSequence {
        PhonemeSequence {
            word: word.into(),
            phonemes: parse_sequence(phones).unwrap(),
            source: PronunciationSource::LexiconLookup,
        }
    }

    fn symbols(s: &PhonemeSequence) -> String {
        s.phonemes.iter().map(|p| p.symbol()).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn table_one_manners() {
        assert_eq!(manner_of("B").unwrap(), Manner::Stop);
        assert_eq!(manner_of("ZH").unwrap(), Manner::Fricative);
        assert_eq!(manner_of("W").unwrap(), Manner::Semivowel);
        assert_eq!(manner_of("AH0").unwrap(), Manner::Vowel);
        assert_eq!(manner_of("HH").unwrap(), Manner::Aspirate);
        assert!(matches!(manner_of("QX"), Err(Error::UnknownSymbol(_))));
        let per_manner = |m| Phoneme::all().filter(|p| p.manner() == m).count();
        let sizes: Vec<_> = Manner::ALL.iter().map(|&m| per_manner(m)).collect();
        assert_eq!(sizes, [6, 8, 15, 3, 2, 2, 1, 2]);
    }

    #[test]
    fn inventory_sorted() {
        assert!(INVENTORY.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn woody_lookup() {
        let g = Phonemizer::bundled();
        let s = g.convert("woody").unwrap();
        assert_eq!(symbols(&s), "W UH D IY");
        assert_eq!(s.source, PronunciationSource::LexiconLookup);
    }

    #[test]
    fn zorp_fallback_by_hand() {
        // z -> Z, "or" -> AO R, p -> P
        let s = Phonemizer::bundled().convert("zorp").unwrap();
        assert_eq!(symbols(&s), "Z AO R P");
        assert_eq!(s.source, PronunciationSource::RuleFallback);
    }

    #[test]
    fn rule_anchors() {
        let rules = RuleTable::parse("e$\t-\n^e$\tIY\ne\tEH\nk\tK\n^y\tY\ny\tIH\n".as_bytes()).unwrap();
        let f = |w: &str| rules.apply(w).iter().map(|p| p.symbol()).collect::<Vec<_>>().join(" ");
        assert_eq!(f("eke"), "EH K");
        assert_eq!(f("e"), "IY");
        assert_eq!(f("yky"), "Y K IH");
    }

    #[test]
    fn nothing_to_convert() {
        let g = Phonemizer::bundled();
        assert!(matches!(g.convert(""), Err(Error::NotConvertible(_))));
        assert!(matches!(g.convert("4 20"), Err(Error::NotConvertible(_))));
    }

    #[test]
    fn multiword_concatenates() {
        let g = Phonemizer::bundled();
        let a = g.convert("slow").unwrap();
        let b = g.convert("motion").unwrap();
        let ab = g.convert("slow motion").unwrap();
        assert_eq!(ab.phonemes, [a.phonemes, b.phonemes].concat());
    }

    #[test]
    fn table_parsing_variants() {
        let text = ";;; comment\nWOODY  W UH1 D IY0\nWOODY(1)  W UH1 D IY2 Z\nfoo F UW1 # note\n";
        let t = PronouncingTable::parse(text.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("Woody").unwrap().len(), 4);
        assert!(PronouncingTable::parse("X  QQ\n".as_bytes()).is_err());
    }

    #[test]
    fn distributions() {
        let d = phoneme_distribution(&[seq("woody", "W UH D IY")]).unwrap();
        for s in ["W", "UH", "D", "IY"] {
            assert_eq!(d.probability(Phoneme::parse(s).unwrap()), 0.25);
        }
        let d = phoneme_distribution(&[seq("boo", "B UW"), seq("boo", "B UW")]).unwrap();
        assert_eq!(d.probability(Phoneme::parse("B").unwrap()), 0.5);
        // hand tally: zap = Z AE P, pizza = P IY T S AH -> 8 tokens, P twice
        let d = phoneme_distribution(&[seq("zap", "Z AE P"), seq("pizza", "P IY T S AH")]).unwrap();
        assert_eq!(d.total, 8);
        assert_eq!(d.probability(Phoneme::parse("P").unwrap()), 2.0 / 8.0);
        assert_eq!(d.probability(Phoneme::parse("Z").unwrap()), 1.0 / 8.0);
        assert!(phoneme_distribution(&[]).is_err());
    }

    #[test]
    fn odds_ratio_hand_arithmetic() {
        let w = Phoneme::parse("W").unwrap();
        let d = Phoneme::parse("D").unwrap();
        let slang = BTreeMap::from([(w, 0.5), (d, 0.5)]);
        let std = BTreeMap::from([(w, 0.25), (d, 0.75)]);
        let r = odds_ratio_ranking(&slang, &std, 1e-6).unwrap();
        assert_eq!(r.rows[0].phoneme, w);
        assert_eq!(r.rows[0].rank, 1);
        assert!((r.rows[0].ratio - 2.0).abs() < 1e-5);
        assert!((r.rows[1].ratio - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn odds_ratio_absent_phoneme_is_finite() {
        let z = Phoneme::parse("Z").unwrap();
        let slang = BTreeMap::from([(z, 0.1)]);
        let r = odds_ratio_ranking(&slang, &BTreeMap::new(), 1e-6).unwrap();
        assert!(r.rows[0].ratio.is_finite());
        assert!((r.rows[0].ratio - (0.1 + 1e-6) / 1e-6).abs() < 1e-3);
    }

    #[test]
    fn positional() {
        let c = [seq("woody", "W UH D IY")];
        let first = positional_manner_distribution(&c, Position::First).unwrap();
        assert_eq!(first.probability(Manner::Semivowel), 1.0);
        let last = positional_manner_distribution(&c, Position::Final).unwrap();
        assert_eq!(last.probability(Manner::Vowel), 1.0);
        assert!(positional_manner_distribution(&[], Position::First).is_err());
    }

    #[test]
    fn manner_comparison_skips_absent() {
        let a = positional_manner_distribution(&[seq("a", "S AH"), seq("b", "AH S")], Position::First).unwrap();
        let b = positional_manner_distribution(&[seq("c", "AH"), seq("d", "AH")], Position::First).unwrap();
        let cmp = compare_manners(&a, &b, 0.05).unwrap();
        let nasal = cmp.iter().find(|c| c.manner == Manner::Nasal).unwrap();
        assert!(nasal.test.is_none());
        let fric = cmp.iter().find(|c| c.manner == Manner::Fricative).unwrap();
        assert!((fric.test.unwrap().adjusted_alpha - 0.05 / 8.0).abs() < 1e-15);
    }

    fn arb_dist() -> impl Strategy<Value = BTreeMap<Phoneme, f64>> {
        proptest::collection::btree_map((0u8..39).prop_map(Phoneme), 0.0f64..1.0, 1..39)
    }

    proptest! {
        #[test]
        fn self_odds_are_one(p in arb_dist()) {
            let r = odds_ratio_ranking(&p, &p, 1e-6).unwrap();
            prop_assert!(r.rows.iter().all(|row| (row.ratio - 1.0).abs() < 1e-12));
            let ranks: Vec<_> = r.rows.iter().map(|row| row.rank).collect();
            prop_assert_eq!(ranks, (1..=r.rows.len()).collect::<Vec<_>>());
        }

        #[test]
        fn fallback_is_deterministic_and_total(word in "[a-z]{1,12}") {
            let g = Phonemizer::bundled();
            let a = g.convert(&word);
            let b = g.convert(&word);
            prop_assert_eq!(a.is_ok(), b.is_ok());
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert_eq!(&a.phonemes, &b.phonemes);
                for ph in &a.phonemes {
                    prop_assert!(manner_of(ph.symbol()).is_ok());
                }
            }
        }

        #[test]
        fn positional_sums_to_one_and_order_free(
            words in proptest::collection::vec(proptest::collection::vec(0u8..39, 1..6), 1..20)
        ) {
            let corpus: Vec<_> = words.iter().map(|w| PhonemeSequence {
                word: String::new(),
                phonemes: w.iter().map(|&i| Phoneme(i)).collect(),
                source: PronunciationSource::LexiconLookup,
            }).collect();
            let mut rev = corpus.clone();
            rev.reverse();
            for pos in [Position::First, Position::Final] {
                let a = positional_manner_distribution(&corpus, pos).unwrap();
                let b = positional_manner_distribution(&rev, pos).unwrap();
                let total: f64 = a.probabilities().values().sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                prop_assert_eq!(a, b);
            }
        }
    }
}
