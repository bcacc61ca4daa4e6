//! Unsupervised morph segmentation by minimum description length, and
//! prefix/suffix distributions over the resulting segmentations.
//!
//! The segmenter follows the baseline recursive-splitting scheme: every word
//! type starts as a single morph, and each training pass revisits the words in
//! a seeded random order, re-deciding for each one whether keeping it whole or
//! splitting it in two (recursively) gives the shortest total code.
//!
//! Total code length, in bits, for morph counts `c_m` with `N = Σ c_m`:
//!
//! ```text
//! model  = Σ_m [ (len(m) + 1) · log2(A + 1) + gamma(c_m) ]
//! corpus = N·log2 N − Σ_m c_m·log2 c_m
//! total  = model + corpus + split_penalty · (N − word_tokens)
//! ```
//!
//! where `A` is the training alphabet size (the `+1` is the end-of-morph
//! symbol) and `gamma(c) = 2⌊log2 c⌋ + 1` is the Elias gamma code length.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const COST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmenterParams {
    /// Extra bits charged per morph boundary. 0 is pure MDL.
    pub split_penalty: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Always put a boundary on both sides of every `-`, which then stands as
    /// its own morph. On by default, as in the common baseline tool.
    pub split_hyphens: bool,
}

impl Default for SegmenterParams {
    fn default() -> Self {
        Self {
            split_penalty: 0.0,
            max_iters: 10,
            seed: 0,
            split_hyphens: true,
        }
    }
}

/// Splits around hyphens when asked: `"a-b"` gives `["a", "-", "b"]`.
fn forced_pieces(word: &str, split_hyphens: bool) -> Vec<&str> {
    if !split_hyphens {
        return vec![word];
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in word.char_indices() {
        if c == '-' {
            if start < i {
                out.push(&word[start..i]);
            }
            out.push(&word[i..i + 1]);
            start = i + 1;
        }
    }
    if start < word.len() {
        out.push(&word[start..]);
    }
    out
}

/// Lowercases one character when that keeps it a single character, so
/// normalized words keep their character count.
fn fold_char(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

pub fn normalize(word: &str) -> String {
    word.chars().map(fold_char).collect()
}

fn gamma_bits(count: u64) -> f64 {
    debug_assert!(count >= 1);
    (2 * (63 - count.leading_zeros()) + 1) as f64
}

fn xlog2x(x: u64) -> f64 {
    if x == 0 {
        0.0
    } else {
        let x = x as f64;
        x * x.log2()
    }
}

/// Recomputes the total code length from scratch.
pub fn code_length(
    morph_counts: &BTreeMap<String, u64>,
    alphabet_size: usize,
    word_tokens: u64,
    split_penalty: f64,
) -> f64 {
    let char_bits = ((alphabet_size + 1) as f64).log2();
    let mut model = 0.0;
    let mut n = 0;
    let mut sum_clogc = 0.0;
    for (m, &c) in morph_counts {
        model += (m.chars().count() + 1) as f64 * char_bits + gamma_bits(c);
        n += c;
        sum_clogc += xlog2x(c);
    }
    model + (xlog2x(n) - sum_clogc) + split_penalty * (n.saturating_sub(word_tokens)) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmenterModel {
    pub morph_counts: BTreeMap<String, u64>,
    /// Code length maintained incrementally during training.
    pub total_code_length: f64,
    pub alphabet_size: usize,
    pub word_tokens: u64,
    pub split_penalty: f64,
    #[serde(default)]
    pub split_hyphens: bool,
    /// Total cost after initialization and after each training pass.
    pub cost_history: Vec<f64>,
}

impl SegmenterModel {
    pub fn recompute_code_length(&self) -> f64 {
        code_length(
            &self.morph_counts,
            self.alphabet_size,
            self.word_tokens,
            self.split_penalty,
        )
    }

    pub fn morph_tokens(&self) -> u64 {
        self.morph_counts.values().sum()
    }

    fn char_bits(&self) -> f64 {
        ((self.alphabet_size + 1) as f64).log2()
    }

    /// Cost of emitting `morph` once under the trained unigram model; unseen
    /// morphs are charged as if spelled out and added with count 1.
    fn morph_cost(&self, morph: &str, n_chars: usize) -> f64 {
        let n = self.morph_tokens().max(1) as f64;
        match self.morph_counts.get(morph) {
            Some(&c) => (n / c as f64).log2(),
            None => (n_chars + 1) as f64 * self.char_bits() + 1.0 + (n + 1.0).log2(),
        }
    }

    /// TSV: `# key=value` header lines, then `morph<TAB>count`.
    pub fn write_tsv(&self, mut out: impl Write) -> Result<()> {
        let mut text = format!(
            "# alphabet_size={}\n# word_tokens={}\n# split_penalty={}\n# split_hyphens={}\n",
            self.alphabet_size, self.word_tokens, self.split_penalty, self.split_hyphens
        );
        for (m, c) in &self.morph_counts {
            text.push_str(&format!("{m}\t{c}\n"));
        }
        out.write_all(text.as_bytes()).map_err(|e| Error::io("<writer>", e))
    }

    pub fn read_tsv(reader: impl BufRead) -> Result<Self> {
        let mut morph_counts = BTreeMap::new();
        let (mut alphabet_size, mut word_tokens, mut split_penalty) = (None, None, 0.0);
        let mut split_hyphens = false;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io("<reader>", e))?;
            if let Some(header) = line.strip_prefix("# ") {
                let bad = |f: &str| Error::schema(line_no, f, "invalid value");
                match header.split_once('=') {
                    Some(("alphabet_size", v)) => alphabet_size = Some(v.parse().map_err(|_| bad("alphabet_size"))?),
                    Some(("word_tokens", v)) => word_tokens = Some(v.parse().map_err(|_| bad("word_tokens"))?),
                    Some(("split_penalty", v)) => split_penalty = v.parse().map_err(|_| bad("split_penalty"))?,
                    Some(("split_hyphens", v)) => split_hyphens = v.parse().map_err(|_| bad("split_hyphens"))?,
                    _ => {}
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (m, c) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::schema(line_no, "morph", "expected `morph<TAB>count`"))?;
            let c: u64 = c
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| Error::schema(line_no, "count", "must be a positive integer"))?;
            morph_counts.insert(m.to_string(), c);
        }
        let alphabet_size = alphabet_size.ok_or_else(|| Error::schema(0, "alphabet_size", "missing header"))?;
        let word_tokens = word_tokens.ok_or_else(|| Error::schema(0, "word_tokens", "missing header"))?;
        let total = code_length(&morph_counts, alphabet_size, word_tokens, split_penalty);
        Ok(Self {
            morph_counts,
            total_code_length: total,
            alphabet_size,
            word_tokens,
            split_penalty,
            split_hyphens,
            cost_history: vec![total],
        })
    }
}

/// Incrementally maintained code length.
struct CostState {
    counts: HashMap<String, u64>,
    char_bits: f64,
    n: u64,
    sum_clogc: f64,
    model_bits: f64,
    word_tokens: u64,
    split_penalty: f64,
}

impl CostState {
    fn cost(&self) -> f64 {
        self.model_bits + (xlog2x(self.n) - self.sum_clogc) + self.split_penalty * (self.n - self.word_tokens) as f64
    }

    fn add(&mut self, morph: &str, f: u64) {
        let c = self.counts.get(morph).copied().unwrap_or(0);
        if c == 0 {
            self.model_bits += (morph.chars().count() + 1) as f64 * self.char_bits;
        } else {
            self.sum_clogc -= xlog2x(c);
            self.model_bits -= gamma_bits(c);
        }
        let c2 = c + f;
        self.sum_clogc += xlog2x(c2);
        self.model_bits += gamma_bits(c2);
        self.n += f;
        self.counts.insert(morph.to_string(), c2);
    }

    fn remove(&mut self, morph: &str, f: u64) {
        let c = self.counts[morph];
        debug_assert!(c >= f);
        self.sum_clogc -= xlog2x(c);
        self.model_bits -= gamma_bits(c);
        let c2 = c - f;
        if c2 == 0 {
            self.model_bits -= (morph.chars().count() + 1) as f64 * self.char_bits;
            self.counts.remove(morph);
        } else {
            self.sum_clogc += xlog2x(c2);
            self.model_bits += gamma_bits(c2);
            self.counts.insert(morph.to_string(), c2);
        }
        self.n -= f;
    }

    /// Decides whether `seg` (already absent from the counts) is kept whole
    /// or split in two, recursing into the halves. Returns the chosen morphs
    /// in order, with their counts added.
    fn resplit(&mut self, seg: &str, f: u64) -> Vec<String> {
        let boundaries: Vec<usize> = seg.char_indices().map(|(i, _)| i).skip(1).collect();
        self.add(seg, f);
        let mut best_cost = self.cost();
        self.remove(seg, f);
        let mut best_split = None;
        for &b in &boundaries {
            let (l, r) = seg.split_at(b);
            self.add(l, f);
            self.add(r, f);
            let c = self.cost();
            self.remove(r, f);
            self.remove(l, f);
            if c < best_cost - COST_EPS {
                best_cost = c;
                best_split = Some(b);
            }
        }
        match best_split {
            None => {
                self.add(seg, f);
                vec![seg.to_string()]
            }
            Some(b) => {
                let (l, r) = seg.split_at(b);
                let mut out = self.resplit(l, f);
                out.extend(self.resplit(r, f));
                out
            }
        }
    }
}

/// Trains a segmenter on a word list; repeated words count as frequency.
/// With `split_hyphens`, the hyphen-separated pieces are the training units.
pub fn train_segmenter(words: &[String], params: SegmenterParams) -> Result<SegmenterModel> {
    if words.is_empty() {
        return Err(Error::EmptyInput("segmenter training needs at least one word"));
    }
    if !(params.split_penalty >= 0.0 && params.split_penalty.is_finite()) {
        return Err(Error::InvalidInput(
            "split penalty must be a non-negative number".into(),
        ));
    }
    let mut freq: BTreeMap<String, u64> = BTreeMap::new();
    for w in words {
        let w = normalize(w);
        if w.is_empty() {
            return Err(Error::InvalidInput("empty word in training list".into()));
        }
        for piece in forced_pieces(&w, params.split_hyphens) {
            *freq.entry(piece.to_string()).or_insert(0) += 1;
        }
    }
    let mut alphabet: Vec<char> = freq.keys().flat_map(|w| w.chars()).collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    let word_tokens: u64 = freq.values().sum();

    let mut state = CostState {
        counts: HashMap::new(),
        char_bits: ((alphabet.len() + 1) as f64).log2(),
        n: 0,
        sum_clogc: 0.0,
        model_bits: 0.0,
        word_tokens,
        split_penalty: params.split_penalty,
    };
    let mut analyses: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (w, &f) in &freq {
        state.add(w, f);
        analyses.insert(w.clone(), vec![w.clone()]);
    }

    let mut history = vec![state.cost()];
    let mut order: Vec<String> = freq.keys().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.max_iters {
        order.shuffle(&mut rng);
        let mut changed = false;
        for w in &order {
            let f = freq[w];
            let before = state.cost();
            let old = analyses[w].clone();
            for m in &old {
                state.remove(m, f);
            }
            let new = state.resplit(w, f);
            if state.cost() > before + COST_EPS {
                for m in &new {
                    state.remove(m, f);
                }
                for m in &old {
                    state.add(m, f);
                }
            } else if new != old {
                changed = true;
                analyses.insert(w.clone(), new);
            }
        }
        history.push(state.cost());
        if !changed {
            break;
        }
    }

    let total_code_length = state.cost();
    Ok(SegmenterModel {
        morph_counts: state.counts.into_iter().collect(),
        total_code_length,
        alphabet_size: alphabet.len(),
        word_tokens,
        split_penalty: params.split_penalty,
        split_hyphens: params.split_hyphens,
        cost_history: history,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    pub word: String,
    pub morphs: Vec<String>,
}

/// Best segmentation of `word` by dynamic programming over split points.
///
/// Morphs are slices of the original word; the model is consulted on the
/// lowercased form. Among equal-cost segmentations the one with fewest morphs
/// wins, then the one whose first morph is longest.
pub fn segment(model: &SegmenterModel, word: &str) -> Segmentation {
    let morphs = forced_pieces(word, model.split_hyphens)
        .into_iter()
        .flat_map(|piece| segment_piece(model, piece))
        .collect();
    Segmentation {
        word: word.to_string(),
        morphs,
    }
}

fn segment_piece(model: &SegmenterModel, word: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = word.char_indices().collect();
    let n = chars.len();
    if n <= 1 {
        return vec![word.to_string()];
    }
    let offset = |i: usize| if i == n { word.len() } else { chars[i].0 };
    let folded = normalize(word);
    let folded_chars: Vec<usize> = folded
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(folded.len()))
        .collect();

    // best[i] = (cost, morph count, end of first morph) for the suffix at i
    let mut best: Vec<(f64, usize, usize)> = vec![(0.0, 0, n); n + 1];
    for i in (0..n).rev() {
        let mut cur: Option<(f64, usize, usize)> = None;
        for j in (i + 1..=n).rev() {
            let morph = &folded[folded_chars[i]..folded_chars[j]];
            let extra = if j < n { model.split_penalty } else { 0.0 };
            let cost = model.morph_cost(morph, j - i) + extra + best[j].0;
            let count = 1 + best[j].1;
            let better = match cur {
                None => true,
                Some((c, k, _)) => cost < c - COST_EPS || ((cost - c).abs() <= COST_EPS && count < k),
            };
            if better {
                cur = Some((cost, count, j));
            }
        }
        best[i] = cur.expect("at least one candidate");
    }

    let mut morphs = Vec::new();
    let mut i = 0;
    while i < n {
        let j = best[i].2;
        morphs.push(word[offset(i)..offset(j)].to_string());
        i = j;
    }
    morphs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffixSide {
    Prefix,
    Suffix,
}

impl fmt::Display for AffixSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AffixSide::Prefix => "prefix",
            AffixSide::Suffix => "suffix",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffixDistribution {
    pub side: AffixSide,
    /// Top-k affixes, descending probability, ties lexicographic.
    pub entries: Vec<(String, f64)>,
    /// Cumulative probability of the top `k` affixes, for `k = 1..=entries.len()`.
    pub covered_mass_at_k: BTreeMap<usize, f64>,
    pub sample_size: usize,
}

/// Ranks affix strings by relative frequency and keeps the top `k`.
pub fn rank_affixes<I, S>(affixes: I, side: AffixSide, k: usize) -> Result<AffixDistribution>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0;
    for a in affixes {
        *counts.entry(a.into()).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptyInput("affix distribution of an empty list"));
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    let entries: Vec<(String, f64)> = ranked.into_iter().map(|(a, c)| (a, c as f64 / total as f64)).collect();
    let mut covered_mass_at_k = BTreeMap::new();
    let mut acc = 0.0;
    for (i, (_, p)) in entries.iter().enumerate() {
        acc += p;
        covered_mass_at_k.insert(i + 1, acc);
    }
    Ok(AffixDistribution {
        side,
        entries,
        covered_mass_at_k,
        sample_size: total,
    })
}

/// Prefix = first morph, suffix = last morph of each segmentation.
pub fn affix_distribution(segmentations: &[Segmentation], side: AffixSide, k: usize) -> Result<AffixDistribution> {
    let affixes = segmentations.iter().map(|s| {
        let m = match side {
            AffixSide::Prefix => s.morphs.first(),
            AffixSide::Suffix => s.morphs.last(),
        };
        normalize(m.map(String::as_str).unwrap_or(""))
    });
    rank_affixes(affixes, side, k)
}
