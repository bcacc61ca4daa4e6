//! Skip-gram with negative sampling over usage examples, plus cosine
//! similarity utilities and text vector-file I/O.
//!
//! Training is single-threaded and fully determined by the corpus, the config
//! and the seed. The published vectors are the input (center-word) vectors.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::LexiconEntry;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub dimension: usize,
    /// Maximum context distance; each center word draws its effective window
    /// uniformly from `1..=window`.
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub min_count: u64,
    /// Frequent-word downsampling threshold; 0 disables it.
    pub subsample: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            dimension: 100,
            window: 5,
            negatives: 5,
            epochs: 5,
            initial_lr: 0.025,
            min_count: 5,
            subsample: 1e-3,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("{what} must be at least 1")));
        if self.dimension == 0 {
            return bad("dimension");
        }
        if self.window == 0 {
            return bad("window");
        }
        if self.negatives == 0 {
            return bad("negatives");
        }
        if self.epochs == 0 {
            return bad("epochs");
        }
        if !(self.initial_lr.is_finite() && self.initial_lr > 0.0) {
            return Err(Error::InvalidInput(format!(
                "initial_lr must be positive, got {}",
                self.initial_lr
            )));
        }
        if !(self.subsample.is_finite() && self.subsample >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "subsample must be non-negative, got {}",
                self.subsample
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub dimension: usize,
    pub tokens: Vec<String>,
    /// Training-corpus counts; 0 for tables read from a vector file.
    pub counts: Vec<u64>,
    pub vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl EmbeddingTable {
    /// Builds a table from `(token, vector)` pairs with unknown counts.
    pub fn from_vectors(rows: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let n = rows.len();
        let (tokens, vectors): (Vec<String>, Vec<Vec<f64>>) = rows.into_iter().unzip();
        Self::new(tokens, vec![0; n], vectors)
    }

    pub fn new(tokens: Vec<String>, counts: Vec<u64>, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyInput("embedding table has no tokens"));
        }
        if counts.len() != tokens.len() || vectors.len() != tokens.len() {
            return Err(Error::DimensionMismatch {
                expected: tokens.len(),
                found: vectors.len().min(counts.len()),
            });
        }
        let dimension = vectors[0].len();
        if dimension == 0 {
            return Err(Error::InvalidInput("embedding dimension must be at least 1".into()));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, (t, v)) in tokens.iter().zip(&vectors).enumerate() {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: v.len(),
                });
            }
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidInput(format!("vector for `{t}` is not finite")));
            }
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("invalid token `{t}`")));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate token `{t}`")));
            }
        }
        Ok(Self {
            dimension,
            tokens,
            counts,
            vectors,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.vectors[i].as_slice())
    }

    pub fn vector(&self, token: &str) -> Result<&[f64]> {
        self.get(token).ok_or_else(|| Error::OutOfVocabulary(token.to_string()))
    }

    /// Writes `<vocab> <dim>` then one `token v1 ... vd` line per token.
    /// Values use the shortest representation that reads back exactly.
    pub fn write_text(&self, mut out: impl Write) -> Result<()> {
        let io = |e| Error::io("<embeddings>", e);
        writeln!(out, "{} {}", self.len(), self.dimension).map_err(io)?;
        for (t, v) in self.tokens.iter().zip(&self.vectors) {
            write!(out, "{t}").map_err(io)?;
            for x in v {
                write!(out, " {x}").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
        }
        Ok(())
    }

    pub fn save_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_text(std::io::BufWriter::new(f))
    }

    pub fn read_text(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::EmptyInput("empty vector file"))?;
        let header = header.map_err(|e| Error::io("<embeddings>", e))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::schema(1, "header", "expected `<vocab> <dim>`"))?;
        let [n, d] = dims[..] else {
            return Err(Error::schema(1, "header", "expected `<vocab> <dim>`"));
        };
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines {
            let line = line.map_err(|e| Error::io("<embeddings>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let token = parts.next().expect("non-blank line").to_string();
            let v: Vec<f64> = parts
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::schema(i + 1, "vector", "non-numeric component"))?;
            if v.len() != d {
                return Err(Error::schema(
                    i + 1,
                    "vector",
                    format!("expected {d} components, found {}", v.len()),
                ));
            }
            rows.push((token, v));
        }
        if rows.len() != n {
            return Err(Error::schema(
                1,
                "header",
                format!("declares {n} tokens, file has {}", rows.len()),
            ));
        }
        Self::from_vectors(rows)
    }

    pub fn load_text(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_text(std::io::BufReader::new(f))
    }
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::InvalidInput("cosine of a zero vector".into()));
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

/// Top-`k` tokens by cosine to `token`, excluding the token itself and any
/// zero vectors. Ties are broken by token.
pub fn nearest(table: &EmbeddingTable, token: &str, k: usize) -> Result<Vec<(String, f64)>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let q = table.vector(token)?;
    let mut scored: Vec<(String, f64)> = table
        .tokens
        .iter()
        .zip(&table.vectors)
        .filter(|(t, _)| t.as_str() != token)
        .filter_map(|(t, v)| cosine(q, v).ok().map(|s| (t.clone(), s)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored)
}

/// Lowercased tokens: runs of alphanumerics, with apostrophes kept when they
/// sit between two alphanumerics.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text
        .chars()
        .map(|c| if c == '\u{2019}' || c == '\u{2018}' { '\'' } else { c })
        .collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let inner_apostrophe = c == '\'' && !cur.is_empty() && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() || inner_apostrophe {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// The single token a headword is known by in the usage corpus:
/// `"Med School"` becomes `med_school`.
pub fn headword_token(headword: &str) -> String {
    tokenize(headword).join("_")
}

/// Tokenized example sentences, one sequence per example. Multiword
/// headwords are matched greedily (longest first) and joined with `_`.
pub fn build_usage_corpus(entries: &[LexiconEntry]) -> Vec<Vec<String>> {
    let mut phrases: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for e in entries {
        let toks = tokenize(&e.headword);
        if toks.len() > 1 {
            let slot = phrases.entry(toks[0].clone()).or_default();
            if !slot.contains(&toks) {
                slot.push(toks);
            }
        }
    }
    for v in phrases.values_mut() {
        v.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    }
    let mut corpus = Vec::new();
    for e in entries {
        for ex in &e.examples {
            let toks = tokenize(ex);
            if toks.is_empty() {
                continue;
            }
            let mut sent = Vec::with_capacity(toks.len());
            let mut i = 0;
            while i < toks.len() {
                let hit = phrases
                    .get(&toks[i])
                    .and_then(|cands| cands.iter().find(|p| toks[i..].starts_with(p)));
                match hit {
                    Some(p) => {
                        sent.push(p.join("_"));
                        i += p.len();
                    }
                    None => {
                        sent.push(toks[i].clone());
                        i += 1;
                    }
                }
            }
            corpus.push(sent);
        }
    }
    corpus
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-ln σ(x)`, stable for large |x|.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Loss and gradients for one (center, context) pair with its negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub input: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// `L = -ln σ(c·v) - Σ_n ln σ(-n·v)` for input vector `v`, context output
/// vector `c` and negative output vectors `n`.
pub fn sgns_pair_loss(input: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let s = dot(context, input);
    let mut loss = neg_log_sigmoid(s);
    let gc = sigmoid(s) - 1.0;
    let mut g_in: Vec<f64> = context.iter().map(|c| gc * c).collect();
    let g_ctx = input.iter().map(|x| gc * x).collect();
    let mut g_neg = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = dot(n, input);
        loss += neg_log_sigmoid(-s);
        let gn = sigmoid(s);
        for (g, x) in g_in.iter_mut().zip(n.iter()) {
            *g += gn * x;
        }
        g_neg.push(input.iter().map(|x| gn * x).collect());
    }
    PairGradient {
        loss,
        input: g_in,
        context: g_ctx,
        negatives: g_neg,
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkipgramTrace {
    /// Mean per-pair loss in each epoch.
    pub epoch_losses: Vec<f64>,
    pub pairs_per_epoch: Vec<u64>,
}

/// Draws negatives from the unigram distribution raised to 0.75.
struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    fn new(counts: &[u64]) -> Self {
        let mut acc = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(0.75);
                acc
            })
            .collect();
        Self { cumulative }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let r = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= r)
            .min(self.cumulative.len() - 1)
    }
}

/// Vocabulary is every token with count ≥ `min_count`, ordered by count
/// (descending) then token.
pub fn train_skipgram(corpus: &[Vec<String>], config: &TrainingConfig) -> Result<(EmbeddingTable, SkipgramTrace)> {
    config.validate()?;
    let mut raw: HashMap<&str, u64> = HashMap::new();
    for s in corpus {
        for t in s {
            *raw.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let mut vocab: Vec<(&str, u64)> = raw.into_iter().filter(|&(_, c)| c >= config.min_count).collect();
    if vocab.is_empty() {
        return Err(Error::EmptyInput("no token meets min_count"));
    }
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let index: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, &(t, _))| (t, i)).collect();
    let counts: Vec<u64> = vocab.iter().map(|&(_, c)| c).collect();
    let total: u64 = counts.iter().sum();
    let sentences: Vec<Vec<usize>> = corpus
        .iter()
        .map(|s| s.iter().filter_map(|t| index.get(t.as_str()).copied()).collect())
        .collect();

    let keep_prob: Vec<f64> = counts
        .iter()
        .map(|&c| {
            if config.subsample == 0.0 {
                1.0
            } else {
                let t = config.subsample * total as f64;
                let c = c as f64;
                (((c / t).sqrt() + 1.0) * t / c).min(1.0)
            }
        })
        .collect();

    let d = config.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut input: Vec<Vec<f64>> = (0..vocab.len())
        .map(|_| (0..d).map(|_| (rng.gen::<f64>() - 0.5) / d as f64).collect())
        .collect();
    let mut output = vec![vec![0.0; d]; vocab.len()];
    let noise = NoiseTable::new(&counts);

    let planned = (config.epochs as u64 * total).max(1) as f64;
    let mut processed = 0u64;
    let mut trace = SkipgramTrace::default();
    let mut neg_idx = Vec::with_capacity(config.negatives);
    for epoch in 0..config.epochs {
        let (mut loss_sum, mut pairs) = (0.0, 0u64);
        for sent in &sentences {
            let kept: Vec<usize> = sent
                .iter()
                .copied()
                .filter(|&w| keep_prob[w] >= 1.0 || rng.gen::<f64>() < keep_prob[w])
                .collect();
            processed += sent.len() as u64;
            let lr = config.initial_lr * (1.0 - processed as f64 / (planned + 1.0)).max(1e-4);
            for (pos, &center) in kept.iter().enumerate() {
                let win = rng.gen_range(1..=config.window);
                let lo = pos.saturating_sub(win);
                let hi = (pos + win).min(kept.len() - 1);
                for (cpos, &ctx) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                    if cpos == pos {
                        continue;
                    }
                    neg_idx.clear();
                    for _ in 0..config.negatives {
                        let n = noise.sample(&mut rng);
                        if n != ctx {
                            neg_idx.push(n);
                        }
                    }
                    let g = {
                        let negs: Vec<&[f64]> = neg_idx.iter().map(|&n| output[n].as_slice()).collect();
                        sgns_pair_loss(&input[center], &output[ctx], &negs)
                    };
                    if !g.loss.is_finite() {
                        return Err(Error::NonFiniteLoss { epoch });
                    }
                    loss_sum += g.loss;
                    pairs += 1;
                    for (w, gw) in output[ctx].iter_mut().zip(&g.context) {
                        *w -= lr * gw;
                    }
                    for (&n, gn) in neg_idx.iter().zip(&g.negatives) {
                        for (w, gw) in output[n].iter_mut().zip(gn) {
                            *w -= lr * gw;
                        }
                    }
                    for (w, gw) in input[center].iter_mut().zip(&g.input) {
                        *w -= lr * gw;
                    }
                }
            }
        }
        trace
            .epoch_losses
            .push(if pairs == 0 { 0.0 } else { loss_sum / pairs as f64 });
        trace.pairs_per_epoch.push(pairs);
    }

    let tokens = vocab.iter().map(|&(t, _)| t.to_string()).collect();
    Ok((EmbeddingTable::new(tokens, counts, input)?, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer() {
        assert_eq!(
            tokenize("thizz is NOT pure extacy"),
            ["thizz", "is", "not", "pure", "extacy"]
        );
        assert_eq!(
            tokenize("don't 'quote' rock'n'roll!"),
            ["don't", "quote", "rock'n'roll"]
        );
        assert_eq!(tokenize("it\u{2019}s"), ["it's"]);
    }

    #[test]
    fn usage_corpus_joins_headwords() {
        let mut a = LexiconEntry::new("med school", 1, 0);
        a.examples = vec!["I start Med School monday.".into()];
        let b = LexiconEntry::new("med", 1, 0);
        let c = LexiconEntry::new("empty", 1, 0);
        let corpus = build_usage_corpus(&[a, b, c]);
        assert_eq!(corpus, vec![vec!["i", "start", "med_school", "monday"]]);
    }

    #[test]
    fn cosine_basics() {
        let u = [1.0, 2.0, -0.5];
        assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        assert!((cosine(&u, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(cosine(&u, &[0.0; 3]).is_err());
        assert!(cosine(&u, &[1.0]).is_err());
    }

    #[test]
    fn nearest_two_tokens_and_ties() {
        let t = EmbeddingTable::from_vectors(vec![
            ("a".into(), vec![1.0, 0.0]),
            ("c".into(), vec![0.0, 1.0]),
            ("b".into(), vec![0.0, 2.0]),
        ])
        .unwrap();
        let r = nearest(&t, "a", 5).unwrap();
        assert_eq!(r.iter().map(|x| x.0.as_str()).collect::<Vec<_>>(), ["b", "c"]);
        assert_eq!(nearest(&t, "b", 1).unwrap()[0].0, "c");
        assert!(nearest(&t, "zzz", 1).is_err());
        assert!(nearest(&t, "a", 0).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let t = EmbeddingTable::from_vectors(vec![
            ("x".into(), vec![0.1, -1e-300, 3.0]),
            ("y_z".into(), vec![1.0 / 3.0, 2.0, f64::MIN_POSITIVE]),
        ])
        .unwrap();
        let mut buf = Vec::new();
        t.write_text(&mut buf).unwrap();
        let back = EmbeddingTable::read_text(buf.as_slice()).unwrap();
        assert_eq!(back.vectors, t.vectors);
        assert_eq!(back.tokens, t.tokens);
        assert!(EmbeddingTable::read_text("2 2\na 1 2\n".as_bytes()).is_err());
    }

    #[test]
    fn empty_vocabulary() {
        let corpus = vec![vec!["a".to_string()]];
        assert!(train_skipgram(&corpus, &TrainingConfig::default()).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let corpus: Vec<Vec<String>> = (0..30)
            .map(|i| {
                ["the", "cat", "sat", if i % 2 == 0 { "here" } else { "there" }]
                    .map(String::from)
                    .to_vec()
            })
            .collect();
        let cfg = TrainingConfig {
            dimension: 8,
            min_count: 1,
            seed: 4,
            ..Default::default()
        };
        let (a, ta) = train_skipgram(&corpus, &cfg).unwrap();
        let (b, tb) = train_skipgram(&corpus, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert!(ta.epoch_losses.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn pair_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut v = || -> Vec<f64> { (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect() };
        let (x, c, n1, n2) = (v(), v(), v(), v());
        let g = sgns_pair_loss(&x, &c, &[&n1, &n2]);
        let h = 1e-6;
        for i in 0..4 {
            let (mut p, mut m) = (x.clone(), x.clone());
            p[i] += h;
            m[i] -= h;
            let fd = (sgns_pair_loss(&p, &c, &[&n1, &n2]).loss - sgns_pair_loss(&m, &c, &[&n1, &n2]).loss) / (2.0 * h);
            assert!((fd - g.input[i]).abs() < 1e-6);
        }
    }
}
