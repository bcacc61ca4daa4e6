//! Subject classification by nearest neighbours in embedding space, and
//! embedding bias metrics: gender direction, DirectBias, sexual-prejudice
//! scores for names, and a standardized religion × prejudice matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::LexiconEntry;
use crate::embeddings::{cosine, dot, headword_token, norm, EmbeddingTable};
use crate::error::{Error, Result};
use crate::slangclass::ProbabilityModel;
use crate::stats::ConfusionMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubjectLabel {
    Sex,
    Drugs,
    Music,
    Name,
    College,
    Sports,
    Internet,
    Religion,
    Food,
    Work,
}

impl SubjectLabel {
    pub const ALL: [SubjectLabel; 10] = [
        SubjectLabel::Sex,
        SubjectLabel::Drugs,
        SubjectLabel::Music,
        SubjectLabel::Name,
        SubjectLabel::College,
        SubjectLabel::Sports,
        SubjectLabel::Internet,
        SubjectLabel::Religion,
        SubjectLabel::Food,
        SubjectLabel::Work,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubjectLabel::Sex => "sex",
            SubjectLabel::Drugs => "drugs",
            SubjectLabel::Music => "music",
            SubjectLabel::Name => "name",
            SubjectLabel::College => "college",
            SubjectLabel::Sports => "sports",
            SubjectLabel::Internet => "internet",
            SubjectLabel::Religion => "religion",
            SubjectLabel::Food => "food",
            SubjectLabel::Work => "work",
        }
    }
}

impl fmt::Display for SubjectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubjectLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        SubjectLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown subject label `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KnnMetric {
    /// Cosine similarity over unit-normalized vectors.
    #[default]
    Cosine,
    Euclidean,
}

impl FromStr for KnnMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cosine" => Ok(KnnMetric::Cosine),
            "euclidean" => Ok(KnnMetric::Euclidean),
            _ => Err(Error::InvalidInput(format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub token: String,
    pub vector: Vec<f64>,
    pub label: SubjectLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub metric: KnnMetric,
    pub references: Vec<Reference>,
    /// Distinct reference labels, sorted; the probability vector order.
    pub classes: Vec<SubjectLabel>,
}

impl KnnModel {
    /// Reference vectors are stored unit-normalized under the cosine metric.
    pub fn new(k: usize, metric: KnnMetric, mut references: Vec<Reference>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        let first = references
            .first()
            .ok_or(Error::EmptyInput("KNN needs at least one reference"))?;
        let dim = first.vector.len();
        for r in &mut references {
            if r.vector.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.vector.len(),
                });
            }
            if metric == KnnMetric::Cosine {
                let n = norm(&r.vector);
                if n == 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "reference `{}` has a zero vector",
                        r.token
                    )));
                }
                r.vector.iter_mut().for_each(|x| *x /= n);
            }
        }
        let classes: BTreeSet<SubjectLabel> = references.iter().map(|r| r.label).collect();
        Ok(Self {
            k,
            metric,
            references,
            classes: classes.into_iter().collect(),
        })
    }

    /// References for every labeled word present in `table`; absent words are
    /// returned alongside.
    pub fn from_embedding(
        table: &EmbeddingTable,
        labeled: &[(String, SubjectLabel)],
        k: usize,
        metric: KnnMetric,
    ) -> Result<(Self, Vec<String>)> {
        let mut refs = Vec::new();
        let mut missing = Vec::new();
        for (w, l) in labeled {
            match table.get(w) {
                Some(v) => refs.push(Reference {
                    token: w.clone(),
                    vector: v.to_vec(),
                    label: *l,
                }),
                None => missing.push(w.clone()),
            }
        }
        Ok((Self::new(k, metric, refs)?, missing))
    }

    pub fn dimension(&self) -> usize {
        self.references[0].vector.len()
    }

    /// The `k` nearest references, closest first; ties by token.
    pub fn neighbours(&self, vector: &[f64]) -> Result<Vec<&Reference>> {
        if vector.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: vector.len(),
            });
        }
        // larger key = closer
        let key = |r: &Reference| match self.metric {
            KnnMetric::Cosine => {
                let n = norm(vector);
                if n == 0.0 {
                    0.0
                } else {
                    dot(&r.vector, vector) / n
                }
            }
            KnnMetric::Euclidean => -r.vector.iter().zip(vector).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        };
        let mut scored: Vec<(f64, &Reference)> = self.references.iter().map(|r| (key(r), r)).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.token.cmp(&b.1.token)));
        Ok(scored.into_iter().take(self.k).map(|(_, r)| r).collect())
    }

    /// Vote fractions among the nearest references, aligned with `classes`.
    pub fn probabilities(&self, vector: &[f64]) -> Result<Vec<f64>> {
        let nb = self.neighbours(vector)?;
        let mut p = vec![0.0; self.classes.len()];
        for r in &nb {
            let i = self.classes.binary_search(&r.label).expect("label from references");
            p[i] += 1.0;
        }
        let n = nb.len() as f64;
        p.iter_mut().for_each(|x| *x /= n);
        Ok(p)
    }
}

impl ProbabilityModel<[f64]> for KnnModel {
    type Label = SubjectLabel;

    fn classes(&self) -> &[SubjectLabel] {
        &self.classes
    }

    /// Panics on a dimension mismatch; use [`knn_predict_proba`] for a checked call.
    fn predict_proba(&self, vector: &[f64]) -> Vec<f64> {
        self.probabilities(vector).expect("query dimension matches references")
    }
}

/// `(token, label)` for every entry carrying subjects, using the entry's
/// first (smallest) label. Duplicate tokens keep their first entry.
pub fn labeled_headwords(entries: &[LexiconEntry]) -> Vec<(String, SubjectLabel)> {
    let mut seen = BTreeSet::new();
    entries
        .iter()
        .filter_map(|e| {
            let label = *e.subjects.as_ref()?.iter().next()?;
            let token = headword_token(&e.headword);
            (!token.is_empty() && seen.insert(token.clone())).then_some((token, label))
        })
        .collect()
}

/// `word<TAB>subject` per line, `#` comments allowed. Words are mapped to
/// their usage-corpus token.
pub fn parse_subject_tsv(text: &str) -> Result<Vec<(String, SubjectLabel)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (w, l) = line
            .split_once('\t')
            .ok_or_else(|| Error::schema(i + 1, "subject", "expected `word<TAB>subject`"))?;
        let token = headword_token(w);
        if token.is_empty() {
            return Err(Error::schema(i + 1, "word", "has no word characters"));
        }
        let label = l
            .parse()
            .map_err(|e: Error| Error::schema(i + 1, "subject", e.to_string()))?;
        out.push((token, label));
    }
    Ok(out)
}

pub fn load_subject_tsv(path: impl AsRef<Path>) -> Result<Vec<(String, SubjectLabel)>> {
    let path = path.as_ref();
    parse_subject_tsv(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn knn_predict_proba(model: &KnnModel, vector: &[f64]) -> Result<BTreeMap<SubjectLabel, f64>> {
    Ok(model
        .classes
        .iter()
        .copied()
        .zip(model.probabilities(vector)?)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectEvaluation {
    pub weighted_f1: f64,
    pub confusion: ConfusionMatrix<SubjectLabel>,
    pub truth: Vec<SubjectLabel>,
    pub predicted: Vec<SubjectLabel>,
    /// Test words absent from the embedding table.
    pub missing: Vec<String>,
}

/// Closed-set evaluation of the KNN argmax over the test words found in
/// `table`. Vote ties go to the earliest class in `model.classes`.
pub fn evaluate_subject_model(
    model: &KnnModel,
    test: &[(String, SubjectLabel)],
    table: &EmbeddingTable,
) -> Result<SubjectEvaluation> {
    let mut truth = Vec::new();
    let mut predicted = Vec::new();
    let mut missing = Vec::new();
    for (w, l) in test {
        let Some(v) = table.get(w) else {
            missing.push(w.clone());
            continue;
        };
        let p = model.probabilities(v)?;
        let best = (0..p.len()).fold(0, |b, i| if p[i] > p[b] { i } else { b });
        truth.push(*l);
        predicted.push(model.classes[best]);
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput("no test word is in the embedding vocabulary"));
    }
    let confusion = ConfusionMatrix::from_pairs(&truth, &predicted, &SubjectLabel::ALL)?;
    Ok(SubjectEvaluation {
        weighted_f1: confusion.weighted_f1(),
        confusion,
        truth,
        predicted,
        missing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Unknown => "unknown",
        })
    }
}

impl FromStr for Gender {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "female" => Ok(Gender::Female),
            "m" | "male" => Ok(Gender::Male),
            "u" | "unknown" | "" => Ok(Gender::Unknown),
            _ => Err(Error::InvalidInput(format!("unknown gender `{s}`"))),
        }
    }
}

/// Case-insensitive name → gender lookup; unlisted names are `Unknown`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GenderLexicon {
    names: HashMap<String, Gender>,
}

impl GenderLexicon {
    pub fn insert(&mut self, name: &str, g: Gender) {
        self.names.insert(name.trim().to_lowercase(), g);
    }

    pub fn lookup(&self, name: &str) -> Gender {
        self.names
            .get(&name.trim().to_lowercase())
            .copied()
            .unwrap_or(Gender::Unknown)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// CSV with columns `name,gender`; a header row is optional.
    pub fn parse_csv(reader: impl std::io::Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut lex = GenderLexicon::default();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let (Some(name), Some(g)) = (rec.get(0), rec.get(1)) else {
                return Err(Error::schema(i + 1, "gender", "expected `name,gender`"));
            };
            if i == 0 && name.eq_ignore_ascii_case("name") {
                continue;
            }
            let g = g
                .parse()
                .map_err(|_| Error::schema(i + 1, "gender", format!("bad gender `{g}`")))?;
            lex.insert(name, g);
        }
        Ok(lex)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(f)
    }
}

/// Term lists used by the bias metrics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiasLexicons {
    pub prejudice_terms: Vec<String>,
    pub religious_terms: Vec<String>,
    pub religious_prejudices: Vec<String>,
    pub occupations: Vec<String>,
    /// (male, female)
    pub gender_pairs: Vec<(String, String)>,
}

/// One lowercased term per line; blank lines and `#` comments skipped;
/// duplicates dropped keeping first occurrence.
pub fn parse_term_list(text: &str) -> Vec<String> {
    let mut seen = BTreeSet::new();
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|l| !l.is_empty() && seen.insert(l.clone()))
        .collect()
}

impl BiasLexicons {
    pub const PREJUDICE_FILE: &'static str = "prejudice.txt";
    pub const RELIGIONS_FILE: &'static str = "religions.txt";
    pub const RELIGIOUS_PREJUDICES_FILE: &'static str = "religious_prejudices.txt";
    pub const OCCUPATIONS_FILE: &'static str = "occupations.txt";
    pub const GENDER_PAIRS_FILE: &'static str = "gender_pairs.txt";

    /// Reads the five list files from `dir`. Gender pairs are `male female`
    /// per line, separated by whitespace or a comma.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let p = dir.join(name);
            std::fs::read_to_string(&p).map_err(|e| Error::io(p, e))
        };
        let mut pairs = Vec::new();
        for (i, line) in parse_term_list(&read(Self::GENDER_PAIRS_FILE)?).iter().enumerate() {
            let parts: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            match parts[..] {
                [m, f] => pairs.push((m.to_string(), f.to_string())),
                _ => return Err(Error::schema(i + 1, "gender_pair", "expected `male female`")),
            }
        }
        let lex = BiasLexicons {
            prejudice_terms: parse_term_list(&read(Self::PREJUDICE_FILE)?),
            religious_terms: parse_term_list(&read(Self::RELIGIONS_FILE)?),
            religious_prejudices: parse_term_list(&read(Self::RELIGIOUS_PREJUDICES_FILE)?),
            occupations: parse_term_list(&read(Self::OCCUPATIONS_FILE)?),
            gender_pairs: pairs,
        };
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [
            ("prejudice terms", &self.prejudice_terms),
            ("religious terms", &self.religious_terms),
            ("religious prejudices", &self.religious_prejudices),
            ("occupations", &self.occupations),
        ] {
            if list.is_empty() {
                return Err(Error::InvalidInput(format!("{name} list is empty")));
            }
        }
        if self.gender_pairs.is_empty() {
            return Err(Error::InvalidInput("gender pair list is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenderDirection {
    /// Unit vector; positive projections lean female.
    pub vector: Vec<f64>,
    pub pairs_used: usize,
    pub missing: Vec<(String, String)>,
}

/// Mean of the normalized `female − male` differences, renormalized. Pairs
/// with a word outside the vocabulary are skipped and reported.
pub fn gender_direction(table: &EmbeddingTable, pairs: &[(String, String)]) -> Result<GenderDirection> {
    let mut sum = vec![0.0; table.dimension];
    let mut used = 0;
    let mut missing = Vec::new();
    for (m, f) in pairs {
        let (Some(vm), Some(vf)) = (table.get(m), table.get(f)) else {
            missing.push((m.clone(), f.clone()));
            continue;
        };
        let diff: Vec<f64> = vf.iter().zip(vm).map(|(a, b)| a - b).collect();
        let n = norm(&diff);
        if n == 0.0 {
            return Err(Error::Undefined(format!("`{m}` and `{f}` have identical vectors")));
        }
        sum.iter_mut().zip(&diff).for_each(|(s, d)| *s += d / n);
        used += 1;
    }
    if used == 0 {
        return Err(Error::EmptyInput("no gender pair is in the vocabulary"));
    }
    let n = norm(&sum);
    if n == 0.0 {
        return Err(Error::Undefined("gender pair differences cancel out".into()));
    }
    Ok(GenderDirection {
        vector: sum.into_iter().map(|x| x / n).collect(),
        pairs_used: used,
        missing,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectBias {
    pub value: f64,
    pub evaluated: usize,
    pub missing: Vec<String>,
}

/// Mean over in-vocabulary words of `|cos(w, g)|^c`.
pub fn direct_bias(table: &EmbeddingTable, words: &[String], g: &[f64], c: f64) -> Result<DirectBias> {
    let mut sum = 0.0;
    let mut evaluated = 0;
    let mut missing = Vec::new();
    for w in words {
        match table.get(w) {
            Some(v) => {
                sum += cosine(v, g)?.abs().powf(c);
                evaluated += 1;
            }
            None => missing.push(w.clone()),
        }
    }
    if evaluated == 0 {
        return Err(Error::EmptyInput("no neutral word is in the vocabulary"));
    }
    Ok(DirectBias {
        value: sum / evaluated as f64,
        evaluated,
        missing,
    })
}

/// In-vocabulary occupations with their signed cosine onto `g`, most
/// female-leaning first; ties by token.
pub fn occupation_projections(table: &EmbeddingTable, occupations: &[String], g: &[f64]) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for w in occupations {
        if let Some(v) = table.get(w) {
            out.push((w.clone(), cosine(v, g)?));
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SexPrej {
    pub value: f64,
    pub terms_used: usize,
    pub missing_terms: Vec<String>,
}

/// Mean cosine between `word` and the in-vocabulary prejudice terms.
pub fn sexprej(table: &EmbeddingTable, word: &str, terms: &[String]) -> Result<SexPrej> {
    let v = table.vector(word)?;
    let mut sum = 0.0;
    let mut used = 0;
    let mut missing = Vec::new();
    for t in terms {
        match table.get(t) {
            Some(u) => {
                sum += cosine(v, u)?;
                used += 1;
            }
            None => missing.push(t.clone()),
        }
    }
    if used == 0 {
        return Err(Error::EmptyInput("no prejudice term is in the vocabulary"));
    }
    Ok(SexPrej {
        value: sum / used as f64,
        terms_used: used,
        missing_terms: missing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationTest {
    /// mean(a) − mean(b)
    pub difference: f64,
    pub p_value: f64,
    /// True when every relabeling was enumerated.
    pub exact: bool,
    pub permutations: u64,
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u64)? / (i + 1) as u64;
    }
    Some(acc)
}

/// Two-sided test on the difference of means, statistic `|mean(a) − mean(b)|`.
///
/// When the number of distinct relabelings `C(n_a + n_b, n_a)` is at most
/// `permutations`, all of them are enumerated and `p` is the fraction whose
/// statistic is at least the observed one (the observed labeling included).
/// Otherwise `permutations` seeded shuffles are drawn and
/// `p = (1 + hits) / (1 + permutations)`.
pub fn permutation_test(a: &[f64], b: &[f64], permutations: u64, seed: u64) -> Result<PermutationTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("permutation test needs two non-empty groups"));
    }
    if permutations == 0 {
        return Err(Error::InvalidInput("permutations must be at least 1".into()));
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let observed = mean(a) - mean(b);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let total: f64 = pooled.iter().sum();
    let (n, na) = (pooled.len(), a.len());
    let stat = |sum_a: f64| (sum_a / na as f64 - (total - sum_a) / (n - na) as f64).abs();
    let threshold = observed.abs() - 1e-12 * (1.0 + observed.abs());

    if let Some(c) = binomial(n, na).filter(|&c| c <= permutations) {
        let mut hits = 0u64;
        let mut idx: Vec<usize> = (0..na).collect();
        loop {
            let s: f64 = idx.iter().map(|&i| pooled[i]).sum();
            if stat(s) >= threshold {
                hits += 1;
            }
            // next k-combination in lexicographic order
            let Some(i) = (0..na).rev().find(|&i| idx[i] < n - na + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..na {
                idx[j] = idx[j - 1] + 1;
            }
        }
        return Ok(PermutationTest {
            difference: observed,
            p_value: hits as f64 / c as f64,
            exact: true,
            permutations: c,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = pooled;
    let mut hits = 0u64;
    for _ in 0..permutations {
        work.shuffle(&mut rng);
        if stat(work[..na].iter().sum()) >= threshold {
            hits += 1;
        }
    }
    Ok(PermutationTest {
        difference: observed,
        p_value: (1 + hits) as f64 / (1 + permutations) as f64,
        exact: false,
        permutations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupScore {
    pub mean: f64,
    pub n: usize,
    pub names: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamePrejudiceReport {
    pub female: GroupScore,
    pub male: GroupScore,
    /// female mean − male mean
    pub test: PermutationTest,
    pub unknown_gender: Vec<String>,
    pub out_of_vocabulary: Vec<String>,
}

/// SEXPREJ per name, grouped by lexicon gender, with a permutation test on
/// the female − male difference of means.
pub fn name_prejudice_comparison(
    table: &EmbeddingTable,
    names: &[String],
    genders: &GenderLexicon,
    terms: &[String],
    permutations: u64,
    seed: u64,
) -> Result<NamePrejudiceReport> {
    let mut groups: BTreeMap<Gender, Vec<(String, f64)>> = BTreeMap::new();
    let mut unknown = Vec::new();
    let mut oov = Vec::new();
    for name in names {
        let g = genders.lookup(name);
        if g == Gender::Unknown {
            unknown.push(name.clone());
            continue;
        }
        let key = name.to_lowercase();
        if !table.contains(&key) {
            oov.push(name.clone());
            continue;
        }
        groups
            .entry(g)
            .or_default()
            .push((key.clone(), sexprej(table, &key, terms)?.value));
    }
    let mut take = |g: Gender| -> Result<GroupScore> {
        let names = groups.remove(&g).unwrap_or_default();
        if names.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "{g} group has {} name(s) in vocabulary; need at least 2",
                names.len()
            )));
        }
        let mean = names.iter().map(|x| x.1).sum::<f64>() / names.len() as f64;
        Ok(GroupScore {
            mean,
            n: names.len(),
            names,
        })
    };
    let female = take(Gender::Female)?;
    let male = take(Gender::Male)?;
    let fs: Vec<f64> = female.names.iter().map(|x| x.1).collect();
    let ms: Vec<f64> = male.names.iter().map(|x| x.1).collect();
    let test = permutation_test(&fs, &ms, permutations, seed)?;
    Ok(NamePrejudiceReport {
        female,
        male,
        test,
        unknown_gender: unknown,
        out_of_vocabulary: oov,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReligionMatrix {
    pub religions: Vec<String>,
    pub prejudices: Vec<String>,
    /// `raw[r][p] = cos(religion r, prejudice p)`
    pub raw: Vec<Vec<f64>>,
    /// Each column scaled to mean 0 and sample standard deviation 1.
    pub standardized: Vec<Vec<f64>>,
    pub overall_mean: f64,
    pub missing: Vec<String>,
}

pub fn religious_prejudice_matrix(
    table: &EmbeddingTable,
    religions: &[String],
    prejudices: &[String],
) -> Result<ReligionMatrix> {
    let mut missing = Vec::new();
    let mut keep = |ws: &[String]| -> Vec<String> {
        ws.iter()
            .filter(|w| {
                let ok = table.contains(w);
                if !ok {
                    missing.push((*w).clone());
                }
                ok
            })
            .cloned()
            .collect()
    };
    let rs = keep(religions);
    let ps = keep(prejudices);
    if ps.is_empty() {
        return Err(Error::EmptyInput("no prejudice term is in the vocabulary"));
    }
    if rs.len() < 2 {
        return Err(Error::Undefined(format!(
            "standardization needs at least 2 religions in vocabulary, found {}",
            rs.len()
        )));
    }
    let raw: Vec<Vec<f64>> = rs
        .iter()
        .map(|r| {
            ps.iter()
                .map(|p| cosine(table.vector(r)?, table.vector(p)?))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let n = rs.len() as f64;
    let mut standardized = vec![vec![0.0; ps.len()]; rs.len()];
    for j in 0..ps.len() {
        let mean = raw.iter().map(|row| row[j]).sum::<f64>() / n;
        let var = raw.iter().map(|row| (row[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let sd = var.sqrt();
        if sd == 0.0 {
            return Err(Error::Undefined(format!(
                "prejudice `{}` has zero variance across religions",
                ps[j]
            )));
        }
        for i in 0..rs.len() {
            standardized[i][j] = (raw[i][j] - mean) / sd;
        }
    }
    let overall_mean = raw.iter().flatten().sum::<f64>() / (rs.len() * ps.len()) as f64;
    Ok(ReligionMatrix {
        religions: rs,
        prejudices: ps,
        raw,
        standardized,
        overall_mean,
        missing,
    })
}
