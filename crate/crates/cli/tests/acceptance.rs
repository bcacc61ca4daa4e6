//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use slanglex::corpus::split_gold;
use slanglex::embeddings::{cosine, sgns_pair_loss, train_skipgram, EmbeddingTable, TrainingConfig};
use slanglex::morphology::{segment, train_segmenter, SegmenterParams};
use slanglex::phonology::Phonemizer;
use slanglex::slangclass::{
    classify_clipping, classify_reduplicative, compare_feature_models, decide, loss_and_gradient, synthetic,
    ClippingType, LogRegParams, ReduplicativeType, ScoreType, SoftmaxWeights,
};
use slanglex::social::{direct_bias, permutation_test, religious_prejudice_matrix, sexprej};
use slanglex::stats::{normal_cdf, two_proportion_ztest, weighted_f1, ConfusionMatrix};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1

fn pattern_rules() -> Outcome {
    let clips = [
        ("nigg", "nigger", ClippingType::Back),
        ("roach", "cockroach", ClippingType::Fore),
        ("slowmo", "slow motion", ClippingType::Compound),
    ];
    for (clip, source, want) in clips {
        let got = classify_clipping(clip, source);
        check(got == want, || {
            format!("({clip}, {source}) gave {got:?}, want {want:?}")
        })?;
    }
    let redups = [
        ("boo boo", ReduplicativeType::Dup),
        ("flip-flop", ReduplicativeType::ExVow),
        ("bitsy-witsy", ReduplicativeType::ExCons),
        ("moodle-schmoodle", ReduplicativeType::Shm),
    ];
    for (pair, want) in redups {
        let got = classify_reduplicative(pair).map_err(err)?;
        check(got == want, || format!("{pair} gave {got:?}, want {want:?}"))?;
    }
    let seq = Phonemizer::bundled().convert("woody").map_err(err)?;
    let symbols: Vec<&str> = seq.phonemes.iter().map(|p| p.symbol()).collect();
    check(symbols == ["W", "UH", "D", "IY"], || format!("woody gave {symbols:?}"))?;
    Ok("8/8 examples".into())
}

// 2

/// Relative error, with an absolute floor so that coordinates whose gradient
/// is essentially zero are not judged by round-off alone.
fn rel_err(analytic: f64, numeric: f64) -> f64 {
    let scale = analytic.abs().max(numeric.abs());
    if scale < 1e-7 {
        (analytic - numeric).abs()
    } else {
        (analytic - numeric).abs() / scale
    }
}

fn gradients() -> Outcome {
    const H: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst_lr = 0.0f64;
    let mut coords = 0usize;
    for _ in 0..100 {
        let k = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=6);
        let l2 = rng.gen_range(0.0..2.0);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(0..4) as f64).collect())
            .collect();
        let y: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut w = SoftmaxWeights::zeros(k, d);
        for v in &mut w.values {
            *v = rng.gen_range(-1.0..1.0);
        }
        let (_, grad) = loss_and_gradient(&w, &x, &y, l2);
        for (i, &analytic) in grad.iter().enumerate() {
            let mut plus = w.clone();
            plus.values[i] += H;
            let mut minus = w.clone();
            minus.values[i] -= H;
            let numeric =
                (loss_and_gradient(&plus, &x, &y, l2).0 - loss_and_gradient(&minus, &x, &y, l2).0) / (2.0 * H);
            worst_lr = worst_lr.max(rel_err(analytic, numeric));
            coords += 1;
        }
    }
    check(worst_lr <= 1e-5, || {
        format!("logistic regression max relative error {worst_lr:e}")
    })?;

    let mut worst_sg = 0.0f64;
    for _ in 0..100 {
        let dim = rng.gen_range(2..=8);
        let n_neg = rng.gen_range(0..=5);
        let vec = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect() };
        let input = vec(&mut rng);
        let context = vec(&mut rng);
        let negatives: Vec<Vec<f64>> = (0..n_neg).map(|_| vec(&mut rng)).collect();
        let loss = |i: &[f64], c: &[f64], ns: &[Vec<f64>]| {
            let refs: Vec<&[f64]> = ns.iter().map(Vec::as_slice).collect();
            sgns_pair_loss(i, c, &refs).loss
        };
        let refs: Vec<&[f64]> = negatives.iter().map(Vec::as_slice).collect();
        let g = sgns_pair_loss(&input, &context, &refs);

        // every coordinate of every vector involved in the pair
        let n_vectors = 2 + n_neg;
        for v in 0..n_vectors {
            for j in 0..dim {
                let bump = |delta: f64| {
                    let (mut i, mut c, mut ns) = (input.clone(), context.clone(), negatives.clone());
                    match v {
                        0 => i[j] += delta,
                        1 => c[j] += delta,
                        _ => ns[v - 2][j] += delta,
                    }
                    loss(&i, &c, &ns)
                };
                let numeric = (bump(H) - bump(-H)) / (2.0 * H);
                let analytic = match v {
                    0 => g.input[j],
                    1 => g.context[j],
                    _ => g.negatives[v - 2][j],
                };
                worst_sg = worst_sg.max(rel_err(analytic, numeric));
                coords += 1;
            }
        }
    }
    check(worst_sg <= 1e-4, || format!("SGNS max relative error {worst_sg:e}"))?;
    Ok(format!(
        "100+100 instances, {coords} coordinates, max rel err logreg {worst_lr:.1e}, sgns {worst_sg:.1e}"
    ))
}

// 3

fn random_distribution(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = rng.gen_range(2..=6);
    let mut p: Vec<f64> = match rng.gen_range(0..10) {
        0 => vec![1.0; k],
        1 => (0..k).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
        _ => (0..k).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect(),
    };
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= s);
    p
}

fn first_argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..p.len() {
        if p[i] > p[best] {
            best = i;
        }
    }
    best
}

fn open_set() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut violations = Vec::new();
    for kind in [ScoreType::MaxProb, ScoreType::NegEntropy] {
        for draw in 0..10_000 {
            let p = random_distribution(&mut rng);
            let k = p.len();
            let classes: Vec<usize> = (0..k).collect();
            let (lo, hi) = match kind {
                ScoreType::MaxProb => (1.0 / k as f64, 1.0),
                ScoreType::NegEntropy => (-(k as f64).ln(), 0.0),
            };
            let mut deltas: Vec<f64> = (0..6).map(|_| rng.gen_range(lo - 0.5..hi + 0.1)).collect();
            deltas.sort_by(f64::total_cmp);
            let mut was_rejected = false;
            for &delta in &deltas {
                let pred = decide(&classes, &p, delta, kind).map_err(err)?;
                let rejected = pred.label.is_rejected();
                if was_rejected && !rejected {
                    violations.push(format!("{kind} draw {draw}: not monotone at delta {delta}"));
                }
                if delta < lo - 1e-12 && rejected {
                    violations.push(format!("{kind} draw {draw}: rejected below the minimum score"));
                }
                if let Some(&label) = pred.label.known() {
                    if label != first_argmax(&p) {
                        violations.push(format!("{kind} draw {draw}: accepted {label}, argmax differs"));
                    }
                }
                was_rejected = rejected;
            }
        }
    }
    check(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    Ok("2 × 10^4 draws, 0 violations".into())
}

// 4

fn synthetic_gold() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = false;
    for seed in 0..5u64 {
        let gold = synthetic::generate_gold(100, seed).map_err(err)?;
        check(gold.len() == 400, || format!("generator produced {} words", gold.len()))?;
        let split = split_gold(&gold, 0.1, seed).map_err(err)?;
        let seg = SegmenterParams {
            seed,
            ..Default::default()
        };
        let cmp = compare_feature_models(&split, 200, seg, &LogRegParams::default(), seed).map_err(err)?;
        let ok = cmp.char_ngram >= 0.90 && cmp.ordering_holds();
        failed |= !ok;
        lines.push(format!(
            "seed {seed}: char {:.3} morph {:.3} random {:.3}",
            cmp.char_ngram, cmp.morpheme, cmp.random
        ));
    }
    let detail = lines.join("; ");
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}

// 5

/// Code length of a corpus segmentation, written independently of the
/// library: spelled-out lexicon at log2(A + 1) bits per symbol including a
/// terminator, Elias-gamma counts, and the multinomial token cost.
fn oracle_cost(tokens: &[&str], alphabet: usize) -> f64 {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    let char_bits = ((alphabet + 1) as f64).log2();
    let n = tokens.len() as f64;
    let mut bits = 0.0;
    for (m, &c) in &counts {
        bits += (m.chars().count() + 1) as f64 * char_bits;
        bits += 2.0 * (c as f64).log2().floor() + 1.0;
        bits -= c as f64 * (c as f64 / n).log2();
    }
    bits
}

fn all_segmentations(word: &str) -> Vec<Vec<&str>> {
    let n = word.len();
    (0u32..1 << (n - 1))
        .map(|mask| {
            let mut out = Vec::new();
            let mut start = 0;
            for i in 1..n {
                if mask & (1 << (i - 1)) != 0 {
                    out.push(&word[start..i]);
                    start = i;
                }
            }
            out.push(&word[start..]);
            out
        })
        .collect()
}

fn mdl_oracle() -> Outcome {
    let lexicon = ["dogcat", "catdog", "dog", "cat"];
    let alphabet = lexicon.iter().flat_map(|w| w.chars()).collect::<BTreeSet<_>>().len();
    let options: Vec<Vec<Vec<&str>>> = lexicon.iter().map(|w| all_segmentations(w)).collect();

    let mut best = f64::INFINITY;
    let mut best_dogcat: BTreeSet<Vec<&str>> = BTreeSet::new();
    let mut combos = 0u64;
    let mut idx = vec![0usize; lexicon.len()];
    loop {
        let tokens: Vec<&str> = idx
            .iter()
            .enumerate()
            .flat_map(|(w, &i)| options[w][i].iter().copied())
            .collect();
        let c = oracle_cost(&tokens, alphabet);
        combos += 1;
        if c < best - 1e-9 {
            best = c;
            best_dogcat.clear();
        }
        if (c - best).abs() <= 1e-9 {
            best_dogcat.insert(options[0][idx[0]].clone());
        }
        // odometer over the per-word choices
        let mut w = 0;
        loop {
            if w == idx.len() {
                break;
            }
            idx[w] += 1;
            if idx[w] < options[w].len() {
                break;
            }
            idx[w] = 0;
            w += 1;
        }
        if w == idx.len() {
            break;
        }
    }

    let words: Vec<String> = lexicon.iter().map(|s| s.to_string()).collect();
    let model = train_segmenter(&words, SegmenterParams::default()).map_err(err)?;
    let trained = segment(&model, "dogcat").morphs;
    let trained: Vec<&str> = trained.iter().map(String::as_str).collect();
    check(best_dogcat.len() == 1 && best_dogcat.contains(&trained), || {
        format!("trained {trained:?}, exhaustive optimum {best_dogcat:?}")
    })?;

    let kept = train_segmenter(
        &words,
        SegmenterParams {
            split_hyphens: false,
            ..Default::default()
        },
    )
    .map_err(err)?;
    let alphabet: Vec<char> = "abcdefgostz-'. ÉéüßДж語".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut violations = 0;
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=20);
        let w: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        for m in [&model, &kept] {
            let s = segment(m, &w);
            if s.morphs.concat() != w || s.morphs.iter().any(String::is_empty) {
                violations += 1;
            }
        }
    }
    check(violations == 0, || format!("{violations} concatenation violations"))?;
    Ok(format!(
        "dogcat -> {trained:?} = optimum of {combos} corpus segmentations ({best:.3} bits); 10^4 fuzzed words, 0 violations"
    ))
}

// 6

fn stats_oracles() -> Outcome {
    const TOL: f64 = 1e-6;
    let f1 = weighted_f1(&["A", "A", "B"], &["A", "B", "B"]).map_err(err)?;
    check((f1 - 2.0 / 3.0).abs() <= TOL, || format!("hand example F1 {f1}"))?;

    let labels = ['a', 'b', 'c', 'd', 'e'];
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for case in 0..200 {
        let truth: Vec<char> = (0..20).map(|_| labels[rng.gen_range(0..5)]).collect();
        let pred: Vec<char> = (0..20).map(|_| labels[rng.gen_range(0..5)]).collect();
        let cm = ConfusionMatrix::from_pairs(&truth, &pred, &labels).map_err(err)?;
        let mut f1_oracle = 0.0;
        for &t in &labels {
            for &p in &labels {
                let tally = truth.iter().zip(&pred).filter(|&(&a, &b)| a == t && b == p).count() as u64;
                check(cm.get(&t, &p) == Some(tally), || format!("case {case}: cell ({t},{p})"))?;
            }
            let tp = truth.iter().zip(&pred).filter(|&(&a, &b)| a == t && b == t).count() as f64;
            let fp = truth.iter().zip(&pred).filter(|&(&a, &b)| a != t && b == t).count() as f64;
            let fn_ = truth.iter().zip(&pred).filter(|&(&a, &b)| a == t && b != t).count() as f64;
            let f = if tp == 0.0 {
                0.0
            } else {
                2.0 * tp / (2.0 * tp + fp + fn_)
            };
            f1_oracle += f * (tp + fn_) / truth.len() as f64;
        }
        let got = weighted_f1(&truth, &pred).map_err(err)?;
        check((got - f1_oracle).abs() <= TOL, || {
            format!("case {case}: F1 {got} vs {f1_oracle}")
        })?;
        check((cm.weighted_f1() - f1_oracle).abs() <= TOL, || {
            format!("case {case}: matrix F1")
        })?;
    }

    let normal = Normal::new(0.0, 1.0).map_err(err)?;
    let ztest = |x1: u64, n1: u64, x2: u64, n2: u64| {
        let (p1, p2) = (x1 as f64 / n1 as f64, x2 as f64 / n2 as f64);
        let pool = (x1 + x2) as f64 / (n1 + n2) as f64;
        let z = (p1 - p2) / (pool * (1.0 - pool) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
        (z, 2.0 * normal.cdf(-z.abs()))
    };
    let r = two_proportion_ztest(50, 100, 30, 100, 0.05, 8).map_err(err)?;
    let (z, p) = ztest(50, 100, 30, 100);
    check((r.z - z).abs() <= TOL && (r.p_value - p).abs() <= TOL, || {
        format!("z {} p {}", r.z, r.p_value)
    })?;
    check((r.adjusted_alpha - 0.00625).abs() <= 1e-12, || {
        format!("adjusted alpha {}", r.adjusted_alpha)
    })?;
    for _ in 0..500 {
        let n1 = rng.gen_range(1..500);
        let n2 = rng.gen_range(1..500);
        let x1 = rng.gen_range(0..=n1);
        let x2 = rng.gen_range(0..=n2);
        if x1 + x2 == 0 || x1 + x2 == n1 + n2 {
            continue;
        }
        let r = two_proportion_ztest(x1, n1, x2, n2, 0.05, 1).map_err(err)?;
        let (z, p) = ztest(x1, n1, x2, n2);
        check((r.z - z).abs() <= TOL && (r.p_value - p).abs() <= TOL, || {
            format!("({x1}/{n1} vs {x2}/{n2}): z {} vs {z}, p {} vs {p}", r.z, r.p_value)
        })?;
    }

    let table = [
        (0.0, 0.5),
        (0.5, 0.6914624612740131),
        (1.0, 0.8413447460685429),
        (1.96, 0.9750021048517795),
        (2.0, 0.9772498680518208),
        (3.0, 0.9986501019683699),
        (-1.0, 0.15865525393145707),
        (-1.96, 0.024997895148220435),
    ];
    let mut worst = 0.0f64;
    for (x, want) in table {
        worst = worst.max((normal_cdf(x) - want).abs());
    }
    for i in -800..=800 {
        let x = i as f64 / 100.0;
        worst = worst.max((normal_cdf(x) - normal.cdf(x)).abs());
    }
    check(worst <= 1e-7, || format!("normal CDF error {worst:e}"))?;
    Ok(format!(
        "200 confusion/F1 cases, 500 z-tests, normal CDF max error {worst:.1e}"
    ))
}

// 7

fn table(rows: &[(&str, &[f64])]) -> Result<EmbeddingTable, String> {
    EmbeddingTable::from_vectors(rows.iter().map(|(t, v)| (t.to_string(), v.to_vec())).collect()).map_err(err)
}

fn strings(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

fn bias_fixtures() -> Outcome {
    const TOL: f64 = 1e-9;
    let t = table(&[
        ("nurse", &[0.0, 2.0, 0.0]),
        ("pilot", &[0.0, -1.0, 3.0]),
        ("queen", &[3.0, 0.0, 0.0]),
        ("king", &[-0.5, 0.0, 0.0]),
    ])?;
    let g = [1.0, 0.0, 0.0];
    let zero = direct_bias(&t, &strings(&["nurse", "pilot"]), &g, 1.0)
        .map_err(err)?
        .value;
    let one = direct_bias(&t, &strings(&["queen", "king"]), &g, 1.0)
        .map_err(err)?
        .value;
    check(zero.abs() <= TOL && (one - 1.0).abs() <= TOL, || {
        format!("direct bias {zero} / {one}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let names = ["r1", "r2", "r3", "r4", "p1", "p2", "p3"];
    let rows: Vec<(String, Vec<f64>)> = names
        .iter()
        .map(|n| (n.to_string(), (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect();
    let t = EmbeddingTable::from_vectors(rows).map_err(err)?;
    let m = religious_prejudice_matrix(&t, &strings(&names[..4]), &strings(&names[4..])).map_err(err)?;
    for p in 0..3 {
        let col: Vec<f64> = m.standardized.iter().map(|r| r[p]).collect();
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (col.len() - 1) as f64).sqrt();
        check(mean.abs() <= TOL && (sd - 1.0).abs() <= TOL, || {
            format!("column {p}: mean {mean}, std {sd}")
        })?;
    }

    let t = table(&[
        ("w", &[1.0, 0.0]),
        ("slut", &[2.0, 0.0]),
        ("shrew", &[0.0, 5.0]),
        ("nude", &[1.0, 1.0]),
    ])?;
    let got = sexprej(&t, "w", &strings(&["slut", "shrew", "nude", "absent"])).map_err(err)?;
    let want = (1.0 + 0.0 + std::f64::consts::FRAC_1_SQRT_2) / 3.0;
    check((got.value - want).abs() <= TOL && got.terms_used == 3, || {
        format!("sexprej {}", got.value)
    })?;
    let single = sexprej(&t, "w", &strings(&["nude"])).map_err(err)?.value;
    let plain = cosine(t.vector("w").map_err(err)?, t.vector("nude").map_err(err)?).map_err(err)?;
    check((single - plain).abs() <= TOL, || {
        "single-term sexprej is not the cosine".into()
    })?;

    // every way of choosing which 2 of the 4 scores form the first group
    let (a, b): ([f64; 2], [f64; 2]) = ([0.9, 0.9], [0.1, 0.1]);
    let pooled = [a[0], a[1], b[0], b[1]];
    let observed = ((a[0] + a[1]) / 2.0 - (b[0] + b[1]) / 2.0).abs();
    let mut hits = 0;
    let mut total = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let first = (pooled[i] + pooled[j]) / 2.0;
            let second = (pooled.iter().sum::<f64>() - pooled[i] - pooled[j]) / 2.0;
            total += 1;
            if (first - second).abs() >= observed - 1e-12 {
                hits += 1;
            }
        }
    }
    let exact = hits as f64 / total as f64;
    let test = permutation_test(&a, &b, 10_000, 7).map_err(err)?;
    check(test.exact && (test.p_value - exact).abs() <= TOL, || {
        format!(
            "permutation p {} (exact {}), enumeration gives {exact}",
            test.p_value, test.exact
        )
    })?;
    Ok(format!(
        "direct bias 0/1, 3 standardized columns, sexprej {want:.6}, 2+2 permutation p = {exact:.6}"
    ))
}

// 8

fn embedding_semantics() -> Outcome {
    let mut corpus = Vec::new();
    for _ in 0..150 {
        for (center, ctx) in [
            ("x", ["a", "b", "c", "d"]),
            ("y", ["a", "b", "c", "d"]),
            ("z", ["e", "f", "g", "h"]),
        ] {
            corpus.push(
                vec![ctx[0], ctx[1], center, ctx[2], ctx[3]]
                    .into_iter()
                    .map(String::from)
                    .collect(),
            );
        }
    }
    let mut lines = Vec::new();
    let mut failed = false;
    for seed in 0..5 {
        let cfg = TrainingConfig {
            dimension: 20,
            window: 2,
            negatives: 5,
            epochs: 10,
            initial_lr: 0.025,
            min_count: 1,
            subsample: 0.0,
            seed,
        };
        let (t, trace) = train_skipgram(&corpus, &cfg).map_err(err)?;
        let v = |w: &str| t.vector(w).map_err(err);
        let xy = cosine(v("x")?, v("y")?).map_err(err)?;
        let xz = cosine(v("x")?, v("z")?).map_err(err)?;
        let first = trace.epoch_losses[0];
        let last = *trace.epoch_losses.last().unwrap();
        let ok = xy > xz && last < first;
        failed |= !ok;
        lines.push(format!(
            "seed {seed}: cos(x,y) {xy:.3} > cos(x,z) {xz:.3}, loss {first:.3} -> {last:.3}"
        ));
    }
    let detail = lines.join("; ");
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}

// 9

fn files(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(err)?;
    let mut trees = Vec::new();
    let mut slowest = Duration::ZERO;
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_slanglex"))
            .args(["pipeline", "--fixtures", "--seed", "7", "--out"])
            .arg(&out)
            .output()
            .map_err(err)?;
        slowest = slowest.max(start.elapsed());
        check(status.status.success(), || {
            format!("run {run} failed: {}", String::from_utf8_lossy(&status.stderr))
        })?;
        trees.push(files(&out));
    }
    check(slowest < Duration::from_secs(120), || format!("a run took {slowest:?}"))?;
    let (a, b) = (&trees[0], &trees[1]);
    let names_a: Vec<_> = a.keys().collect();
    let names_b: Vec<_> = b.keys().collect();
    check(names_a == names_b, || "the two runs wrote different file sets".into())?;
    let differing: Vec<_> = a
        .iter()
        .filter(|(k, v)| b[*k] != **v)
        .map(|(k, _)| k.display().to_string())
        .collect();
    check(differing.is_empty(), || {
        format!("files differ: {}", differing.join(", "))
    })?;
    let reports = a.keys().filter(|k| k.extension().is_some_and(|e| e == "csv")).count();
    Ok(format!(
        "{} files ({reports} CSV reports) identical, slowest run {:.1} s",
        a.len(),
        slowest.as_secs_f64()
    ))
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "pattern-rule fidelity",
            limit: secs(1),
            run: pattern_rules,
        },
        Criterion {
            id: 2,
            name: "gradient checks",
            limit: secs(30),
            run: gradients,
        },
        Criterion {
            id: 3,
            name: "open-set contract",
            limit: None,
            run: open_set,
        },
        Criterion {
            id: 4,
            name: "synthetic gold classifier",
            limit: secs(60),
            run: synthetic_gold,
        },
        Criterion {
            id: 5,
            name: "MDL oracle",
            limit: None,
            run: mdl_oracle,
        },
        Criterion {
            id: 6,
            name: "statistics oracles",
            limit: None,
            run: stats_oracles,
        },
        Criterion {
            id: 7,
            name: "bias-metric fixtures",
            limit: None,
            run: bias_fixtures,
        },
        Criterion {
            id: 8,
            name: "embedding semantics",
            limit: secs(60),
            run: embedding_semantics,
        },
        Criterion {
            id: 9,
            name: "end-to-end determinism",
            limit: secs(120),
            run: determinism,
        },
    ];
    let mut passed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let took = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, c.limit) {
            if took > limit {
                outcome = Err(format!("{detail}; took {took:?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!(
                    "PASS criterion {}: {} [{:.2} s] {detail}",
                    c.id,
                    c.name,
                    took.as_secs_f64()
                );
            }
            Err(detail) => println!(
                "FAIL criterion {}: {} [{:.2} s] {detail}",
                c.id,
                c.name,
                took.as_secs_f64()
            ),
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
