use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};
use slanglex::corpus::{load_gold_tsv, split_gold, GoldClassRecord};
use slanglex::morphology::train_segmenter;
use slanglex::report::{
    class_report_csv, confusion_csv, counts_csv, crossval_csv, key_value_csv, predictions_csv, ranked_csv,
    substitution_csv,
};
use slanglex::slangclass::{
    blend_suffix_stats, classify_clipping, classify_reduplicative, compare_feature_models, cross_class_validate_split,
    predict_with_reject, reduplicative_parts, substitution_stats, synthetic, train_classifier, ClassifierModel,
    FeatureKind, LogRegParams, OpenSetLabel, Prediction, SlangClass,
};
use slanglex::stats::ConfusionMatrix;
use slanglex::store::{load_classifier, save_classifier};
use slanglex::Error;

use super::segmenter_params;
use crate::args::{ClassesEvalArgs, ClassesPredictArgs, ClassesTrainArgs, Features, LogRegArgs, RejectArgs};
use crate::error::{invalid, CliError, CliResult};
use crate::io::{ensure_parent, header, input_entry, load_slang, read_bytes, require_file, ReportDir};

pub fn logreg_params(a: &LogRegArgs) -> CliResult<LogRegParams> {
    if a.cap == 0 {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    if !(a.l2 >= 0.0 && a.l2.is_finite()) {
        return Err(CliError::Usage(format!("--l2 must be non-negative, got {}", a.l2)));
    }
    if a.max_epochs == 0 {
        return Err(CliError::Usage("--max-epochs must be at least 1".into()));
    }
    Ok(LogRegParams {
        l2: a.l2,
        max_epochs: a.max_epochs,
        ..LogRegParams::default()
    })
}

/// Validates delta for `n_classes` known classes.
fn check_reject(r: &RejectArgs, n_classes: usize) -> CliResult<()> {
    invalid(r.score.validate_delta(r.delta, n_classes))
}

fn kind(f: Features) -> FeatureKind {
    match f {
        Features::Char => FeatureKind::CharNgram,
        Features::Morph => FeatureKind::MorphemeNgram,
    }
}

pub fn run_train(a: &ClassesTrainArgs, seed: u64) -> CliResult<Value> {
    let params = logreg_params(&a.logreg)?;
    let seg_params = segmenter_params(&a.segmenter, seed)?;
    require_file(&a.gold)?;
    let gold = load_gold_tsv(&a.gold)?;
    if gold.is_empty() {
        return Err(Error::EmptyInput("no gold records").into());
    }
    let segmenter = match a.features {
        Features::Char => None,
        Features::Morph => {
            let words: Vec<String> = gold.iter().map(|r| r.word.clone()).collect();
            Some(train_segmenter(&words, seg_params)?)
        }
    };
    let (model, trace) = train_classifier(&gold, kind(a.features), a.logreg.cap, segmenter, &params)?;
    ensure_parent(&a.out)?;
    save_classifier(&a.out, &model)?;
    Ok(json!({
        "analysis": "classes-train",
        "records": gold.len(),
        "features": model.vocab.len(),
        "classes": model.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "epochs": trace.losses.len(),
        "final_loss": trace.losses.last(),
        "converged": trace.converged,
        "out": a.out,
    }))
}

fn read_word_list(path: &Path) -> CliResult<Vec<String>> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn label_counts<L: std::fmt::Display>(preds: &[Prediction<L>]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for p in preds {
        *m.entry(p.label.to_string()).or_insert(0) += 1;
    }
    m
}

pub fn run_predict(a: &ClassesPredictArgs, seed: u64) -> CliResult<Value> {
    // the bounds for maxprob do not depend on the class count
    check_reject(&a.reject, SlangClass::ALL.len())?;
    require_file(&a.model)?;
    let (words, source) = match (&a.words, &a.slang) {
        (Some(p), None) => {
            require_file(p)?;
            (read_word_list(p)?, p)
        }
        (None, Some(p)) => (load_slang(p)?.into_iter().map(|e| e.headword).collect(), p),
        _ => return Err(CliError::Usage("give exactly one of --words or --slang".into())),
    };
    let model = load_classifier(&a.model)?;
    check_reject(&a.reject, model.classes.len())?;

    let preds = predict_with_reject(&model, words.iter().map(String::as_str), a.reject.delta, a.reject.score)?;
    let rows: Vec<(String, Prediction<SlangClass>)> = words.into_iter().zip(preds).collect();
    let h = header(seed, vec![input_entry(&a.model)?, input_entry(source)?]);
    ensure_parent(&a.out)?;
    let body = h.wrap(&predictions_csv(&rows)?);
    std::fs::write(&a.out, body).map_err(|e| Error::io(&a.out, e))?;
    let preds: Vec<_> = rows.into_iter().map(|(_, p)| p).collect();
    Ok(json!({
        "analysis": "classes-predict",
        "words": preds.len(),
        "delta": a.reject.delta,
        "score": a.reject.score.to_string(),
        "labels": label_counts(&preds),
        "out": a.out,
    }))
}

fn char_model(train: &[GoldClassRecord], cap: usize, params: &LogRegParams) -> slanglex::Result<ClassifierModel> {
    train_classifier(train, FeatureKind::CharNgram, cap, None, params).map(|(m, _)| m)
}

/// Rule-based analyses of the clipping, reduplicative and blend records.
fn pattern_reports(out: &ReportDir, gold: &[GoldClassRecord], k: usize) -> CliResult<Value> {
    let mut clip_types = BTreeMap::new();
    for r in gold.iter().filter(|r| r.label == SlangClass::Clipping) {
        if let Some(parts) = &r.components {
            *clip_types
                .entry(classify_clipping(&r.word, &parts.join(" ")))
                .or_insert(0u64) += 1;
        }
    }
    let mut redup_types = BTreeMap::new();
    let mut halves = Vec::new();
    for r in gold.iter().filter(|r| r.label == SlangClass::Reduplicative) {
        if let (Ok(t), Ok(p)) = (classify_reduplicative(&r.word), reduplicative_parts(&r.word)) {
            *redup_types.entry(t).or_insert(0u64) += 1;
            halves.push(p);
        }
    }
    out.report("clipping_types.csv", &counts_csv(&clip_types)?)?;
    out.report("reduplicative_types.csv", &counts_csv(&redup_types)?)?;
    out.report("substitutions.csv", &substitution_csv(&substitution_stats(&halves))?)?;
    let blends = gold.iter().filter(|r| r.label == SlangClass::Blend).count();
    let mut summary = json!({
        "clipping_types": clip_types.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
        "reduplicative_types": redup_types.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
    });
    if blends > 0 {
        match blend_suffix_stats(gold, k) {
            Ok(stats) => {
                out.report(
                    "blend_suffixes.csv",
                    &ranked_csv("probability", &stats.distribution.entries)?,
                )?;
                summary["blend_suffixes"] = json!(stats.distribution.entries.len());
            }
            Err(Error::EmptyInput(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(summary)
}

pub fn run_eval(a: &ClassesEvalArgs, seed: u64) -> CliResult<Value> {
    let params = logreg_params(&a.logreg)?;
    let seg_params = segmenter_params(&a.segmenter, seed)?;
    check_reject(&a.reject, SlangClass::ALL.len())?;
    if !(a.test_fraction > 0.0 && a.test_fraction < 1.0) {
        return Err(CliError::Usage(format!(
            "--test-fraction must lie in (0, 1), got {}",
            a.test_fraction
        )));
    }
    let (gold, inputs, source) = match (&a.gold, a.synthetic) {
        (Some(p), None) => {
            require_file(p)?;
            (load_gold_tsv(p)?, vec![input_entry(p)?], "file")
        }
        (None, Some(n)) => {
            if n < 2 {
                return Err(CliError::Usage("--synthetic needs at least 2 words per class".into()));
            }
            (synthetic::generate_gold(n, seed)?, Vec::new(), "synthetic")
        }
        _ => return Err(CliError::Usage("give exactly one of --gold or --synthetic".into())),
    };
    let split = split_gold(&gold, a.test_fraction, seed)?;
    let out = ReportDir::create(&a.out, header(seed, inputs))?;

    let cmp = compare_feature_models(&split, a.logreg.cap, seg_params, &params, seed)?;
    out.report(
        "comparison.csv",
        &key_value_csv(&[
            ("char_ngram", cmp.char_ngram.to_string()),
            ("morpheme", cmp.morpheme.to_string()),
            ("random", cmp.random.to_string()),
            ("test_size", cmp.test_size.to_string()),
        ])?,
    )?;

    let model = char_model(&split.train, a.logreg.cap, &params)?;
    check_reject(&a.reject, model.classes.len())?;
    let preds = predict_with_reject(
        &model,
        split.test.iter().map(|r| r.word.as_str()),
        a.reject.delta,
        a.reject.score,
    )?;
    let mut labels: Vec<OpenSetLabel<SlangClass>> = model.classes.iter().map(|&c| OpenSetLabel::Known(c)).collect();
    labels.push(OpenSetLabel::Rejected);
    let truth: Vec<_> = split.test.iter().map(|r| OpenSetLabel::Known(r.label)).collect();
    let predicted: Vec<_> = preds.iter().map(|p| p.label).collect();
    let cm = ConfusionMatrix::from_pairs(&truth, &predicted, &labels)?;
    out.report("confusion.csv", &confusion_csv(&cm)?)?;
    out.report("class_report.csv", &class_report_csv(&cm.report())?)?;
    let rows: Vec<(String, Prediction<SlangClass>)> = split
        .test
        .iter()
        .map(|r| r.word.clone())
        .zip(preds.iter().cloned())
        .collect();
    out.report("test_predictions.csv", &predictions_csv(&rows)?)?;

    let n_train_classes = model.classes.len();
    let crossval = if n_train_classes >= 3 {
        let report = cross_class_validate_split(
            &split,
            |train| char_model(train, a.logreg.cap, &params),
            a.reject.delta,
            a.reject.score,
        )?;
        out.report("crossval.csv", &crossval_csv(&report)?)?;
        Some(report.mean_weighted_f1)
    } else {
        None
    };
    let patterns = pattern_reports(&out, &gold, 25)?;

    Ok(json!({
        "analysis": "classes-eval",
        "source": source,
        "records": gold.len(),
        "train": split.train.len(),
        "test": split.test.len(),
        "weighted_f1": {"char_ngram": cmp.char_ngram, "morpheme": cmp.morpheme, "random": cmp.random},
        "ordering_holds": cmp.ordering_holds(),
        "open_set_weighted_f1": cm.weighted_f1(),
        "delta": a.reject.delta,
        "score": a.reject.score.to_string(),
        "crossval_mean_weighted_f1": crossval,
        "patterns": patterns,
        "out": a.out,
    }))
}
