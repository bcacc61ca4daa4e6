use std::collections::BTreeSet;

use serde_json::{json, Value};
use slanglex::embeddings::EmbeddingTable;
use slanglex::report::{class_report_csv, confusion_csv, predictions_csv};
use slanglex::slangclass::{predict_with_reject, ScoreType};
use slanglex::social::{evaluate_subject_model, labeled_headwords, load_subject_tsv, KnnMetric, KnnModel};
use slanglex::store::save_knn;

use crate::args::{Metric, SubjectsArgs};
use crate::error::{CliError, CliResult};
use crate::io::{header, input_entry, load_slang, require_file, ReportDir};

pub fn run(a: &SubjectsArgs, seed: u64) -> CliResult<Value> {
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    require_file(&a.embeddings)?;
    require_file(&a.test)?;
    let inputs = vec![
        input_entry(&a.slang)?,
        input_entry(&a.embeddings)?,
        input_entry(&a.test)?,
    ];
    let entries = load_slang(&a.slang)?;
    let table = EmbeddingTable::load_text(&a.embeddings)?;
    let test = load_subject_tsv(&a.test)?;

    let held_out: BTreeSet<&str> = test.iter().map(|(w, _)| w.as_str()).collect();
    let refs: Vec<_> = labeled_headwords(&entries)
        .into_iter()
        .filter(|(w, _)| !held_out.contains(w.as_str()))
        .collect();
    let metric = match a.metric {
        Metric::Cosine => KnnMetric::Cosine,
        Metric::Euclidean => KnnMetric::Euclidean,
    };
    let (model, missing_refs) = KnnModel::from_embedding(&table, &refs, a.k, metric)?;
    let eval = evaluate_subject_model(&model, &test, &table)?;

    let found: Vec<(&String, &[f64])> = test.iter().filter_map(|(w, _)| table.get(w).map(|v| (w, v))).collect();
    // a zero threshold never rejects: the top vote share is at least 1/k
    let preds = predict_with_reject(&model, found.iter().map(|(_, v)| *v), 0.0, ScoreType::MaxProb)?;
    let rows: Vec<_> = found.iter().map(|(w, _)| (*w).clone()).zip(preds).collect();

    let out = ReportDir::create(&a.out, header(seed, inputs))?;
    out.report("confusion.csv", &confusion_csv(&eval.confusion)?)?;
    out.report("class_report.csv", &class_report_csv(&eval.confusion.report())?)?;
    out.report("predictions.csv", &predictions_csv(&rows)?)?;
    save_knn(a.out.join("knn.bin"), &model)?;

    Ok(json!({
        "analysis": "subjects",
        "references": model.references.len(),
        "references_missing": missing_refs.len(),
        "test_evaluated": eval.truth.len(),
        "test_missing": eval.missing,
        "k": a.k,
        "weighted_f1": eval.weighted_f1,
        "out": a.out,
    }))
}
