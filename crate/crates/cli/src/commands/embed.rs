use serde_json::{json, Value};
use slanglex::embeddings::{build_usage_corpus, nearest, train_skipgram, TrainingConfig};
use slanglex::report::{loss_csv, neighbours_csv};
use slanglex::Error;

use crate::args::EmbedArgs;
use crate::error::{invalid, CliError, CliResult};
use crate::io::{header, input_entry, load_slang, ReportDir};

pub fn config(a: &EmbedArgs, seed: u64) -> CliResult<TrainingConfig> {
    let c = TrainingConfig {
        dimension: a.dimension,
        window: a.window,
        negatives: a.negatives,
        epochs: a.epochs,
        initial_lr: a.lr,
        min_count: a.min_count,
        subsample: a.subsample,
        seed,
    };
    invalid(c.validate())?;
    Ok(c)
}

/// Writes `vectors.txt`, `loss.csv` and, when queries are given,
/// `neighbours.csv`.
pub fn run(a: &EmbedArgs, seed: u64) -> CliResult<Value> {
    let cfg = config(a, seed)?;
    if a.neighbours_k == 0 {
        return Err(CliError::Usage("--neighbours-k must be at least 1".into()));
    }
    let inputs = vec![input_entry(&a.slang)?];
    let entries = load_slang(&a.slang)?;
    let corpus = build_usage_corpus(&entries);
    let (table, trace) = train_skipgram(&corpus, &cfg)?;

    let out = ReportDir::create(&a.out, header(seed, inputs))?;
    let mut text = Vec::new();
    table.write_text(&mut text)?;
    out.raw("vectors.txt", &String::from_utf8(text).expect("vector text is UTF-8"))?;
    out.report("loss.csv", &loss_csv(&trace)?)?;

    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for q in &a.neighbours {
        match nearest(&table, q, a.neighbours_k) {
            Ok(nb) => rows.push((q.clone(), nb)),
            Err(Error::OutOfVocabulary(_)) => missing.push(q.clone()),
            Err(e) => return Err(e.into()),
        }
    }
    if !a.neighbours.is_empty() {
        out.report("neighbours.csv", &neighbours_csv(&rows)?)?;
    }
    Ok(json!({
        "analysis": "embed",
        "sentences": corpus.len(),
        "vocabulary": table.len(),
        "dimension": table.dimension,
        "first_epoch_loss": trace.epoch_losses.first(),
        "last_epoch_loss": trace.epoch_losses.last(),
        "neighbour_queries_missing": missing,
        "out": a.out,
    }))
}
