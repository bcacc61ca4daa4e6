use std::path::PathBuf;

use serde_json::{json, Value};
use slanglex::fixtures;
use slanglex::social::load_subject_tsv;

use super::{bias, classes, embed, ingest, morphology, phonology, subjects};
use crate::args::*;
use crate::error::CliResult;
use crate::io::{require_dir, require_file, summary};

struct Inputs {
    slang: PathBuf,
    standard: PathBuf,
    gold: PathBuf,
    subjects_test: PathBuf,
    lexicons: PathBuf,
}

fn inputs(a: &PipelineArgs) -> CliResult<Inputs> {
    if a.fixtures {
        let p = fixtures::materialize(a.out.join("inputs"))?;
        return Ok(Inputs {
            slang: p.slang,
            standard: p.standard,
            gold: p.gold,
            subjects_test: p.subjects_test,
            lexicons: p.lexicons,
        });
    }
    // clap guarantees presence when --fixtures is absent
    let get = |p: &Option<PathBuf>| p.clone().expect("required without --fixtures");
    let i = Inputs {
        slang: get(&a.slang),
        standard: get(&a.standard),
        gold: get(&a.gold),
        subjects_test: get(&a.subjects_test),
        lexicons: get(&a.lexicons),
    };
    for f in [&i.slang, &i.standard, &i.gold, &i.subjects_test] {
        require_file(f)?;
    }
    require_dir(&i.lexicons)?;
    Ok(i)
}

/// Runs every analysis in order, printing each summary line as it finishes.
/// Each step is the corresponding subcommand with its outputs under `out`.
pub fn run(a: &PipelineArgs, seed: u64) -> CliResult<Value> {
    classes::logreg_params(&a.logreg)?;
    let i = inputs(a)?;
    let out = &a.out;
    let segmenter = SegmenterArgs {
        split_penalty: 0.0,
        max_iters: 10,
        keep_hyphens: false,
    };
    let mut steps = Vec::new();
    let mut record = |v: Value| {
        steps.push(v["analysis"].clone());
        summary(v);
    };

    let corpus = out.join("corpus.bin");
    record(ingest::run(
        &IngestArgs {
            input: i.slang.clone(),
            format: IngestFormat::SlangJsonl,
            min_votes: a.min_votes,
            out: corpus.clone(),
        },
        seed,
    )?);
    record(phonology::run(
        &PhonologyArgs {
            slang: corpus.clone(),
            standard: i.standard.clone(),
            out: out.join("phonology"),
            smoothing: 1e-6,
            alpha: 0.05,
            pronouncing_table: None,
        },
        seed,
    )?);
    record(morphology::run(
        &MorphologyArgs {
            slang: corpus.clone(),
            standard: Some(i.standard.clone()),
            out: out.join("morphology"),
            top_k: 25,
            segmenter: segmenter.clone(),
        },
        seed,
    )?);

    let eval = |gold: Option<PathBuf>, synthetic: Option<usize>, dir: &str| ClassesEvalArgs {
        gold,
        synthetic,
        test_fraction: 0.1,
        out: out.join("classes").join(dir),
        logreg: a.logreg.clone(),
        reject: a.reject.clone(),
        segmenter: segmenter.clone(),
    };
    record(classes::run_eval(&eval(Some(i.gold.clone()), None, "gold"), seed)?);
    record(classes::run_eval(&eval(None, Some(a.synthetic), "synthetic"), seed)?);
    let model = out.join("classes").join("model.bin");
    record(classes::run_train(
        &ClassesTrainArgs {
            gold: i.gold.clone(),
            features: Features::Char,
            out: model.clone(),
            logreg: a.logreg.clone(),
            segmenter: segmenter.clone(),
        },
        seed,
    )?);
    record(classes::run_predict(
        &ClassesPredictArgs {
            model,
            words: None,
            slang: Some(corpus.clone()),
            out: out.join("classes").join("slang_predictions.csv"),
            reject: a.reject.clone(),
        },
        seed,
    )?);

    let emb_dir = out.join("embeddings");
    let queries = load_subject_tsv(&i.subjects_test)?
        .into_iter()
        .map(|(w, _)| w)
        .collect();
    record(embed::run(
        &EmbedArgs {
            slang: corpus.clone(),
            out: emb_dir.clone(),
            dimension: a.dimension,
            window: 5,
            negatives: 5,
            epochs: a.epochs,
            lr: 0.025,
            min_count: a.min_count,
            subsample: 1e-3,
            neighbours: queries,
            neighbours_k: 5,
        },
        seed,
    )?);
    let vectors = emb_dir.join("vectors.txt");
    record(subjects::run(
        &SubjectsArgs {
            slang: corpus.clone(),
            embeddings: vectors.clone(),
            test: i.subjects_test.clone(),
            out: out.join("subjects"),
            k: a.k,
            metric: Metric::Cosine,
        },
        seed,
    )?);

    let common = |dir: &str| BiasCommon {
        embeddings: vectors.clone(),
        lexicons: i.lexicons.clone(),
        out: out.join("bias").join(dir),
    };
    record(bias::run_gender(
        &BiasGenderArgs {
            common: common("gender"),
            strictness: 1.0,
        },
        seed,
    )?);
    record(bias::run_sexprej(
        &BiasSexprejArgs {
            common: common("sexprej"),
            permutations: a.permutations,
        },
        seed,
    )?);
    record(bias::run_religion(
        &BiasReligionArgs {
            common: common("religion"),
        },
        seed,
    )?);

    Ok(json!({
        "analysis": "pipeline",
        "fixtures": a.fixtures,
        "seed": seed,
        "steps": steps,
        "out": a.out,
    }))
}
