use std::collections::BTreeSet;

use serde_json::{json, Value};
use slanglex::corpus::load_standard_tsv;
use slanglex::morphology::{affix_distribution, normalize, segment, train_segmenter, AffixSide, Segmentation};
use slanglex::report::{affix_csv, segmentation_csv};

use super::segmenter_params;
use crate::args::MorphologyArgs;
use crate::error::{CliError, CliResult};
use crate::io::{header, input_entry, load_slang, require_file, ReportDir};

/// Trains on `words`, writes `<side>_segmenter.tsv`, `<side>_segmentations.csv`
/// and `<side>_affixes.csv`, and returns the summary fields for that side.
fn analyze(out: &ReportDir, side: &str, words: Vec<String>, a: &MorphologyArgs, seed: u64) -> CliResult<Value> {
    let model = train_segmenter(&words, segmenter_params(&a.segmenter, seed)?)?;
    let mut seen = BTreeSet::new();
    let segs: Vec<Segmentation> = words
        .iter()
        .filter(|w| seen.insert(normalize(w)))
        .map(|w| segment(&model, w))
        .collect();
    let prefixes = affix_distribution(&segs, AffixSide::Prefix, a.top_k)?;
    let suffixes = affix_distribution(&segs, AffixSide::Suffix, a.top_k)?;

    let mut tsv = Vec::new();
    model.write_tsv(&mut tsv)?;
    out.raw(
        &format!("{side}_segmenter.tsv"),
        &String::from_utf8(tsv).expect("tsv is UTF-8"),
    )?;
    out.report(&format!("{side}_segmentations.csv"), &segmentation_csv(&segs)?)?;
    out.report(&format!("{side}_affixes.csv"), &affix_csv(&[&prefixes, &suffixes])?)?;

    let mass =
        |d: &slanglex::morphology::AffixDistribution| d.covered_mass_at_k.values().last().copied().unwrap_or(0.0);
    Ok(json!({
        "word_types": segs.len(),
        "morph_types": model.morph_counts.len(),
        "code_length_bits": model.total_code_length,
        "prefix_mass_at_k": mass(&prefixes),
        "suffix_mass_at_k": mass(&suffixes),
    }))
}

pub fn run(a: &MorphologyArgs, seed: u64) -> CliResult<Value> {
    if a.top_k == 0 {
        return Err(CliError::Usage("--top-k must be at least 1".into()));
    }
    segmenter_params(&a.segmenter, seed)?;
    let mut inputs = vec![input_entry(&a.slang)?];
    if let Some(p) = &a.standard {
        require_file(p)?;
        inputs.push(input_entry(p)?);
    }
    let slang = load_slang(&a.slang)?;
    let out = ReportDir::create(&a.out, header(seed, inputs))?;

    let slang_words = slang.iter().map(|e| e.headword.clone()).collect();
    let mut result = json!({
        "analysis": "morphology",
        "top_k": a.top_k,
        "slang": analyze(&out, "slang", slang_words, a, seed)?,
    });
    if let Some(p) = &a.standard {
        let std_words = load_standard_tsv(p)?.words.into_iter().collect();
        result["standard"] = analyze(&out, "standard", std_words, a, seed)?;
    }
    result["out"] = json!(a.out);
    Ok(result)
}
