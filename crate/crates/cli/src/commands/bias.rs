use std::path::Path;

use serde_json::{json, Value};
use slanglex::embeddings::EmbeddingTable;
use slanglex::report::{
    key_value_csv, name_prejudice_csv, name_prejudice_summary_csv, ranked_csv, religion_matrix_csv,
};
use slanglex::social::{
    direct_bias, gender_direction, name_prejudice_comparison, occupation_projections, parse_term_list,
    religious_prejudice_matrix, BiasLexicons, GenderLexicon,
};
use slanglex::Error;

use crate::args::{BiasCommon, BiasGenderArgs, BiasReligionArgs, BiasSexprejArgs};
use crate::error::{CliError, CliResult};
use crate::io::{dir_entry, header, input_entry, require_dir, require_file, ReportDir};

/// Names to score, one per line, in the lexicon directory.
pub const NAMES_FILE: &str = "names.txt";
/// `name,gender` CSV in the lexicon directory.
pub const NAME_GENDERS_FILE: &str = "names.csv";

struct Loaded {
    table: EmbeddingTable,
    lexicons: BiasLexicons,
    out: ReportDir,
}

fn load(c: &BiasCommon, seed: u64) -> CliResult<Loaded> {
    require_file(&c.embeddings)?;
    require_dir(&c.lexicons)?;
    let inputs = vec![input_entry(&c.embeddings)?, dir_entry(&c.lexicons)?];
    let lexicons = BiasLexicons::load_dir(&c.lexicons)?;
    let table = EmbeddingTable::load_text(&c.embeddings)?;
    let out = ReportDir::create(&c.out, header(seed, inputs))?;
    Ok(Loaded { table, lexicons, out })
}

pub fn run_gender(a: &BiasGenderArgs, seed: u64) -> CliResult<Value> {
    if !(a.strictness > 0.0 && a.strictness.is_finite()) {
        return Err(CliError::Usage(format!(
            "--strictness must be positive, got {}",
            a.strictness
        )));
    }
    let Loaded { table, lexicons, out } = load(&a.common, seed)?;
    let g = gender_direction(&table, &lexicons.gender_pairs)?;
    let db = direct_bias(&table, &lexicons.occupations, &g.vector, a.strictness)?;
    let proj = occupation_projections(&table, &lexicons.occupations, &g.vector)?;
    out.report(
        "direct_bias.csv",
        &key_value_csv(&[
            ("direct_bias", db.value.to_string()),
            ("strictness", a.strictness.to_string()),
            ("occupations_evaluated", db.evaluated.to_string()),
            ("occupations_missing", db.missing.len().to_string()),
            ("gender_pairs_used", g.pairs_used.to_string()),
            ("gender_pairs_missing", g.missing.len().to_string()),
        ])?,
    )?;
    out.report("occupation_projections.csv", &ranked_csv("projection", &proj)?)?;
    let ends = |xs: &[(String, f64)]| xs.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
    Ok(json!({
        "analysis": "bias-gender",
        "direct_bias": db.value,
        "occupations_evaluated": db.evaluated,
        "gender_pairs_used": g.pairs_used,
        "most_female": ends(&proj[..proj.len().min(3)]),
        "most_male": ends(&proj[proj.len().saturating_sub(3)..]),
        "out": a.common.out,
    }))
}

fn read_text(path: &Path) -> CliResult<String> {
    require_file(path)?;
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e).into())
}

pub fn run_sexprej(a: &BiasSexprejArgs, seed: u64) -> CliResult<Value> {
    if a.permutations == 0 {
        return Err(CliError::Usage("--permutations must be at least 1".into()));
    }
    let names_path = a.common.lexicons.join(NAMES_FILE);
    let genders_path = a.common.lexicons.join(NAME_GENDERS_FILE);
    let names = parse_term_list(&read_text(&names_path)?);
    require_file(&genders_path)?;
    let Loaded { table, lexicons, out } = load(&a.common, seed)?;
    let genders = GenderLexicon::load_csv(&genders_path)?;
    let report = name_prejudice_comparison(
        &table,
        &names,
        &genders,
        &lexicons.prejudice_terms,
        a.permutations,
        seed,
    )?;
    out.report("name_prejudice.csv", &name_prejudice_csv(&report)?)?;
    out.report("name_prejudice_summary.csv", &name_prejudice_summary_csv(&report)?)?;
    Ok(json!({
        "analysis": "bias-sexprej",
        "female_mean": report.female.mean,
        "male_mean": report.male.mean,
        "difference": report.test.difference,
        "p_value": report.test.p_value,
        "exact": report.test.exact,
        "unknown_gender": report.unknown_gender.len(),
        "out_of_vocabulary": report.out_of_vocabulary.len(),
        "out": a.common.out,
    }))
}

pub fn run_religion(a: &BiasReligionArgs, seed: u64) -> CliResult<Value> {
    let Loaded { table, lexicons, out } = load(&a.common, seed)?;
    let m = religious_prejudice_matrix(&table, &lexicons.religious_terms, &lexicons.religious_prejudices)?;
    out.report("religion_raw.csv", &religion_matrix_csv(&m, false)?)?;
    out.report("religion_standardized.csv", &religion_matrix_csv(&m, true)?)?;
    Ok(json!({
        "analysis": "bias-religion",
        "religions": m.religions.len(),
        "prejudices": m.prejudices.len(),
        "overall_mean": m.overall_mean,
        "missing": m.missing,
        "out": a.common.out,
    }))
}
