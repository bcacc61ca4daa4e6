use serde_json::{json, Value};
use slanglex::corpus::load_standard_tsv;
use slanglex::phonology::{profile, Phonemizer, PronouncingTable};
use slanglex::report::{manner_csv, odds_ratio_csv};

use crate::args::PhonologyArgs;
use crate::error::{CliError, CliResult};
use crate::io::{header, input_entry, load_slang, require_file, summary_rows, ReportDir};

pub fn run(a: &PhonologyArgs, seed: u64) -> CliResult<Value> {
    if !(a.smoothing > 0.0 && a.smoothing.is_finite()) {
        return Err(CliError::Usage(format!(
            "--smoothing must be positive, got {}",
            a.smoothing
        )));
    }
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    require_file(&a.standard)?;
    let mut inputs = vec![input_entry(&a.slang)?, input_entry(&a.standard)?];
    let phonemizer = match &a.pronouncing_table {
        Some(p) => {
            require_file(p)?;
            inputs.push(input_entry(p)?);
            Phonemizer {
                table: PronouncingTable::load(p)?,
                ..Phonemizer::bundled()
            }
        }
        None => Phonemizer::bundled(),
    };
    let slang = load_slang(&a.slang)?;
    let standard = load_standard_tsv(&a.standard)?;

    let prof = profile(
        slang.iter().map(|e| e.headword.as_str()),
        standard.words.iter().map(String::as_str),
        &phonemizer,
        a.smoothing,
        a.alpha,
    )?;
    let out = ReportDir::create(&a.out, header(seed, inputs))?;
    out.report("phoneme_odds.csv", &odds_ratio_csv(&prof.odds)?)?;
    out.report("manners.csv", &manner_csv(&prof.manners)?)?;

    let significant: Vec<String> = prof
        .manners
        .iter()
        .flat_map(|(pos, rows)| {
            rows.iter()
                .filter(|c| c.test.is_some_and(|t| t.significant))
                .map(move |c| format!("{pos}:{}", c.manner.name()))
        })
        .collect();
    Ok(json!({
        "analysis": "phonology",
        "slang_types": prof.slang_types,
        "standard_types": prof.standard_types,
        "slang_fallback": prof.slang_fallback,
        "standard_fallback": prof.standard_fallback,
        "unconvertible": prof.failed.len(),
        "top_phonemes": summary_rows(prof.odds.top(5).iter().map(|r| r.phoneme.symbol())),
        "significant_manners": significant,
        "out": a.out,
    }))
}
