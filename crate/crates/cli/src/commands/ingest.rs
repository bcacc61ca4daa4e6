use std::fs::File;
use std::io::{BufWriter, Write};

use serde_json::{json, Value};
use slanglex::corpus::{filter_by_votes, load_standard_tsv, write_slang_jsonl};
use slanglex::store::save_corpus;
use slanglex::Error;

use crate::args::{IngestArgs, IngestFormat};
use crate::error::CliResult;
use crate::io::{ensure_parent, load_slang, require_file};

pub fn run(a: &IngestArgs, _seed: u64) -> CliResult<Value> {
    require_file(&a.input)?;
    ensure_parent(&a.out)?;
    let create = || {
        File::create(&a.out)
            .map(BufWriter::new)
            .map_err(|e| Error::io(&a.out, e))
    };
    match a.format {
        IngestFormat::SlangJsonl => {
            let entries = load_slang(&a.input)?;
            let kept = filter_by_votes(&entries, a.min_votes);
            if a.out.extension().is_some_and(|e| e == "jsonl") {
                let mut w = create()?;
                write_slang_jsonl(&kept, &mut w)?;
                w.flush().map_err(|e| Error::io(&a.out, e))?;
            } else {
                save_corpus(&a.out, &kept)?;
            }
            Ok(json!({
                "analysis": "ingest",
                "format": "slang-jsonl",
                "read": entries.len(),
                "kept": kept.len(),
                "min_votes": a.min_votes,
                "out": a.out,
            }))
        }
        IngestFormat::StandardTsv => {
            let lex = load_standard_tsv(&a.input)?;
            let mut w = create()?;
            let io = |e| Error::io(&a.out, e);
            writeln!(w, "# word\tdefinition").map_err(io)?;
            for word in &lex.words {
                match lex.definitions.get(word) {
                    Some(defs) if !defs.is_empty() => {
                        for d in defs {
                            writeln!(w, "{word}\t{d}").map_err(io)?;
                        }
                    }
                    _ => writeln!(w, "{word}").map_err(io)?,
                }
            }
            w.flush().map_err(io)?;
            Ok(json!({
                "analysis": "ingest",
                "format": "standard-tsv",
                "read": lex.len(),
                "kept": lex.len(),
                "out": a.out,
            }))
        }
    }
}
