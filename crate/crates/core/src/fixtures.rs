//! Bundled mini-corpus used by the end-to-end pipeline and the tests.
//!
//! The slang entries and usage examples are synthetic but shaped like a
//! dictionary scrape; the standard list, gold records and lexicons are small
//! hand-made samples.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

pub const SLANG_JSONL: &str = include_str!("../data/fixtures/slang.jsonl");
pub const STANDARD_TSV: &str = include_str!("../data/fixtures/standard.tsv");
pub const GOLD_TSV: &str = include_str!("../data/fixtures/gold.tsv");
pub const SUBJECTS_TEST_TSV: &str = include_str!("../data/fixtures/subjects_test.tsv");

/// Bias lexicons, laid out as the files `BiasLexicons::load_dir` expects.
pub const LEXICONS: &[(&str, &str)] = &[
    (
        "gender_pairs.txt",
        include_str!("../data/fixtures/lexicons/gender_pairs.txt"),
    ),
    ("names.csv", include_str!("../data/fixtures/lexicons/names.csv")),
    ("names.txt", include_str!("../data/fixtures/lexicons/names.txt")),
    (
        "occupations.txt",
        include_str!("../data/fixtures/lexicons/occupations.txt"),
    ),
    ("prejudice.txt", include_str!("../data/fixtures/lexicons/prejudice.txt")),
    ("religions.txt", include_str!("../data/fixtures/lexicons/religions.txt")),
    (
        "religious_prejudices.txt",
        include_str!("../data/fixtures/lexicons/religious_prejudices.txt"),
    ),
];

/// Paths of a materialized fixture set.
#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub slang: PathBuf,
    pub standard: PathBuf,
    pub gold: PathBuf,
    pub subjects_test: PathBuf,
    pub lexicons: PathBuf,
}

/// Writes every fixture under `dir` (created if missing) and returns the paths.
pub fn materialize(dir: impl AsRef<Path>) -> Result<FixturePaths> {
    let dir = dir.as_ref();
    let lexicons = dir.join("lexicons");
    fs::create_dir_all(&lexicons).map_err(|e| Error::io(&lexicons, e))?;
    let paths = FixturePaths {
        slang: dir.join("slang.jsonl"),
        standard: dir.join("standard.tsv"),
        gold: dir.join("gold.tsv"),
        subjects_test: dir.join("subjects_test.tsv"),
        lexicons,
    };
    write(&paths.slang, SLANG_JSONL)?;
    write(&paths.standard, STANDARD_TSV)?;
    write(&paths.gold, GOLD_TSV)?;
    write(&paths.subjects_test, SUBJECTS_TEST_TSV)?;
    for (name, body) in LEXICONS {
        write(&paths.lexicons.join(name), body)?;
    }
    Ok(paths)
}
