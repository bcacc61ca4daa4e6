use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};
use slanglex::corpus::{parse_slang_jsonl, LexiconEntry};
use slanglex::report::ReportHeader;
use slanglex::store::{decode_corpus, MAGIC};
use slanglex::Error;

use crate::error::{CliError, CliResult};

pub fn require_file(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("input file not found: {}", path.display())))
    }
}

pub fn require_dir(path: &Path) -> CliResult<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "input directory not found: {}",
            path.display()
        )))
    }
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e).into())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Header entry for an input: bare file name plus content digest, so reports
/// do not depend on where the inputs live.
pub fn input_entry(path: &Path) -> CliResult<(String, String)> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((name, sha256_hex(&read_bytes(path)?)))
}

/// Digest of a directory's regular files, in name order.
pub fn dir_entry(dir: &Path) -> CliResult<(String, String)> {
    let mut names: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    names.sort();
    let mut h = Sha256::new();
    for p in &names {
        h.update(p.file_name().unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        h.update(read_bytes(p)?);
        h.update([0]);
    }
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((format!("{name}/"), format!("{:x}", h.finalize())))
}

pub fn header(seed: u64, inputs: Vec<(String, String)>) -> ReportHeader {
    ReportHeader {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        inputs,
    }
}

/// Writes report files into one output directory.
pub struct ReportDir {
    pub dir: PathBuf,
    pub header: ReportHeader,
}

impl ReportDir {
    pub fn create(dir: &Path, header: ReportHeader) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            header,
        })
    }

    /// Writes `body` prefixed with the provenance header.
    pub fn report(&self, name: &str, body: &str) -> CliResult<PathBuf> {
        self.raw(name, &self.header.wrap(body))
    }

    /// Writes `body` as is, for formats that cannot carry comment lines.
    pub fn raw(&self, name: &str, body: &str) -> CliResult<PathBuf> {
        let p = self.dir.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        Ok(p)
    }
}

pub fn ensure_parent(path: &Path) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(())
}

/// A slang corpus in either the binary container or JSON lines, told apart
/// by the container magic.
pub fn load_slang(path: &Path) -> CliResult<Vec<LexiconEntry>> {
    require_file(path)?;
    let bytes = read_bytes(path)?;
    if bytes.starts_with(MAGIC) {
        Ok(decode_corpus(&bytes)?)
    } else {
        Ok(parse_slang_jsonl(&bytes[..])?)
    }
}

/// One machine-readable line per analysis on stdout.
pub fn summary(value: Value) {
    println!("{value}");
}

pub fn summary_rows<I, S>(items: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: ToString,
{
    items.into_iter().map(|s| s.to_string()).collect()
}
