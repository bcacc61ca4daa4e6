//! Config files are flat `key = value` lines (`#` comments). Keys are long
//! flag names without the dashes, e.g. `min-votes = 100`. Values are spliced
//! into the argument list unless the flag was given explicitly, which yields
//! flags > config > defaults. Keys the chosen subcommand does not accept are
//! ignored, so one file can serve several subcommands; keys no subcommand
//! accepts are an error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::error::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// The innermost subcommand named on the command line.
fn selected<'a>(root: &'a Command, args: &[OsString]) -> &'a Command {
    let mut cmd = root;
    let mut skip_next = false;
    for a in args.iter().skip(1) {
        if skip_next {
            skip_next = false;
            continue;
        }
        let s = a.to_string_lossy();
        if s == "--config" {
            skip_next = true;
            continue;
        }
        if let Some(sub) = cmd.find_subcommand(s.as_ref()) {
            cmd = sub;
        }
    }
    cmd
}

fn all_longs(cmd: &Command, acc: &mut BTreeSet<String>) {
    for a in cmd.get_arguments() {
        if let Some(l) = a.get_long() {
            acc.insert(l.to_string());
        }
    }
    for s in cmd.get_subcommands() {
        all_longs(s, acc);
    }
}

/// Returns `args` with config values appended.
pub fn apply(root: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse(&text)?;

    let mut known = BTreeSet::new();
    all_longs(root, &mut known);
    let cmd = selected(root, &args);
    let given: BTreeSet<String> = args
        .iter()
        .filter_map(|a| {
            a.to_str()?
                .strip_prefix("--")
                .map(|s| s.split('=').next().unwrap_or(s).to_string())
        })
        .collect();

    let mut out = args.clone();
    for (key, value) in entries {
        if !known.contains(&key) || key == "config" {
            return Err(CliError::Usage(format!("unknown config key `{key}`")));
        }
        // globals live on the root until clap propagates them
        let Some(arg) = cmd
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
        else {
            continue;
        };
        if given.contains(&key) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key `{key}` expects true or false"))),
            }
        } else {
            out.push(format!("--{key}={value}").into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let kv = parse("# c\nmin_votes = 5\n\ncap=10\n").unwrap();
        assert_eq!(kv, vec![("min-votes".into(), "5".into()), ("cap".into(), "10".into())]);
        assert!(parse("novalue\n").is_err());
    }
}
