//! Rule-based analyzers for clippings, reduplicatives and blends.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SlangClass;
use crate::corpus::GoldClassRecord;
use crate::error::{Error, Result};
use crate::morphology::{rank_affixes, AffixDistribution, AffixSide};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClippingType {
    /// Beginning of the source kept (`nigg` from `nigger`).
    Back,
    /// End of the source kept (`roach` from `cockroach`).
    Fore,
    /// Source is a multiword compound (`slowmo` from `slow motion`).
    Compound,
    Unknown,
}

impl fmt::Display for ClippingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClippingType::Back => "back",
            ClippingType::Fore => "fore",
            ClippingType::Compound => "compound",
            ClippingType::Unknown => "unknown",
        })
    }
}

/// Precedence: compound, then back, then fore. Case-insensitive.
pub fn classify_clipping(clip: &str, source: &str) -> ClippingType {
    let clip = clip.trim().to_lowercase();
    let source = source.trim().to_lowercase();
    if source.contains(char::is_whitespace) {
        ClippingType::Compound
    } else if source.starts_with(&clip) {
        ClippingType::Back
    } else if source.ends_with(&clip) {
        ClippingType::Fore
    } else {
        ClippingType::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReduplicativeType {
    /// `boo boo`
    Dup,
    /// `flip-flop`
    ExVow,
    /// `bitsy-witsy`
    ExCons,
    /// `moodle-schmoodle`
    Shm,
    Unk,
}

impl fmt::Display for ReduplicativeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReduplicativeType::Dup => "DUP",
            ReduplicativeType::ExVow => "EX_VOW",
            ReduplicativeType::ExCons => "EX_CONS",
            ReduplicativeType::Shm => "SHM",
            ReduplicativeType::Unk => "UNK",
        })
    }
}

/// Which letters count as vowels when typing letter exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VowelSet {
    pub y_is_vowel: bool,
}

impl VowelSet {
    pub fn is_vowel(self, c: char) -> bool {
        matches!(c, 'a' | 'e' | 'i' | 'o' | 'u') || (self.y_is_vowel && c == 'y')
    }

    pub fn is_consonant(self, c: char) -> bool {
        c.is_alphabetic() && !self.is_vowel(c)
    }
}

/// Splits a reduplicative into its two lowercased halves on hyphens or
/// whitespace.
pub fn reduplicative_parts(pair: &str) -> Result<(String, String)> {
    let parts: Vec<&str> = pair
        .split(|c: char| c == '-' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    match parts.as_slice() {
        [a, b] => Ok((a.to_lowercase(), b.to_lowercase())),
        _ => Err(Error::InvalidInput(format!(
            "`{pair}` does not split into exactly two parts"
        ))),
    }
}

pub fn classify_reduplicative(pair: &str) -> Result<ReduplicativeType> {
    classify_reduplicative_with(pair, VowelSet::default())
}

/// Precedence: DUP, SHM, EX_VOW, EX_CONS. Pairs whose differing positions mix
/// vowel and consonant swaps are UNK.
pub fn classify_reduplicative_with(pair: &str, vowels: VowelSet) -> Result<ReduplicativeType> {
    let (a, b) = reduplicative_parts(pair)?;
    if a == b {
        return Ok(ReduplicativeType::Dup);
    }
    let onset_len = a
        .char_indices()
        .find(|&(_, c)| !vowels.is_consonant(c))
        .map_or(a.len(), |(i, _)| i);
    let tail = &a[onset_len..];
    for prefix in ["schm", "shm"] {
        if b.strip_prefix(prefix) == Some(tail) && !tail.is_empty() {
            return Ok(ReduplicativeType::Shm);
        }
    }
    let (ac, bc): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    if ac.len() != bc.len() {
        return Ok(ReduplicativeType::Unk);
    }
    let diffs: Vec<(char, char)> = ac.into_iter().zip(bc).filter(|(x, y)| x != y).collect();
    if diffs.iter().all(|&(x, y)| vowels.is_vowel(x) && vowels.is_vowel(y)) {
        Ok(ReduplicativeType::ExVow)
    } else if diffs
        .iter()
        .all(|&(x, y)| vowels.is_consonant(x) && vowels.is_consonant(y))
    {
        Ok(ReduplicativeType::ExCons)
    } else {
        Ok(ReduplicativeType::Unk)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SubstitutionStats {
    /// source letter → replacement letter → probability (rows sum to 1)
    pub table: BTreeMap<char, BTreeMap<char, f64>>,
    pub counts: BTreeMap<char, BTreeMap<char, u64>>,
    /// Pairs skipped because their halves differ in length.
    pub skipped: usize,
}

/// Tallies which letter replaced which at each differing position of
/// equal-length pairs, normalized per source letter.
pub fn substitution_stats(pairs: &[(String, String)]) -> SubstitutionStats {
    let mut stats = SubstitutionStats::default();
    for (a, b) in pairs {
        let (ac, bc): (Vec<char>, Vec<char>) = (a.to_lowercase().chars().collect(), b.to_lowercase().chars().collect());
        if ac.len() != bc.len() {
            stats.skipped += 1;
            continue;
        }
        for (x, y) in ac.into_iter().zip(bc).filter(|(x, y)| x != y) {
            *stats.counts.entry(x).or_default().entry(y).or_insert(0) += 1;
        }
    }
    for (&src, row) in &stats.counts {
        let total: u64 = row.values().sum();
        stats
            .table
            .insert(src, row.iter().map(|(&r, &c)| (r, c as f64 / total as f64)).collect());
    }
    stats
}

/// Longest common suffix of the blend and its final component, lowercased.
pub fn blend_suffix(blend: &str, components: &[String]) -> Option<String> {
    let last = components.last()?;
    let (b, c): (Vec<char>, Vec<char>) = (
        blend.to_lowercase().chars().collect(),
        last.to_lowercase().chars().collect(),
    );
    let n = b.iter().rev().zip(c.iter().rev()).take_while(|(x, y)| x == y).count();
    (n > 0).then(|| b[b.len() - n..].iter().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlendSuffixStats {
    pub distribution: AffixDistribution,
    /// Records that were not blends, had no components, or shared no suffix
    /// with their final component.
    pub skipped: usize,
}

pub fn blend_suffix_stats(blends: &[GoldClassRecord], k: usize) -> Result<BlendSuffixStats> {
    let mut suffixes = Vec::new();
    let mut skipped = 0;
    for r in blends {
        match (r.label, r.components.as_deref()) {
            (SlangClass::Blend, Some(parts)) => match blend_suffix(&r.word, parts) {
                Some(s) => suffixes.push(s),
                None => skipped += 1,
            },
            _ => skipped += 1,
        }
    }
    Ok(BlendSuffixStats {
        distribution: rank_affixes(suffixes, AffixSide::Suffix, k)?,
        skipped,
    })
}
