//! CSV renderings of analysis results. The CLI writes exactly these strings,
//! so library callers can reproduce its reports byte for byte.
//!
//! Floats use Rust's shortest round-trip formatting.

use std::collections::BTreeMap;
use std::fmt::Display;

use crate::embeddings::SkipgramTrace;
use crate::error::{Error, Result};
use crate::morphology::{AffixDistribution, Segmentation};
use crate::phonology::{MannerComparison, OddsRatioReport, Position};
use crate::slangclass::{CrossClassReport, Prediction, SubstitutionStats};
use crate::social::{NamePrejudiceReport, ReligionMatrix};
use crate::stats::{ClassReport, ConfusionMatrix};

/// Provenance lines prefixed to every report file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportHeader {
    pub tool_version: String,
    pub seed: u64,
    /// (input name, hex SHA-256 of its bytes)
    pub inputs: Vec<(String, String)>,
}

impl ReportHeader {
    pub fn render(&self) -> String {
        let mut s = format!("# slanglex {}\n# seed {}\n", self.tool_version, self.seed);
        for (name, digest) in &self.inputs {
            s.push_str(&format!("# input {name} sha256:{digest}\n"));
        }
        s
    }

    pub fn wrap(&self, body: &str) -> String {
        self.render() + body
    }
}

fn table<I>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Container(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn opt<T: Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn odds_ratio_csv(report: &OddsRatioReport) -> Result<String> {
    table(
        &["rank", "phoneme", "manner", "p_slang", "p_std", "odds_ratio"],
        report.rows.iter().map(|r| {
            vec![
                r.rank.to_string(),
                r.phoneme.symbol().to_string(),
                r.phoneme.manner().name().to_string(),
                r.p_slang.to_string(),
                r.p_std.to_string(),
                r.ratio.to_string(),
            ]
        }),
    )
}

/// Rows for several positions can be concatenated by passing each slice in turn.
pub fn manner_csv(comparisons: &[(Position, Vec<MannerComparison>)]) -> Result<String> {
    table(
        &[
            "position",
            "manner",
            "p_slang",
            "p_std",
            "z",
            "p_value",
            "adjusted_alpha",
            "significant",
        ],
        comparisons.iter().flat_map(|(pos, rows)| {
            rows.iter().map(move |c| {
                vec![
                    pos.to_string(),
                    c.manner.name().to_string(),
                    c.p_slang.to_string(),
                    c.p_std.to_string(),
                    opt(c.test.map(|t| t.z)),
                    opt(c.test.map(|t| t.p_value)),
                    opt(c.test.map(|t| t.adjusted_alpha)),
                    opt(c.test.map(|t| t.significant)),
                ]
            })
        }),
    )
}

pub fn affix_csv(dists: &[&AffixDistribution]) -> Result<String> {
    table(
        &["side", "rank", "affix", "probability", "cumulative_mass"],
        dists.iter().flat_map(|d| {
            d.entries.iter().enumerate().map(move |(i, (a, p))| {
                vec![
                    d.side.to_string(),
                    (i + 1).to_string(),
                    a.clone(),
                    p.to_string(),
                    d.covered_mass_at_k[&(i + 1)].to_string(),
                ]
            })
        }),
    )
}

pub fn segmentation_csv(segs: &[Segmentation]) -> Result<String> {
    table(
        &["word", "morphs"],
        segs.iter().map(|s| vec![s.word.clone(), s.morphs.join("+")]),
    )
}

pub fn predictions_csv<L: Display>(rows: &[(String, Prediction<L>)]) -> Result<String> {
    table(
        &["word", "label", "score"],
        rows.iter()
            .map(|(w, p)| vec![w.clone(), p.label.to_string(), p.score.to_string()]),
    )
}

/// First column is the true label; remaining columns are predictions.
pub fn confusion_csv<L: Ord + Clone + Display>(cm: &ConfusionMatrix<L>) -> Result<String> {
    let mut header = vec!["truth".to_string()];
    header.extend(cm.labels().iter().map(|l| l.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    table(
        &header,
        cm.labels().iter().zip(cm.counts()).map(|(l, row)| {
            std::iter::once(l.to_string())
                .chain(row.iter().map(|c| c.to_string()))
                .collect()
        }),
    )
}

pub fn class_report_csv<L: Display>(rows: &[ClassReport<L>]) -> Result<String> {
    table(
        &["label", "precision", "recall", "f1", "support"],
        rows.iter().map(|r| {
            vec![
                r.label.to_string(),
                r.precision.to_string(),
                r.recall.to_string(),
                r.f1.to_string(),
                r.support.to_string(),
            ]
        }),
    )
}

pub fn crossval_csv(report: &CrossClassReport) -> Result<String> {
    table(
        &["held_out", "weighted_f1"],
        report
            .folds
            .iter()
            .map(|f| vec![f.held_out.to_string(), f.weighted_f1.to_string()])
            .chain(std::iter::once(vec![
                "mean".into(),
                report.mean_weighted_f1.to_string(),
            ])),
    )
}

pub fn key_value_csv(rows: &[(&str, String)]) -> Result<String> {
    table(
        &["key", "value"],
        rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()]),
    )
}

pub fn counts_csv<K: Display>(counts: &BTreeMap<K, u64>) -> Result<String> {
    let total: u64 = counts.values().sum();
    table(
        &["type", "count", "proportion"],
        counts.iter().map(|(k, &c)| {
            let p = if total == 0 { 0.0 } else { c as f64 / total as f64 };
            vec![k.to_string(), c.to_string(), p.to_string()]
        }),
    )
}

pub fn substitution_csv(stats: &SubstitutionStats) -> Result<String> {
    table(
        &["from", "to", "count", "probability"],
        stats.counts.iter().flat_map(|(from, row)| {
            row.iter().map(move |(to, c)| {
                vec![
                    from.to_string(),
                    to.to_string(),
                    c.to_string(),
                    stats.table[from][to].to_string(),
                ]
            })
        }),
    )
}

/// `(token, value)` pairs with a 1-based rank column.
pub fn ranked_csv(value_name: &str, rows: &[(String, f64)]) -> Result<String> {
    table(
        &["rank", "token", value_name],
        rows.iter()
            .enumerate()
            .map(|(i, (t, v))| vec![(i + 1).to_string(), t.clone(), v.to_string()]),
    )
}

pub fn loss_csv(trace: &SkipgramTrace) -> Result<String> {
    table(
        &["epoch", "mean_loss", "pairs"],
        trace
            .epoch_losses
            .iter()
            .zip(&trace.pairs_per_epoch)
            .enumerate()
            .map(|(i, (l, n))| vec![(i + 1).to_string(), l.to_string(), n.to_string()]),
    )
}

/// One block of ranked neighbours per query token.
pub fn neighbours_csv(rows: &[(String, Vec<(String, f64)>)]) -> Result<String> {
    table(
        &["query", "rank", "token", "cosine"],
        rows.iter().flat_map(|(q, nb)| {
            nb.iter()
                .enumerate()
                .map(move |(i, (t, c))| vec![q.clone(), (i + 1).to_string(), t.clone(), c.to_string()])
        }),
    )
}

pub fn name_prejudice_csv(report: &NamePrejudiceReport) -> Result<String> {
    table(
        &["group", "name", "sexprej"],
        [("female", &report.female), ("male", &report.male)]
            .into_iter()
            .flat_map(|(g, s)| {
                s.names
                    .iter()
                    .map(move |(n, v)| vec![g.to_string(), n.clone(), v.to_string()])
            }),
    )
}

pub fn name_prejudice_summary_csv(report: &NamePrejudiceReport) -> Result<String> {
    key_value_csv(&[
        ("female_mean", report.female.mean.to_string()),
        ("female_n", report.female.n.to_string()),
        ("male_mean", report.male.mean.to_string()),
        ("male_n", report.male.n.to_string()),
        ("difference", report.test.difference.to_string()),
        ("p_value", report.test.p_value.to_string()),
        ("exact", report.test.exact.to_string()),
        ("permutations", report.test.permutations.to_string()),
        ("unknown_gender", report.unknown_gender.len().to_string()),
        ("out_of_vocabulary", report.out_of_vocabulary.len().to_string()),
    ])
}

/// Religions as rows, prejudices as columns.
pub fn religion_matrix_csv(m: &ReligionMatrix, standardized: bool) -> Result<String> {
    let mut header = vec!["religion"];
    header.extend(m.prejudices.iter().map(String::as_str));
    let values = if standardized { &m.standardized } else { &m.raw };
    table(
        &header,
        m.religions.iter().zip(values).map(|(r, row)| {
            std::iter::once(r.clone())
                .chain(row.iter().map(|x| x.to_string()))
                .collect()
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_quoting() {
        let h = ReportHeader {
            tool_version: "0.1.0".into(),
            seed: 7,
            inputs: vec![("gold.tsv".into(), "ab".into())],
        };
        let body = ranked_csv("cosine", &[("a,b".into(), 0.5)]).unwrap();
        assert_eq!(
            h.wrap(&body),
            "# slanglex 0.1.0\n# seed 7\n# input gold.tsv sha256:ab\nrank,token,cosine\n1,\"a,b\",0.5\n"
        );
    }
}
