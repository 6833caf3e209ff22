//! Mining output (JSONL) and comparison reports (JSON, text, CSV).
//!
//! A mining file starts with one header object holding the class, its size and
//! the miner configuration, followed by one object per TIRP in mining order.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miner::{MinedPattern, MinerConfig};
use crate::model::SymbolResolver;
use crate::stats::CohortComparisonReport;
use crate::tirp::{SupportStats, Tirp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiningHeader {
    pub class: String,
    pub cohort_size: usize,
    pub config: MinerConfig,
    pub tirps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TirpLine {
    tirp: String,
    k: usize,
    support: f64,
    entities: usize,
    instances: usize,
}

/// One class's mining result as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningOutput {
    pub header: MiningHeader,
    pub patterns: Vec<MinedPattern>,
}

pub fn write_mining<W: Write>(mut w: W, class: &str, cohort_size: usize, config: &MinerConfig, patterns: &[MinedPattern]) -> Result<()> {
    let header = MiningHeader { class: class.to_string(), cohort_size, config: *config, tirps: patterns.len() };
    let io_err = |e| Error::io("<output>", e);
    let line = serde_json::to_string(&header).map_err(|e| Error::json("mining header", e))?;
    writeln!(w, "{line}").map_err(io_err)?;
    for p in patterns {
        let rec = TirpLine {
            tirp: p.tirp.canonical_string(),
            k: p.tirp.k(),
            support: p.stats.horizontal_support,
            entities: p.stats.supporting_entities,
            instances: p.stats.total_instances,
        };
        let line = serde_json::to_string(&rec).map_err(|e| Error::json("mining record", e))?;
        writeln!(w, "{line}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_mining<R: BufRead>(reader: R, context: &str, resolver: SymbolResolver<'_>) -> Result<MiningOutput> {
    let mut lines = reader.lines().enumerate();
    let read_line = |item: (usize, std::io::Result<String>)| -> Result<(u64, String)> {
        let (i, line) = item;
        line.map(|l| (i as u64 + 1, l)).map_err(|e| Error::io(context, e))
    };
    let Some(first) = lines.next() else {
        return Err(Error::parse(context, 1, "empty file, expected a header line"));
    };
    let (_, text) = read_line(first)?;
    let header: MiningHeader =
        serde_json::from_str(&text).map_err(|e| Error::parse(context, 1, format!("bad header: {e}")))?;
    header.config.validate().map_err(|e| Error::parse(context, 1, e.to_string()))?;

    let mut patterns = Vec::with_capacity(header.tirps);
    for item in lines {
        let (no, text) = read_line(item)?;
        if text.trim().is_empty() {
            continue;
        }
        let rec: TirpLine = serde_json::from_str(&text).map_err(|e| Error::parse(context, no, e.to_string()))?;
        let tirp = Tirp::parse(&rec.tirp, resolver).map_err(|e| Error::parse(context, no, e.to_string()))?;
        if tirp.k() != rec.k {
            return Err(Error::parse(context, no, format!("k is {} but the TIRP has {} symbols", rec.k, tirp.k())));
        }
        if rec.entities > header.cohort_size || rec.instances < rec.entities {
            return Err(Error::parse(context, no, "inconsistent entity and instance counts"));
        }
        let stats = SupportStats::new(rec.entities, rec.instances, header.cohort_size);
        if (stats.horizontal_support - rec.support).abs() > 1e-9 {
            return Err(Error::parse(context, no, format!("support {} does not match {} entities", rec.support, rec.entities)));
        }
        if patterns.last().is_some_and(|p: &MinedPattern| p.tirp >= tirp) {
            return Err(Error::parse(context, no, format!("{} is out of order or repeated", rec.tirp)));
        }
        patterns.push(MinedPattern { tirp, stats });
    }
    if patterns.len() != header.tirps {
        return Err(Error::parse(
            context,
            1,
            format!("header announces {} TIRPs but {} follow", header.tirps, patterns.len()),
        ));
    }
    Ok(MiningOutput { header, patterns })
}

pub fn load_mining(path: impl AsRef<Path>, resolver: SymbolResolver<'_>) -> Result<MiningOutput> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_mining(std::io::BufReader::new(file), &path.display().to_string(), resolver)
}

pub fn write_report<W: Write>(mut w: W, report: &CohortComparisonReport) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| Error::json("report", e))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io("<output>", e))
}

pub fn load_report(path: impl AsRef<Path>) -> Result<CohortComparisonReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: CohortComparisonReport =
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    if report.proportion_tests.len() != 3 {
        return Err(Error::Parse {
            context: path.display().to_string(),
            line: 0,
            message: format!("expected 3 proportion-test rows, found {}", report.proportion_tests.len()),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
}

impl std::str::FromStr for TableFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            other => Err(format!("unknown table format '{other}' (expected text or csv)")),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Proportion-test table: one row per comparison.
pub fn proportion_table(report: &CohortComparisonReport, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("test_description,tested,different,percent\n");
            for r in &report.proportion_tests {
                let _ = writeln!(out, "{},{},{},{}", csv_field(&r.description), r.tested, r.different, r.percent);
            }
        }
        TableFormat::Text => {
            let width = report.proportion_tests.iter().map(|r| r.description.len()).max().unwrap_or(0).max(16);
            let _ = writeln!(out, "{:<width$}  {:>10}  {:>10}  {:>7}", "Test description", "Tested", "Different", "Percent");
            for r in &report.proportion_tests {
                let _ = writeln!(out, "{:<width$}  {:>10}  {:>10}  {:>6}%", r.description, r.tested, r.different, r.percent);
            }
        }
    }
    out
}

/// Top-`n` information-gain table.
pub fn ranking_table(report: &CohortComparisonReport, n: usize, format: TableFormat) -> String {
    let rows = &report.top_patterns[..n.min(report.top_patterns.len())];
    let (a, b) = (&report.class_a.label, &report.class_b.label);
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let _ = writeln!(out, "rank,tirp,information_gain,support_{},support_{}", csv_field(a), csv_field(b));
            for r in rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.rank, csv_field(&r.tirp), r.information_gain, r.support_a, r.support_b);
            }
        }
        TableFormat::Text => {
            let width = rows.iter().map(|r| r.tirp.len()).max().unwrap_or(0).max(4);
            let (ha, hb) = (format!("support_{a}"), format!("support_{b}"));
            let _ = writeln!(out, "{:>4}  {:<width$}  {:>8}  {:>12}  {:>12}", "Rank", "TIRP", "IG", ha, hb);
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:>4}  {:<width$}  {:>8.4}  {:>12.4}  {:>12.4}",
                    r.rank, r.tirp, r.information_gain, r.support_a, r.support_b
                );
            }
        }
    }
    out
}

/// Plain-text summary: class totals, the KS block and both tables.
pub fn render_report(report: &CohortComparisonReport, top: usize) -> String {
    let mut out = String::new();
    let (a, b) = (&report.class_a, &report.class_b);
    let _ = writeln!(out, "Class {}: {} entities, {} TIRPs", a.label, a.cohort_size, a.tirps);
    let _ = writeln!(out, "Class {}: {} entities, {} TIRPs", b.label, b.cohort_size, b.tirps);
    let _ = writeln!(
        out,
        "Distinct TIRPs: {} (shared {}, only {} {}, only {} {})",
        report.total_distinct, report.shared, a.label, report.exclusive_a, b.label, report.exclusive_b
    );
    let domain = match report.ks.domain {
        crate::stats::KsDomain::Shared => "shared",
        crate::stats::KsDomain::Union => "union",
    };
    match &report.ks.result {
        Some(ks) => {
            let _ = writeln!(
                out,
                "KS over {domain} TIRP supports: D = {:.4}, critical D = {:.4} (alpha {}, n = {}, {}): {}",
                ks.d_statistic,
                ks.critical_d,
                ks.alpha,
                ks.n1,
                ks.n2,
                if ks.reject { "distributions differ" } else { "no significant difference" }
            );
        }
        None => {
            let _ = writeln!(out, "KS over {domain} TIRP supports: not computed (no TIRPs)");
        }
    }
    out.push('\n');
    out.push_str(&proportion_table(report, TableFormat::Text));
    out.push('\n');
    out.push_str(&ranking_table(report, top, TableFormat::Text));
    out
}
