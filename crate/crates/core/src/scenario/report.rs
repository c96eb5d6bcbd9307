//! JSON and markdown rendering of scenario evidence.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use super::ops::{FilterResult, LogAnalysis, ScreenResult};
use super::{ScenarioEvidence, Step};
use crate::error::{Error, Result};
use crate::filter::group_digits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl ReportFormat {
    /// From a file name: `.json` or `.md`.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(ReportFormat::Json),
            Some("md") | Some("markdown") => Ok(ReportFormat::Markdown),
            _ => Err(Error::InvalidInput(format!("report {} must end in .json or .md", path.display()))),
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(Error::InvalidInput(format!("unknown report format {s:?}"))),
        }
    }
}

pub fn emit_report(ev: &ScenarioEvidence, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(ev)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Markdown => Ok(markdown(ev)),
    }
}

fn compact(v: &Value, limit: usize) -> String {
    let s = v.to_string();
    if s.chars().count() > limit {
        let cut: String = s.chars().take(limit).collect();
        format!("{cut}...")
    } else {
        s
    }
}

fn filter_table(out: &mut String, f: &FilterResult) {
    let _ = writeln!(out, "| Pattern | Contained | Eliminated | Left |");
    let _ = writeln!(out, "|---|---:|---:|---:|");
    for r in &f.report.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.pattern,
            r.contained.map_or("-".into(), group_digits),
            group_digits(r.cumulative_eliminated),
            group_digits(r.remaining)
        );
    }
    let names: Vec<String> = f.survivors.iter().map(|s| s.name.clone().unwrap_or_else(|| s.graph.clone())).collect();
    let _ = writeln!(out, "\nInput {}, survivors {}: {}", group_digits(f.report.total_input), names.len(), names.join(", "));
}

fn screen_table(out: &mut String, s: &ScreenResult) {
    let _ = writeln!(out, "| Clique number | Graphs |");
    let _ = writeln!(out, "|---:|---:|");
    for (w, c) in &s.clique_histogram {
        let _ = writeln!(out, "| {w} | {c} |");
    }
    let pats: Vec<String> = s.eliminated_by_pattern.iter().map(|(p, c)| format!("{p}: {c}")).collect();
    let _ = writeln!(
        out,
        "\nInput {}, eliminated by clique {}, by pattern {}; left: {}",
        s.total,
        s.eliminated_by_clique,
        if pats.is_empty() { "none".into() } else { pats.join(", ") },
        if s.survivors.is_empty() { "none".into() } else { s.survivors.join(", ") }
    );
}

fn log_summary(out: &mut String, a: &LogAnalysis) {
    for c in &a.components {
        let name = c.name.clone().unwrap_or_else(|| format!("{} vertices", c.vertices.len()));
        let status = if c.impossible { "no FOR" } else { "open" };
        let _ = writeln!(out, "- component {name}: {status}, {} branch(es)", c.branches);
    }
    let _ = writeln!(out, "\n{}", a.reason);
}

fn step_body(out: &mut String, s: &Step) {
    let parsed = match s.operation.as_str() {
        "filter" => serde_json::from_value::<FilterResult>(s.result.clone()).map(|f| filter_table(out, &f)).is_ok(),
        "screen" => serde_json::from_value::<ScreenResult>(s.result.clone()).map(|r| screen_table(out, &r)).is_ok(),
        "analyse-log" => serde_json::from_value::<LogAnalysis>(s.result.clone()).map(|a| log_summary(out, &a)).is_ok(),
        _ => false,
    };
    if !parsed {
        let _ = writeln!(out, "Result: `{}`", compact(&s.result, 240));
    }
}

fn markdown(ev: &ScenarioEvidence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Scenario {}\n", ev.scenario);
    let _ = writeln!(out, "Seed: {}\n", ev.seed);
    let _ = writeln!(out, "## Inputs\n");
    let _ = writeln!(out, "| Family | Source | Count |");
    let _ = writeln!(out, "|---|---|---:|");
    for i in &ev.inputs {
        let _ = writeln!(out, "| {} | {} | {} |", i.family, i.source, group_digits(i.count as usize));
    }
    let _ = writeln!(out, "\n## Steps\n");
    for s in &ev.steps {
        let _ = writeln!(out, "### {}. {} ({})\n", s.index + 1, s.note, s.operation);
        let _ = writeln!(out, "Parameters: `{}`\n", compact(&s.parameters, 160));
        step_body(&mut out, s);
        let _ = writeln!(out, "\nDigest: `{}`\n", &s.digest[..16]);
    }
    let v = &ev.verdict;
    let _ = writeln!(out, "## Verdict\n");
    let _ = writeln!(out, "Status: **{}**\n", serde_json::to_value(v.status).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default());
    let _ = writeln!(out, "{}\n", v.conclusion);
    if !v.counts.is_empty() {
        let _ = writeln!(out, "| Count | Value |");
        let _ = writeln!(out, "|---|---:|");
        for c in &v.counts {
            let _ = writeln!(out, "| {} | {} |", c.label, c.value);
        }
        out.push('\n');
    }
    if !v.findings.is_empty() {
        let _ = writeln!(out, "### Findings\n");
        for f in &v.findings {
            let _ = writeln!(out, "- {f}");
        }
        out.push('\n');
    }
    if !v.undecided.is_empty() {
        let _ = writeln!(out, "## Undecided\n");
        for u in &v.undecided {
            let _ = writeln!(out, "- {u}");
        }
        out.push('\n');
    }
    out
}
