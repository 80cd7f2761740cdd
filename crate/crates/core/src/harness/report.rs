//! CSV and text reports of trial results.
//!
//! `summary.csv` carries one row per trial at full round-trip precision;
//! `trace_<trial>.csv` carries one row per presentation at six significant
//! digits.

use std::fmt::Write as _;
use std::path::Path;

use super::experiment::{ExperimentRun, ExperimentTrial};
use super::trial::{TraceRecord, TrialSummary};
use crate::error::{Error, Result};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: [&str; 7] = [
    "trial",
    "mode",
    "integrated",
    "max",
    "steps",
    "phase",
    "env",
];
pub const TRACE_HEADER: [&str; 5] = ["step", "distance_m", "winner_row", "winner_col", "novelty"];

/// A summary together with the phase and environment it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub summary: TrialSummary,
    pub phase: usize,
    pub env: String,
}

impl From<&ExperimentTrial> for SummaryRow {
    fn from(t: &ExperimentTrial) -> Self {
        Self {
            summary: t.trial.summary.clone(),
            phase: t.phase,
            env: t.env.clone(),
        }
    }
}

pub fn trace_file_name(trial: usize) -> String {
    format!("trace_{trial}.csv")
}

/// `value` rounded to `digits` significant digits, in positional notation.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        let s = &r.summary;
        w.write_record([
            s.trial_index.to_string(),
            s.mode.to_string(),
            s.integrated_output.to_string(),
            s.max_output.to_string(),
            s.step_count.to_string(),
            r.phase.to_string(),
            r.env.clone(),
        ])?;
    }
    Ok(String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::io("<csv buffer>", e.into_error()))?,
    )
    .expect("csv output is utf-8"))
}

pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    if r.headers()?.iter().ne(SUMMARY_HEADER) {
        return Err(Error::format(1, "unexpected summary header"));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        if rec.len() != SUMMARY_HEADER.len() {
            return Err(Error::format(line, "wrong number of fields"));
        }
        let bad = |field: &str| {
            Error::format(line, format!("bad {field} `{}`", rec.get(0).unwrap_or("")))
        };
        rows.push(SummaryRow {
            summary: TrialSummary {
                trial_index: rec[0].parse().map_err(|_| bad("trial"))?,
                mode: rec[1].parse().map_err(|_| bad("mode"))?,
                integrated_output: rec[2].parse().map_err(|_| bad("integrated"))?,
                max_output: rec[3].parse().map_err(|_| bad("max"))?,
                step_count: rec[4].parse().map_err(|_| bad("steps"))?,
            },
            phase: rec[5].parse().map_err(|_| bad("phase"))?,
            env: rec[6].to_string(),
        });
    }
    Ok(rows)
}

pub fn trace_csv(trace: &[TraceRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for t in trace {
        w.write_record([
            t.step.to_string(),
            format_significant(t.distance_m, 6),
            t.winner.row.to_string(),
            t.winner.col.to_string(),
            format_significant(t.novelty, 6),
        ])?;
    }
    Ok(String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::io("<csv buffer>", e.into_error()))?,
    )
    .expect("csv output is utf-8"))
}

/// Fixed-width table: one block per phase, trials numbered within the phase.
pub fn format_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<14}{:<10}{:>12}{:>10}",
        "Phase (Env)", "Trial", "Integrated", "Maximum"
    )
    .unwrap();
    writeln!(out, "{}", "-".repeat(46)).unwrap();
    let mut current = None;
    let mut within = 0;
    for r in rows {
        if current != Some((r.phase, r.env.as_str())) {
            current = Some((r.phase, r.env.as_str()));
            within = 0;
            writeln!(out, "{:<14}", format!("{} ({})", r.phase, r.env)).unwrap();
        }
        within += 1;
        let s = &r.summary;
        writeln!(
            out,
            "{:<14}{:<10}{:>12.2}{:>10.2}",
            "",
            format!("{within} ({})", s.mode.short()),
            s.integrated_output,
            s.max_output
        )
        .unwrap();
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `summary.csv`, one trace per trial, `table.txt` and the final
/// filter state of every phase into `dir`.
pub fn write_experiment(run: &ExperimentRun, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows: Vec<SummaryRow> = run.trials.iter().map(SummaryRow::from).collect();
    write(&dir.join(SUMMARY_FILE), &summary_csv(&rows)?)?;
    for t in &run.trials {
        write(
            &dir.join(trace_file_name(t.trial.summary.trial_index)),
            &trace_csv(&t.trial.trace)?,
        )?;
    }
    write(&dir.join("table.txt"), &format_table(&rows))?;
    for (i, p) in run.phases.iter().enumerate() {
        write(
            &dir.join(format!("state_phase{}.txt", i + 1)),
            &p.final_state,
        )?;
    }
    Ok(())
}

pub fn read_summary(dir: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = dir.as_ref().join(SUMMARY_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    parse_summary_csv(&text)
}
