use std::io::{self, Write};
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub suite: String,
    pub case: String,
    pub statement: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub duration_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct SummaryLine {
    summary: Summary,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, cases: Vec<CaseResult>, elapsed: Duration) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: suite.into(),
            summary: Summary {
                total: cases.len(),
                passed,
                failed: cases.len() - passed,
                duration_ms: elapsed.as_millis(),
            },
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Text => self.write_text(out),
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        for c in &self.cases {
            writeln!(
                out,
                "{} {} {} [{}] {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.case,
                c.statement,
                c.detail
            )?;
        }
        let s = self.summary;
        writeln!(
            out,
            "{}: {} cases, {} passed, {} failed ({} ms)",
            self.suite, s.total, s.passed, s.failed, s.duration_ms
        )
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["suite", "case", "statement", "status", "detail"])?;
        for c in &self.cases {
            w.write_record([
                c.suite.as_str(),
                c.case.as_str(),
                c.statement.as_str(),
                if c.pass { "pass" } else { "fail" },
                c.detail.as_str(),
            ])?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        for c in &self.cases {
            serde_json::to_writer(&mut *out, c)?;
            writeln!(out)?;
        }
        serde_json::to_writer(
            &mut *out,
            &SummaryLine {
                summary: self.summary,
            },
        )?;
        writeln!(out)
    }
}

/// Parse JSON-lines output back into cases and the trailing summary.
pub fn parse_json_report(text: &str) -> serde_json::Result<(Vec<CaseResult>, Summary)> {
    let mut cases = Vec::new();
    let mut summary = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let value: serde_json::Value = serde_json::from_str(line)?;
        match value.get("summary") {
            Some(s) => summary = Some(serde_json::from_value(s.clone())?),
            None => cases.push(serde_json::from_value(value)?),
        }
    }
    let summary = summary
        .ok_or_else(|| <serde_json::Error as serde::de::Error>::custom("missing summary line"))?;
    Ok((cases, summary))
}
