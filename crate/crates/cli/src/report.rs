//! Reports: one row per check, a status, and rendering as JSON or a table.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A check that could not be decided within its bounds.
    Undecided,
    /// A computed quantity with nothing to pass or fail.
    Info,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Undecided => "undecided",
            Outcome::Info => "info",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Partial,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Partial => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub id: String,
    /// The statement the row checks.
    pub anchor: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Measured quantities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
}

impl Row {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, outcome: Outcome) -> Self {
        Row {
            id: id.into(),
            anchor: anchor.into(),
            outcome,
            witness: None,
            value: None,
        }
    }

    pub fn check(
        id: impl Into<String>,
        anchor: impl Into<String>,
        passed: bool,
        witness: impl FnOnce() -> String,
    ) -> Self {
        let mut row = Row::new(id, anchor, Outcome::Pass);
        if !passed {
            row.outcome = Outcome::Fail;
            row.witness = Some(witness());
        }
        row
    }

    pub fn fail(id: impl Into<String>, anchor: impl Into<String>, witness: String) -> Self {
        let mut row = Row::new(id, anchor, Outcome::Fail);
        row.witness = Some(witness);
        row
    }

    pub fn info(id: impl Into<String>, anchor: impl Into<String>, value: impl Serialize) -> Self {
        Row::new(id, anchor, Outcome::Info).with_value(value)
    }

    pub fn with_value(mut self, value: impl Serialize) -> Self {
        self.value = Some(serde_json::to_value(value).expect("report values serialize"));
        self
    }

    pub fn with_witness(mut self, witness: String) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Wall time in milliseconds; only filled on request so that reports
    /// stay byte-identical across runs.
    pub timing_ms: Option<u64>,
    pub rows: Vec<Row>,
}

impl Report {
    /// Sorts the rows and derives the status: any failure fails, otherwise
    /// an undecided row makes the report partial.
    pub fn new(command: &str, mut rows: Vec<Row>) -> Self {
        rows.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if rows.iter().any(|r| r.outcome == Outcome::Fail) {
            Status::Fail
        } else if rows.iter().any(|r| r.outcome == Outcome::Undecided) {
            Status::Partial
        } else {
            Status::Pass
        };
        Report {
            command: command.to_string(),
            status,
            seed: None,
            timing_ms: None,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Partial => "partial",
        };
        let _ = write!(out, "{}: {status}", self.command);
        if let Some(seed) = self.seed {
            let _ = write!(out, "  seed {seed}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = write!(out, "  {ms} ms");
        }
        out.push('\n');
        let id_w = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(0);
        for r in &self.rows {
            let _ = write!(
                out,
                "  {:<9} {:<id_w$}  {}",
                r.outcome.label(),
                r.id,
                r.anchor
            );
            if let Some(v) = &r.value {
                let _ = write!(out, "  {}", summarize(v));
            }
            out.push('\n');
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "  {:<9} {:<id_w$}  witness: {w}", "", "");
            }
        }
        out
    }
}

/// Compact one-line rendering, eliding long arrays.
fn summarize(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() <= 100 {
        s
    } else {
        let head: String = s.chars().take(97).collect();
        format!("{head}...")
    }
}
