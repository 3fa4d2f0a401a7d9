//! Command reports, as text and as JSON conforming to
//! `schema/report.schema.json`.

use std::fmt::Write as _;

use kanbench_core::criterion::{ClosureReport, ConditionVerdict, CriterionReport};
use serde::Serialize;
use serde_json::Value;

use crate::error::WorkbenchError;

pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Debug, Serialize)]
pub struct SizeRow {
    pub object: String,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CardinalityRow {
    pub object: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictRow {
    pub condition: String,
    pub index: usize,
    pub status: String,
    pub cardinalities: Vec<CardinalityRow>,
    /// Moves played by the strategy, when a game was run.
    pub moves: Option<usize>,
    pub final_digest: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectRow {
    pub object: String,
    pub summary: String,
    pub verdicts: Vec<VerdictRow>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Validate { file: String, kind: String, summary: String },
    Lan { sizes: Vec<SizeRow>, result: Value },
    Reflect { status: String, steps_used: usize, sizes: Vec<SizeRow>, result: Value },
    CheckLa { summary: String, meaning: String, verdicts: Vec<VerdictRow> },
    CheckCc { summary: String, meaning: String, objects: Vec<ObjectRow> },
    Replay { steps: usize, moves: usize, final_digest: String, won: bool },
    Error { error: String, message: String, line: Option<usize>, column: Option<usize> },
}

fn verdict_row(v: &ConditionVerdict) -> VerdictRow {
    let trace = v.status.trace();
    VerdictRow {
        condition: v.condition_name.clone(),
        index: v.condition_index,
        status: v.status.name().to_string(),
        cardinalities: v
            .cardinalities
            .iter()
            .map(|c| CardinalityRow { object: c.object.clone(), source: c.source, target: c.target })
            .collect(),
        moves: trace.map(|t| t.moves()),
        final_digest: trace.map(|t| t.final_digest()),
    }
}

impl Report {
    pub fn check_la(r: &CriterionReport) -> Report {
        Report::CheckLa {
            summary: r.summary.name().to_string(),
            meaning: r.summary.meaning().to_string(),
            verdicts: r.verdicts.iter().map(verdict_row).collect(),
        }
    }

    pub fn check_cc(r: &ClosureReport) -> Report {
        Report::CheckCc {
            summary: r.summary.name().to_string(),
            meaning: r.summary.meaning().to_string(),
            objects: r
                .objects
                .iter()
                .map(|(o, rep)| ObjectRow {
                    object: o.clone(),
                    summary: rep.summary.name().to_string(),
                    verdicts: rep.verdicts.iter().map(verdict_row).collect(),
                })
                .collect(),
        }
    }

    pub fn error(e: &WorkbenchError) -> Report {
        let (line, column) = match e {
            WorkbenchError::Parse(p) => (Some(p.line), Some(p.column)),
            _ => (None, None),
        };
        Report::Error { error: e.kind().to_string(), message: e.to_string(), line, column }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Validate { file, kind, summary } => {
                let _ = writeln!(out, "{file}: valid {kind} ({summary})");
            }
            Report::Lan { sizes, .. } => {
                let _ = writeln!(out, "Lan result:");
                sizes_table(&mut out, sizes);
            }
            Report::Reflect { status, steps_used, sizes, .. } => {
                let _ = writeln!(out, "reflection {status} after {steps_used} steps:");
                sizes_table(&mut out, sizes);
            }
            Report::CheckLa { summary, meaning, verdicts } => {
                verdict_table(&mut out, verdicts);
                let _ = writeln!(out, "{summary}: {meaning}");
            }
            Report::CheckCc { summary, meaning, objects } => {
                for o in objects {
                    let _ = writeln!(out, "y({}) × −: {}", o.object, o.summary);
                    verdict_table(&mut out, &o.verdicts);
                }
                let _ = writeln!(out, "{summary}: {meaning}");
            }
            Report::Replay { steps, moves, final_digest, won } => {
                let _ = writeln!(out, "replayed {steps} steps ({moves} moves), final digest {final_digest}");
                let _ = writeln!(out, "{}", if *won { "Won" } else { "not won" });
            }
            Report::Error { error, message, .. } => {
                let _ = writeln!(out, "{error}: {message}");
            }
        }
        out
    }

    /// Process exit code for this report.
    pub fn exit_code(&self) -> i32 {
        let of = |s: &str| match s {
            "CriterionHolds" => 0,
            "CriterionFails" => 2,
            _ => 3,
        };
        match self {
            Report::CheckLa { summary, .. } | Report::CheckCc { summary, .. } => of(summary),
            Report::Error { .. } => 1,
            _ => 0,
        }
    }
}

fn sizes_table(out: &mut String, sizes: &[SizeRow]) {
    for s in sizes {
        let _ = writeln!(out, "  {:<8} {}", s.object, s.size);
    }
}

fn verdict_table(out: &mut String, verdicts: &[VerdictRow]) {
    for v in verdicts {
        let cards: Vec<String> =
            v.cardinalities.iter().map(|c| format!("{}: {} -> {}", c.object, c.source, c.target)).collect();
        let moves = v.moves.map(|n| format!(" after {n} moves")).unwrap_or_default();
        let _ = writeln!(out, "  {:<8} {:<14}{moves}  [{}]", v.condition, v.status, cards.join(", "));
    }
}
