//! Run reports: the JSON envelope written by the CLI and the human summary.
//!
//! A report carries everything needed to replay a run (input hash, method,
//! epsilon, seed, budget) and nothing time-dependent, so identical runs give
//! byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::io::{to_report_json, Input};
use crate::verdict::{ConditionId, ConditionRecord, Relation, Status, Verdict, Witness};

pub const TOOL: &str = "itensor";

/// Lowercase hex SHA-256 of the input bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub kind: &'static str,
    pub order: usize,
    pub dim: usize,
}

impl InputInfo {
    pub fn new(path: &str, bytes: &[u8], input: &Input) -> Self {
        let (order, dim) = match input {
            Input::Tensor(t) => (t.order(), t.dim()),
            Input::Interval(ai) => (ai.order(), ai.dim()),
        };
        InputInfo {
            path: path.to_string(),
            sha256: sha256_hex(bytes),
            kind: input.kind(),
            order,
            dim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// command-specific payload: suite report, dichotomy, falsifier result, ...
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &'static str, epsilon: f64) -> Self {
        Report {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            input: None,
            epsilon,
            seed: None,
            budget: None,
            trials: None,
            verdict: None,
            details: None,
            exit_code: 0,
        }
    }

    /// Attaches a verdict and sets the exit code from its status.
    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.exit_code = exit_code(v.status);
        self.verdict = Some(v);
        self
    }

    pub fn with_details<T: Serialize>(mut self, details: &T) -> Self {
        self.details = Some(serde_json::to_value(details).expect("details serialize to JSON"));
        self
    }

    pub fn to_json(&self) -> String {
        to_report_json(self)
    }
}

/// 0 holds, 1 fails, 2 inconclusive. Usage and parse errors use 3.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Inconclusive => 2,
    }
}

pub const USAGE_ERROR: i32 = 3;

/// What the two sides of a condition stand for, when known.
fn sides(class: &str, method: &str, id: ConditionId) -> Option<(&'static str, &'static str)> {
    use ConditionId::*;
    Some(match (class, method, id) {
        ("b", "definition", A) | ("interval-b", _, A) => ("Σ row", "0"),
        ("b", "definition", B) => ("row mean", "a_ij"),
        ("b", "rowsum_gamma", B) => ("Σ row", "n^(m-1)·γ⁺"),
        ("b", "slack", B) => ("a_ii − γ⁺", "Σ(γ⁺ − a_ij)"),
        ("interval-b", "theorem", B) => ("Σ lower − lower_j", "(n^(m-1)−1)·upper_j"),
        ("interval-b", "compact", B) => ("Σ lower", "max(0, (n^(m-1)−1)·upper_j + lower_j)"),
        ("interval-b", "slack", B) => ("lower_ii − lower_j", "(n^(m-1)−1)·upper_j − Σ' lower"),
        ("interval-b", "pairwise", B) => ("lower_ii − upper_j", "(n^(m-1)−2)·upper_j − Σ'' lower"),
        ("double-b", _, A) => ("a_ii", "γ⁺"),
        ("double-b", _, B) => ("a_ii − γ⁺", "Σ(γ⁺ − a_ij)"),
        ("double-b", _, C) => ("L_i·L_j", "R_i·R_j"),
        ("interval-double-b", "theorem", A) => ("lower_ii", "max(0, upper_j)"),
        ("interval-double-b", "theorem", B1) => ("lower_ii − upper_j", "max(0, S_j)"),
        ("interval-double-b", "theorem", B2) => ("lower_ii", "max(0, −Σ' lower)"),
        ("interval-double-b", "theorem", C1) => ("P_i·P_k", "Q_i·Q_k"),
        ("interval-double-b", "theorem", C2) => ("P_i·lower_kk", "Q_i·max(0, −Σ' lower_k)"),
        ("interval-double-b", "theorem", C3) => ("lower_ii·lower_kk", "max(0, −Σ' lower_i)·max(0, −Σ' lower_k)"),
        ("interval-circulant", _, C1) => ("lower_11", "−Σ' lower"),
        ("interval-circulant", _, C2) => ("lower_11 − upper_j", "(n^(m-1)−2)·upper_j − Σ'' lower"),
        _ => return None,
    })
}

fn failed_symbol(rel: Relation) -> &'static str {
    match rel {
        Relation::Gt => "≯",
        Relation::Ge => "≱",
        Relation::Le => "≰",
    }
}

fn location(w: &Witness) -> String {
    let mut s = format!("row {}", w.row + 1);
    if let Some(t) = &w.tail {
        let _ = write!(s, ", tail {t}");
    }
    if let Some(p) = w.pair_row {
        let _ = write!(s, "; row {}", p + 1);
        if let Some(t) = &w.pair_tail {
            let _ = write!(s, ", tail {t}");
        }
    }
    s
}

/// One line for a failing witness, e.g.
/// `(b) row 1, tail (2,2): Σ lower − lower_j = 4 ≯ (n^(m-1)−1)·upper_j = 6`.
pub fn describe_witness(class: &str, method: &str, w: &Witness) -> String {
    let sym = failed_symbol(w.relation);
    match sides(class, method, w.condition) {
        Some((l, r)) => format!("({}) {}: {l} = {} {sym} {r} = {}", w.condition, location(w), w.lhs, w.rhs),
        None => format!("({}) {}: {} {sym} {}", w.condition, location(w), w.lhs, w.rhs),
    }
}

fn describe_record(rec: &ConditionRecord) -> String {
    format!("  {} {}", if rec.passed { "ok  " } else { "FAIL" }, rec)
}

/// Human-readable summary of a verdict, conditions included when `verbose`.
pub fn summarize_verdict(v: &Verdict, verbose: bool) -> String {
    let mut s = format!("{} [{}]: {}\n", v.class, v.method, v.status);
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "  {}", describe_witness(v.class, v.method, w));
    }
    if let Some(n) = &v.note {
        let _ = writeln!(s, "  note: {n}");
    }
    if verbose {
        for rec in &v.conditions {
            let _ = writeln!(s, "{}", describe_record(rec));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::tests::ex31;
    use crate::interval_class::{check_interval_b, IntervalBMethod};
    use crate::verdict::Tolerance;

    #[test]
    fn hashes_like_sha256sum() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn witness_reads_in_domain_terms() {
        let v = check_interval_b(&ex31(), IntervalBMethod::Theorem, Tolerance::EXACT);
        let line = describe_witness(v.class, v.method, v.witness.as_ref().unwrap());
        assert_eq!(line, "(b) row 1, tail (2,2): Σ lower − lower_j = 4 ≯ (n^(m-1)−1)·upper_j = 6");
    }

    #[test]
    fn exit_codes_follow_status() {
        let r = Report::new("check", 0.0).with_verdict(check_interval_b(&ex31(), IntervalBMethod::Theorem, Tolerance::EXACT));
        assert_eq!(r.exit_code, 1);
        let json = r.to_json();
        assert!(json.contains("\"exit_code\": 1"));
        assert!(json.contains("\"lhs\": 4.0000000000000000"));
    }
}
