//! Verdicts, witnesses and the per-condition log shared by every classifier.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::MultiIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Condition labels. The declaration order is the witness-selection order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionId {
    A,
    B,
    B1,
    B2,
    C,
    C1,
    C2,
    C3,
    /// off-diagonal sign test for Z tensors
    Z,
    /// diagonal dominance
    Dd,
}

impl ConditionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::A => "a",
            ConditionId::B => "b",
            ConditionId::B1 => "b1",
            ConditionId::B2 => "b2",
            ConditionId::C => "c",
            ConditionId::C1 => "c1",
            ConditionId::C2 => "c2",
            ConditionId::C3 => "c3",
            ConditionId::Z => "z",
            ConditionId::Dd => "dd",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The inequality `lhs REL rhs` a condition demands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Gt,
    Ge,
    Le,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        }
    }

    fn negated_symbol(self) -> &'static str {
        match self {
            Relation::Gt => "<=",
            Relation::Ge => "<",
            Relation::Le => ">",
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Slack allowed when comparing. `eps = 0` is exact comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance { eps: 0.0 };

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::InvalidArgument(format!(
                "epsilon must be finite and >= 0, got {eps}"
            )))
        }
    }

    pub fn eps(self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn gt(self, lhs: f64, rhs: f64) -> bool {
        lhs + self.eps > rhs
    }

    #[inline]
    pub fn ge(self, lhs: f64, rhs: f64) -> bool {
        lhs + self.eps >= rhs
    }

    #[inline]
    pub fn le(self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.eps
    }

    #[inline]
    pub fn check(self, rel: Relation, lhs: f64, rhs: f64) -> bool {
        match rel {
            Relation::Gt => self.gt(lhs, rhs),
            Relation::Ge => self.ge(lhs, rhs),
            Relation::Le => self.le(lhs, rhs),
        }
    }
}

/// One evaluated inequality. Rows and tails are 0-based here and 1-based when serialized.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionRecord {
    pub id: ConditionId,
    pub rows: Vec<usize>,
    pub tails: Vec<MultiIndex>,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl ConditionRecord {
    pub fn new(
        id: ConditionId,
        rows: Vec<usize>,
        tails: Vec<MultiIndex>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: Tolerance,
    ) -> Self {
        ConditionRecord {
            id,
            rows,
            tails,
            lhs,
            rhs,
            relation,
            passed: tol.check(relation, lhs, rhs),
        }
    }

    fn margin(&self) -> f64 {
        match self.relation {
            Relation::Gt | Relation::Ge => self.lhs - self.rhs,
            Relation::Le => self.rhs - self.lhs,
        }
    }

    pub fn witness(&self) -> Witness {
        Witness {
            condition: self.id,
            row: self.rows.first().copied().unwrap_or(0),
            tail: self.tails.first().cloned(),
            pair_row: self.rows.get(1).copied(),
            pair_tail: self.tails.get(1).cloned(),
            lhs: self.lhs,
            rhs: self.rhs,
            relation: self.relation,
        }
    }
}

impl fmt::Display for ConditionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ", self.id)?;
        write_location(f, &self.rows, &self.tails)?;
        let rel = if self.passed {
            self.relation.symbol()
        } else {
            self.relation.negated_symbol()
        };
        write!(f, ": {} {} {}", self.lhs, rel, self.rhs)
    }
}

fn write_location(f: &mut fmt::Formatter<'_>, rows: &[usize], tails: &[MultiIndex]) -> fmt::Result {
    for (k, r) in rows.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "row {}", r + 1)?;
        if let Some(t) = tails.get(k) {
            write!(f, " tail {t}")?;
        }
    }
    Ok(())
}

impl Serialize for ConditionRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ConditionRecord", 7)?;
        st.serialize_field("id", &self.id)?;
        let rows: Vec<usize> = self.rows.iter().map(|r| r + 1).collect();
        st.serialize_field("rows", &rows)?;
        let tails: Vec<Vec<usize>> = self.tails.iter().map(|t| t.one_based()).collect();
        st.serialize_field("indices", &tails)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("passed", &self.passed)?;
        st.end()
    }
}

/// The violated inequality behind a `Fails` verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub condition: ConditionId,
    pub row: usize,
    pub tail: Option<MultiIndex>,
    pub pair_row: Option<usize>,
    pub pair_tail: Option<MultiIndex>,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows = vec![self.row];
        let mut tails = Vec::new();
        if let Some(t) = &self.tail {
            tails.push(t.clone());
        }
        if let Some(p) = self.pair_row {
            rows.push(p);
            if let Some(t) = &self.pair_tail {
                tails.push(t.clone());
            }
        }
        write!(f, "({}) ", self.condition)?;
        write_location(f, &rows, &tails)?;
        write!(
            f,
            ": {} {} {} (needs {})",
            self.lhs,
            self.relation.negated_symbol(),
            self.rhs,
            self.relation.symbol()
        )
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 8)?;
        st.serialize_field("condition", &self.condition)?;
        st.serialize_field("row", &(self.row + 1))?;
        if let Some(t) = &self.tail {
            st.serialize_field("index", &t.one_based())?;
        }
        if let Some(p) = self.pair_row {
            st.serialize_field("pair_row", &(p + 1))?;
        }
        if let Some(t) = &self.pair_tail {
            st.serialize_field("pair_index", &t.one_based())?;
        }
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.end()
    }
}

/// Classification result shared by point and interval classifiers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub class: &'static str,
    pub method: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    /// Holds iff every record passed; the witness is the first failing record.
    pub fn from_records(class: &'static str, method: &'static str, conditions: Vec<ConditionRecord>) -> Self {
        let witness = conditions.iter().find(|r| !r.passed).map(ConditionRecord::witness);
        Verdict {
            class,
            method,
            status: if witness.is_some() {
                Status::Fails
            } else {
                Status::Holds
            },
            witness,
            conditions,
            note: None,
        }
    }

    pub fn inconclusive(class: &'static str, method: &'static str, note: impl Into<String>) -> Self {
        Verdict {
            class,
            method,
            status: Status::Inconclusive,
            witness: None,
            conditions: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    /// Looks up the first record with this label.
    pub fn condition(&self, id: ConditionId) -> Option<&ConditionRecord> {
        self.conditions.iter().find(|r| r.id == id)
    }
}

/// Keeps the record that best summarises a family of inequalities:
/// the first failing one, or the tightest passing one.
#[derive(Default)]
pub(crate) struct Tightest {
    rec: Option<ConditionRecord>,
}

impl Tightest {
    /// Keeps the first failing candidate, else the one with the smallest margin.
    /// Only allocates when the candidate is kept.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn offer_values(
        &mut self,
        id: ConditionId,
        rows: &[usize],
        tails: &[usize],
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: Tolerance,
        tail: impl Fn(usize) -> MultiIndex,
    ) {
        let passed = tol.check(relation, lhs, rhs);
        let replace = match &self.rec {
            None => true,
            Some(cur) => {
                let probe = ConditionRecord {
                    id,
                    rows: Vec::new(),
                    tails: Vec::new(),
                    lhs,
                    rhs,
                    relation,
                    passed,
                };
                cur.passed && (!passed || probe.margin() < cur.margin())
            }
        };
        if replace {
            self.rec = Some(ConditionRecord {
                id,
                rows: rows.to_vec(),
                tails: tails.iter().map(|&t| tail(t)).collect(),
                lhs,
                rhs,
                relation,
                passed,
            });
        }
    }

    /// Fast path used in hot loops: has a failure already been recorded?
    pub(crate) fn failed(&self) -> bool {
        self.rec.as_ref().is_some_and(|r| !r.passed)
    }

    pub(crate) fn push_into(self, out: &mut Vec<ConditionRecord>) {
        if let Some(r) = self.rec {
            out.push(r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_relaxes_strictness() {
        let t = Tolerance::new(0.5).unwrap();
        assert!(t.gt(1.0, 1.0));
        assert!(!Tolerance::EXACT.gt(1.0, 1.0));
        assert!(Tolerance::EXACT.ge(1.0, 1.0));
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
    }

    #[test]
    fn tightest_prefers_first_failure() {
        let mut t = Tightest::default();
        t.offer_values(ConditionId::B, &[0], &[], 5.0, Relation::Gt, 1.0, Tolerance::EXACT, |_| unreachable!());
        t.offer_values(ConditionId::B, &[0], &[], 3.0, Relation::Gt, 2.0, Tolerance::EXACT, |_| unreachable!());
        t.offer_values(ConditionId::B, &[0], &[], 1.0, Relation::Gt, 2.0, Tolerance::EXACT, |_| unreachable!());
        t.offer_values(ConditionId::B, &[0], &[], 0.0, Relation::Gt, 9.0, Tolerance::EXACT, |_| unreachable!());
        let mut out = Vec::new();
        t.push_into(&mut out);
        assert_eq!(out[0].lhs, 1.0);
    }

    #[test]
    fn witness_serializes_one_based() {
        let r = ConditionRecord::new(
            ConditionId::B,
            vec![0],
            vec![MultiIndex::new(vec![1, 1])],
            4.0,
            Relation::Gt,
            6.0,
            Tolerance::EXACT,
        );
        let v = Verdict::from_records("interval-b", "theorem", vec![r]);
        assert_eq!(v.status, Status::Fails);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["witness"]["row"], 1);
        assert_eq!(json["witness"]["index"], serde_json::json!([2, 2]));
        assert_eq!(json["witness"]["condition"], "b");
        assert_eq!(json["status"], "fails");
        assert_eq!(
            v.witness.unwrap().to_string(),
            "(b) row 1 tail (2,2): 4 <= 6 (needs >)"
        );
    }
}
