//! Criteria for interval tensor families: interval B, interval double B, their
//! fast paths for Z and circulant bounds, necessary and sufficient shortcuts,
//! and interval P sufficiency.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::IntervalTensor;
use crate::point::check_double_b;
use crate::tensor::MultiIndex;
use crate::verdict::{ConditionId, ConditionRecord, Relation, Tightest, Tolerance, Verdict, Witness};

const CLASS_B: &str = "interval-b";
const CLASS_DB: &str = "interval-double-b";

/// The four equivalent interval B formulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalBMethod {
    /// row sum of lower > 0, and sum of lower over tails other than j > (N-1) * upper_j
    Theorem,
    /// row sum of lower > max(0, (N-1) * upper_j + lower_j)
    Compact,
    /// lower_diag - lower_j > sum over off-diagonal k of (upper_j - lower_k)
    Slack,
    /// lower_diag - upper_j > sum over off-diagonal k != j of (upper_j - lower_k)
    Pairwise,
}

impl IntervalBMethod {
    pub const ALL: [IntervalBMethod; 4] = [
        IntervalBMethod::Theorem,
        IntervalBMethod::Compact,
        IntervalBMethod::Slack,
        IntervalBMethod::Pairwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntervalBMethod::Theorem => "theorem",
            IntervalBMethod::Compact => "compact",
            IntervalBMethod::Slack => "slack",
            IntervalBMethod::Pairwise => "pairwise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Row data shared by the interval criteria.
struct Row<'a> {
    lo: &'a [f64],
    hi: &'a [f64],
    diag_tail: usize,
    diag: f64,
    sum_lo: f64,
    sum_lo_off: f64,
}

impl<'a> Row<'a> {
    fn new(ai: &'a IntervalTensor, i: usize) -> Self {
        let lo = ai.lower().row_unchecked(i);
        let hi = ai.upper().row_unchecked(i);
        let diag_tail = lo.diag_tail();
        let sum_lo_off = lo.off_diagonal().map(|(_, v)| v).fold(0.0, |a, v| a + v);
        Row {
            lo: lo.values(),
            hi: hi.values(),
            diag_tail,
            diag: lo.diagonal(),
            sum_lo: lo.sum(),
            sum_lo_off,
        }
    }

    fn off_tails(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.lo.len()).filter(move |&t| t != self.diag_tail)
    }

    /// sum over off-diagonal k != j of (upper_j - lower_k)
    fn pair_slack(&self, j: usize) -> f64 {
        let others = (self.lo.len() - 2) as f64;
        others * self.hi[j] - (self.sum_lo_off - self.lo[j])
    }

    /// max(0, largest off-diagonal upper entry)
    fn upper_gamma(&self) -> f64 {
        self.off_tails().map(|t| self.hi[t]).fold(0.0, f64::max)
    }
}

fn rows(ai: &IntervalTensor) -> Vec<Row<'_>> {
    (0..ai.dim()).map(|i| Row::new(ai, i)).collect()
}

/// Interval B test by any of the four equivalent methods.
pub fn check_interval_b(ai: &IntervalTensor, method: IntervalBMethod, tol: Tolerance) -> Verdict {
    let big_n = ai.row_len() as f64;
    let lower = ai.lower();
    let mut recs = Vec::new();
    for (i, r) in rows(ai).iter().enumerate() {
        if method != IntervalBMethod::Compact || r.lo.len() == 1 {
            recs.push(ConditionRecord::new(ConditionId::A, vec![i], vec![], r.sum_lo, Relation::Gt, 0.0, tol));
        }
        let mut worst = Tightest::default();
        for j in r.off_tails() {
            let (lhs, rhs) = match method {
                IntervalBMethod::Theorem => (r.sum_lo - r.lo[j], (big_n - 1.0) * r.hi[j]),
                IntervalBMethod::Compact => (r.sum_lo, ((big_n - 1.0) * r.hi[j] + r.lo[j]).max(0.0)),
                IntervalBMethod::Slack => (r.diag - r.lo[j], (big_n - 1.0) * r.hi[j] - r.sum_lo_off),
                IntervalBMethod::Pairwise => (r.diag - r.hi[j], r.pair_slack(j)),
            };
            worst.offer_values(ConditionId::B, &[i], &[j], lhs, Relation::Gt, rhs, tol, |t| lower.tail_index(t));
            if worst.failed() {
                break;
            }
        }
        worst.push_into(&mut recs);
    }
    recs.sort_by_key(|r| r.id);
    Verdict::from_records(CLASS_B, method.name(), recs)
}

/// Interval Z fast path: the family is interval B iff every lower row sum is positive.
pub fn check_interval_b_zfast(ai: &IntervalTensor, tol: Tolerance) -> Result<Verdict> {
    if !ai.is_interval_z() {
        return Err(Error::NotIntervalZ);
    }
    let recs = ai
        .lower()
        .rows()
        .map(|row| ConditionRecord::new(ConditionId::A, vec![row.row()], vec![], row.sum(), Relation::Gt, 0.0, tol))
        .collect();
    Ok(Verdict::from_records(CLASS_B, "z_rowsum", recs))
}

/// Outcome of one necessary (or shortcut) check.
#[derive(Clone, Debug, PartialEq)]
pub struct NecessaryCheck {
    pub name: &'static str,
    pub row: Option<usize>,
    pub passed: bool,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub witness: Option<Witness>,
}

impl NecessaryCheck {
    fn scalar(name: &'static str, row: usize, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        NecessaryCheck {
            name,
            row: Some(row),
            passed: tol.gt(lhs, rhs),
            lhs: Some(lhs),
            rhs: Some(rhs),
            witness: None,
        }
    }

    fn from_verdict(name: &'static str, row: Option<usize>, v: &Verdict) -> Self {
        NecessaryCheck {
            name,
            row,
            passed: v.holds(),
            lhs: v.witness.as_ref().map(|w| w.lhs),
            rhs: v.witness.as_ref().map(|w| w.rhs),
            witness: v.witness.clone(),
        }
    }
}

impl Serialize for NecessaryCheck {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NecessaryCheck", 6)?;
        st.serialize_field("name", self.name)?;
        st.serialize_field("row", &self.row.map(|r| r + 1))?;
        st.serialize_field("passed", &self.passed)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

/// A list of necessary conditions; any failure certifies non-membership.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessaryReport {
    pub family: &'static str,
    pub checks: Vec<NecessaryCheck>,
}

impl NecessaryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&NecessaryCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Necessary conditions for interval B, per row:
/// the diagonal lower bound beats the total negative lower mass,
/// beats every off-diagonal |lower| and |upper|,
/// and beats max(0, every off-diagonal upper).
pub fn interval_b_necessary(ai: &IntervalTensor, tol: Tolerance) -> NecessaryReport {
    let mut checks = Vec::new();
    for (i, r) in rows(ai).iter().enumerate() {
        let neg_mass = r.off_tails().map(|t| r.lo[t]).filter(|&v| v < 0.0).fold(0.0, |a, v| a - v);
        checks.push(NecessaryCheck::scalar("negative_mass", i, r.diag, neg_mass, tol));
        let abs_max = r
            .off_tails()
            .map(|t| r.lo[t].abs().max(r.hi[t].abs()))
            .fold(0.0, f64::max);
        checks.push(NecessaryCheck::scalar("abs_bound", i, r.diag, abs_max, tol));
        checks.push(NecessaryCheck::scalar("prime_row", i, r.diag, r.upper_gamma(), tol));
    }
    NecessaryReport {
        family: CLASS_B,
        checks,
    }
}

/// Per-row quantities of the interval double B conditions.
struct DbRow {
    diag: f64,
    upper_gamma: f64,
    /// max(0, -sum of off-diagonal lowers)
    neg: f64,
    tails: Vec<usize>,
    /// diag - upper_j
    p: Vec<f64>,
    /// max(0, pair slack at j)
    q: Vec<f64>,
}

impl DbRow {
    fn new(r: &Row<'_>, argmax_only: bool, argmax: Option<usize>) -> Self {
        let tails: Vec<usize> = if argmax_only {
            argmax.into_iter().collect()
        } else {
            r.off_tails().collect()
        };
        DbRow {
            diag: r.diag,
            upper_gamma: r.upper_gamma(),
            neg: (-r.sum_lo_off).max(0.0),
            p: tails.iter().map(|&j| r.diag - r.hi[j]).collect(),
            q: tails.iter().map(|&j| r.pair_slack(j).max(0.0)).collect(),
            tails,
        }
    }
}

fn double_b_records(ai: &IntervalTensor, argmax_only: bool, tol: Tolerance) -> Vec<ConditionRecord> {
    let lower = ai.lower();
    let tail = |t: usize| lower.tail_index(t);
    let base = rows(ai);
    let db: Vec<DbRow> = base
        .iter()
        .enumerate()
        .map(|(i, r)| DbRow::new(r, argmax_only, ai.upper_argmax_tail(i)))
        .collect();
    let n = db.len();
    let mut recs = Vec::new();

    for (i, d) in db.iter().enumerate() {
        recs.push(ConditionRecord::new(ConditionId::A, vec![i], vec![], d.diag, Relation::Gt, d.upper_gamma, tol));
    }
    for (i, d) in db.iter().enumerate() {
        let mut worst = Tightest::default();
        for (k, &j) in d.tails.iter().enumerate() {
            worst.offer_values(ConditionId::B1, &[i], &[j], d.p[k], Relation::Ge, d.q[k], tol, tail);
            if worst.failed() {
                break;
            }
        }
        worst.push_into(&mut recs);
    }
    for (i, d) in db.iter().enumerate() {
        recs.push(ConditionRecord::new(ConditionId::B2, vec![i], vec![], d.diag, Relation::Ge, d.neg, tol));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    for &(i, i2) in &pairs {
        let (a, b) = (&db[i], &db[i2]);
        let mut worst = Tightest::default();
        'outer: for (x, &j) in a.tails.iter().enumerate() {
            for (y, &k) in b.tails.iter().enumerate() {
                worst.offer_values(
                    ConditionId::C1,
                    &[i, i2],
                    &[j, k],
                    a.p[x] * b.p[y],
                    Relation::Gt,
                    a.q[x] * b.q[y],
                    tol,
                    tail,
                );
                if worst.failed() {
                    break 'outer;
                }
            }
        }
        worst.push_into(&mut recs);
    }
    for &(i, i2) in &pairs {
        let (a, b) = (&db[i], &db[i2]);
        let mut worst = Tightest::default();
        for (x, &j) in a.tails.iter().enumerate() {
            worst.offer_values(
                ConditionId::C2,
                &[i, i2],
                &[j],
                a.p[x] * b.diag,
                Relation::Gt,
                a.q[x] * b.neg,
                tol,
                tail,
            );
            if worst.failed() {
                break;
            }
        }
        worst.push_into(&mut recs);
    }
    for &(i, i2) in &pairs {
        let (a, b) = (&db[i], &db[i2]);
        recs.push(ConditionRecord::new(
            ConditionId::C3,
            vec![i, i2],
            vec![],
            a.diag * b.diag,
            Relation::Gt,
            a.neg * b.neg,
            tol,
        ));
    }
    recs
}

/// Interval double B test: conditions (a), (b1), (b2), (c1), (c2), (c3).
/// The log keeps, per row or row pair, the first failing or the tightest instance.
pub fn check_interval_double_b(ai: &IntervalTensor, tol: Tolerance) -> Verdict {
    Verdict::from_records(CLASS_DB, "theorem", double_b_records(ai, false, tol))
}

/// How the critical row of an interval double B family misses interval B.
#[derive(Clone, Debug, PartialEq)]
pub enum CriticalMode {
    NonpositiveRowSum,
    SlackEquality { tail: MultiIndex },
}

/// Interval double B families split into interval B families and families
/// with exactly one critical row.
#[derive(Clone, Debug, PartialEq)]
pub enum DichotomyResult {
    IntervalB,
    CriticalRow { row: usize, mode: CriticalMode },
    NotDoubleB,
    /// More than one row misses the interval B conditions; the dichotomy rules this out.
    Anomaly { rows: Vec<usize> },
}

impl DichotomyResult {
    pub fn kind(&self) -> &'static str {
        match self {
            DichotomyResult::IntervalB => "interval_b",
            DichotomyResult::CriticalRow { .. } => "critical_row",
            DichotomyResult::NotDoubleB => "not_double_b",
            DichotomyResult::Anomaly { .. } => "anomaly",
        }
    }
}

impl Serialize for DichotomyResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DichotomyResult", 4)?;
        st.serialize_field("kind", self.kind())?;
        match self {
            DichotomyResult::CriticalRow { row, mode } => {
                st.serialize_field("critical_row", &(row + 1))?;
                match mode {
                    CriticalMode::NonpositiveRowSum => st.serialize_field("failing_mode", "nonpositive_row_sum")?,
                    CriticalMode::SlackEquality { tail } => {
                        st.serialize_field("failing_mode", "slack_equality")?;
                        st.serialize_field("index", &tail.one_based())?;
                    }
                }
            }
            DichotomyResult::Anomaly { rows } => {
                let r: Vec<usize> = rows.iter().map(|r| r + 1).collect();
                st.serialize_field("rows", &r)?;
            }
            _ => {}
        }
        st.end()
    }
}

impl fmt::Display for DichotomyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DichotomyResult::IntervalB => write!(f, "interval B"),
            DichotomyResult::NotDoubleB => write!(f, "not interval double B"),
            DichotomyResult::CriticalRow { row, mode } => {
                write!(f, "critical row {}", row + 1)?;
                match mode {
                    CriticalMode::NonpositiveRowSum => write!(f, " (lower row sum not positive)"),
                    CriticalMode::SlackEquality { tail } => write!(f, " (slack equality at tail {tail})"),
                }
            }
            DichotomyResult::Anomaly { rows } => {
                let r: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
                write!(f, "anomaly: rows {} are all critical", r.join(","))
            }
        }
    }
}

pub fn classify_interval_double_b_dichotomy(ai: &IntervalTensor, tol: Tolerance) -> DichotomyResult {
    if !check_interval_double_b(ai, tol).holds() {
        return DichotomyResult::NotDoubleB;
    }
    let lower = ai.lower();
    let mut critical = Vec::new();
    for (i, r) in rows(ai).iter().enumerate() {
        if !tol.gt(r.sum_lo, 0.0) {
            critical.push((i, CriticalMode::NonpositiveRowSum));
            continue;
        }
        if let Some(j) = r.off_tails().find(|&j| !tol.gt(r.diag - r.hi[j], r.pair_slack(j))) {
            critical.push((
                i,
                CriticalMode::SlackEquality {
                    tail: lower.tail_index(j),
                },
            ));
        }
    }
    match critical.len() {
        0 => DichotomyResult::IntervalB,
        1 => {
            let (row, mode) = critical.pop().expect("one entry");
            DichotomyResult::CriticalRow { row, mode }
        }
        _ => DichotomyResult::Anomaly {
            rows: critical.into_iter().map(|(i, _)| i).collect(),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NecessaryVariant {
    /// the lower bound and each row-max-except tensor must be double B
    Extremes,
    /// the double B conditions evaluated at each row's largest upper entry only
    Rowmax,
}

pub fn interval_double_b_necessary(ai: &IntervalTensor, variant: NecessaryVariant, tol: Tolerance) -> NecessaryReport {
    let checks = match variant {
        NecessaryVariant::Extremes => {
            let mut checks = vec![NecessaryCheck::from_verdict("lower", None, &check_double_b(ai.lower(), tol))];
            for i in 0..ai.dim() {
                let t = ai.extreme_row_max_except(i).expect("row in range");
                checks.push(NecessaryCheck::from_verdict("row_max_except", Some(i), &check_double_b(&t, tol)));
            }
            checks
        }
        NecessaryVariant::Rowmax => double_b_records(ai, true, tol)
            .into_iter()
            .map(|r| NecessaryCheck {
                name: r.id.as_str(),
                row: r.rows.first().copied(),
                passed: r.passed,
                lhs: Some(r.lhs),
                rhs: Some(r.rhs),
                witness: (!r.passed).then(|| r.witness()),
            })
            .collect(),
    };
    NecessaryReport {
        family: CLASS_DB,
        checks,
    }
}

/// Row `i` satisfies the dominance hypothesis when some off-diagonal tail's
/// lower bound is at least every other off-diagonal upper bound of the row.
fn dominance_tail(r: &Row<'_>) -> Option<usize> {
    let mut top = (f64::NEG_INFINITY, usize::MAX);
    let mut second = f64::NEG_INFINITY;
    for t in r.off_tails() {
        let v = r.hi[t];
        if v > top.0 {
            second = top.0;
            top = (v, t);
        } else if v > second {
            second = v;
        }
    }
    r.off_tails().find(|&k| {
        let others = if k == top.1 { second } else { top.0 };
        r.lo[k] >= others
    })
}

/// Exact test under the dominance hypothesis (n >= 3): the family is interval
/// double B iff the extreme necessary conditions pass. Inconclusive otherwise.
pub fn check_interval_double_b_dominance(ai: &IntervalTensor, tol: Tolerance) -> Verdict {
    const METHOD: &str = "dominance";
    if ai.dim() < 3 {
        return Verdict::inconclusive(CLASS_DB, METHOD, format!("needs n >= 3, got n = {}", ai.dim()));
    }
    for (i, r) in rows(ai).iter().enumerate() {
        if dominance_tail(r).is_none() {
            return Verdict::inconclusive(
                CLASS_DB,
                METHOD,
                format!("dominance hypothesis fails in row {}", i + 1),
            );
        }
    }
    let report = interval_double_b_necessary(ai, NecessaryVariant::Extremes, tol);
    match report.first_failure() {
        None => Verdict::from_records(CLASS_DB, METHOD, Vec::new()),
        Some(f) => {
            let mut v = Verdict::from_records(CLASS_DB, METHOD, Vec::new());
            v.status = crate::verdict::Status::Fails;
            v.witness = f.witness.clone();
            v.with_note(match f.row {
                Some(r) => format!("row-max-except tensor for row {} is not double B", r + 1),
                None => "lower bound tensor is not double B".to_string(),
            })
        }
    }
}

/// Interval Z fast path: interval double B iff the lower bound is double B.
pub fn check_interval_double_b_zfast(ai: &IntervalTensor, tol: Tolerance) -> Result<Verdict> {
    if !ai.is_interval_z() {
        return Err(Error::NotIntervalZ);
    }
    let v = check_double_b(ai.lower(), tol);
    Ok(Verdict {
        class: CLASS_DB,
        method: "z_lower",
        ..v
    })
}

/// Sufficient condition: every row's largest lower off-diagonal entry is >= 0
/// and the hat tensor is double B.
pub fn check_interval_double_b_hat_sufficient(ai: &IntervalTensor, tol: Tolerance) -> Verdict {
    const METHOD: &str = "hat";
    for (i, r) in rows(ai).iter().enumerate() {
        let max_lo = r.off_tails().map(|t| r.lo[t]).fold(f64::NEG_INFINITY, f64::max);
        // n = 1 has no off-diagonal entries and the hypothesis is vacuous
        if max_lo < 0.0 {
            return Verdict::inconclusive(
                CLASS_DB,
                METHOD,
                format!("row {} has largest off-diagonal lower bound {max_lo} < 0", i + 1),
            );
        }
    }
    let v = check_double_b(&ai.extreme_hat(), tol);
    if v.holds() {
        Verdict {
            class: CLASS_DB,
            method: METHOD,
            ..v
        }
    } else {
        let why = v.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        Verdict::inconclusive(CLASS_DB, METHOD, format!("hat tensor is not double B: {why}"))
    }
}

/// Circulant bounds: interval B, interval double B and the row 1 conditions coincide.
/// (c1) lower row 1 sum > 0; (c2) lower_11 - upper_j > sum over k != j of (upper_j - lower_k).
pub fn check_interval_circulant(ai: &IntervalTensor, tol: Tolerance) -> Result<Verdict> {
    if !ai.is_circulant() {
        return Err(Error::NotCirculant);
    }
    let r = Row::new(ai, 0);
    let lower = ai.lower();
    let mut recs = vec![ConditionRecord::new(
        ConditionId::C1,
        vec![0],
        vec![],
        r.diag,
        Relation::Gt,
        -r.sum_lo_off,
        tol,
    )];
    let mut worst = Tightest::default();
    for j in r.off_tails() {
        worst.offer_values(ConditionId::C2, &[0], &[j], r.diag - r.hi[j], Relation::Gt, r.pair_slack(j), tol, |t| {
            lower.tail_index(t)
        });
        if worst.failed() {
            break;
        }
    }
    worst.push_into(&mut recs);
    Ok(Verdict::from_records("interval-circulant", "row1", recs))
}

/// Interval P sufficient conditions (even order): interval Z and interval B,
/// symmetric and interval B, or symmetric and interval double B.
pub fn interval_p_sufficient(ai: &IntervalTensor, tol: Tolerance) -> Verdict {
    const CLASS: &str = "interval-p-sufficient";
    if !ai.order().is_multiple_of(2) {
        return Verdict::inconclusive(CLASS, "sufficient", format!("order {} is odd", ai.order()));
    }
    let is_b = check_interval_b(ai, IntervalBMethod::Theorem, tol).holds();
    if is_b && ai.is_interval_z() {
        return Verdict::from_records(CLASS, "z_interval_b", Vec::new());
    }
    let sym = ai.is_symmetric();
    if sym && is_b {
        return Verdict::from_records(CLASS, "symmetric_interval_b", Vec::new());
    }
    if sym && check_interval_double_b(ai, tol).holds() {
        return Verdict::from_records(CLASS, "symmetric_interval_double_b", Vec::new());
    }
    Verdict::inconclusive(CLASS, "sufficient", "no sufficient condition applies")
}
