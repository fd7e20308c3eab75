//! Membership tests for a single tensor: B, double B, Z, diagonal dominance,
//! the circulant shortcut, P-tensor sufficient conditions and a P falsifier.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{RowView, Tensor};
use crate::verdict::{ConditionId, ConditionRecord, Relation, Tolerance, Verdict};

/// Which of the three equivalent B-tensor formulations to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BMethod {
    /// rowsum > 0 and rowsum / n^(m-1) > every off-diagonal entry
    Definition,
    /// rowsum > n^(m-1) * gamma_plus
    RowsumGamma,
    /// (diag - gamma_plus) > sum over off-diagonal of (gamma_plus - entry)
    Slack,
}

impl BMethod {
    pub const ALL: [BMethod; 3] = [BMethod::Definition, BMethod::RowsumGamma, BMethod::Slack];

    pub fn name(self) -> &'static str {
        match self {
            BMethod::Definition => "definition",
            BMethod::RowsumGamma => "rowsum_gamma",
            BMethod::Slack => "slack",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Per-row quantities used by the B and double B tests.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RowStats {
    pub diag: f64,
    pub sum: f64,
    pub gamma: f64,
    /// first off-diagonal tail attaining a positive gamma
    pub argmax: Option<usize>,
    /// diag - gamma
    pub left: f64,
    /// sum over off-diagonal tails of (gamma - entry)
    pub right: f64,
}

impl RowStats {
    pub(crate) fn of(row: &RowView<'_>) -> Self {
        let diag = row.diagonal();
        let mut gamma = 0.0;
        let mut argmax = None;
        for (t, v) in row.off_diagonal() {
            if v > gamma {
                gamma = v;
                argmax = Some(t);
            }
        }
        let mut right = 0.0;
        for (_, v) in row.off_diagonal() {
            right += gamma - v;
        }
        RowStats {
            diag,
            sum: row.sum(),
            gamma,
            argmax,
            left: diag - gamma,
            right,
        }
    }
}

fn gamma_record(
    t: &Tensor,
    i: usize,
    st: &RowStats,
    lhs: f64,
    rhs: f64,
    tol: Tolerance,
) -> ConditionRecord {
    match st.argmax {
        Some(k) => ConditionRecord::new(ConditionId::B, vec![i], vec![t.tail_index(k)], lhs, Relation::Gt, rhs, tol),
        None => ConditionRecord::new(ConditionId::A, vec![i], vec![], lhs, Relation::Gt, rhs, tol),
    }
}

/// B-tensor test. All three methods agree in status.
pub fn check_b(t: &Tensor, method: BMethod, tol: Tolerance) -> Verdict {
    let big_n = t.row_len() as f64;
    let mut recs = Vec::with_capacity(2 * t.dim());
    for row in t.rows() {
        let i = row.row();
        match method {
            BMethod::Definition => {
                let sum = row.sum();
                recs.push(ConditionRecord::new(ConditionId::A, vec![i], vec![], sum, Relation::Gt, 0.0, tol));
                let mean = sum / big_n;
                // first violating tail, else the largest entry (the tightest check)
                let pick = row
                    .off_diagonal()
                    .find(|&(_, v)| !tol.gt(mean, v))
                    .or_else(|| {
                        row.off_diagonal()
                            .fold(None, |best: Option<(usize, f64)>, (k, v)| match best {
                                Some((_, b)) if b >= v => best,
                                _ => Some((k, v)),
                            })
                    });
                if let Some((k, v)) = pick {
                    recs.push(ConditionRecord::new(
                        ConditionId::B,
                        vec![i],
                        vec![t.tail_index(k)],
                        mean,
                        Relation::Gt,
                        v,
                        tol,
                    ));
                }
            }
            BMethod::RowsumGamma => {
                let st = RowStats::of(&row);
                recs.push(gamma_record(t, i, &st, st.sum, big_n * st.gamma, tol));
            }
            BMethod::Slack => {
                let st = RowStats::of(&row);
                recs.push(gamma_record(t, i, &st, st.left, st.right, tol));
            }
        }
    }
    // witness order is condition first, then row
    recs.sort_by_key(|r| r.id);
    Verdict::from_records("b", method.name(), recs)
}

/// Allocation-free B test used by the vertex oracle (slack form).
pub(crate) fn b_holds(t: &Tensor, tol: Tolerance) -> bool {
    t.rows().all(|row| {
        let st = RowStats::of(&row);
        tol.gt(st.left, st.right)
    })
}

/// Allocation-free double B test; `scratch` holds per-row (left, right).
pub(crate) fn double_b_holds(t: &Tensor, tol: Tolerance, scratch: &mut Vec<(f64, f64)>) -> bool {
    scratch.clear();
    for row in t.rows() {
        let st = RowStats::of(&row);
        if !tol.gt(st.diag, st.gamma) || !tol.ge(st.left, st.right) {
            return false;
        }
        scratch.push((st.left, st.right));
    }
    for (i, &(li, ri)) in scratch.iter().enumerate() {
        for (j, &(lj, rj)) in scratch.iter().enumerate() {
            if i != j && !tol.gt(li * lj, ri * rj) {
                return false;
            }
        }
    }
    true
}

/// Diagonal dominance: diag > (or >=) sum of |off-diagonal| in every row.
pub fn check_dd(t: &Tensor, strict: bool, tol: Tolerance) -> Verdict {
    let rel = if strict { Relation::Gt } else { Relation::Ge };
    let recs = t
        .rows()
        .map(|row| {
            let off: f64 = row.off_diagonal().map(|(_, v)| v.abs()).sum();
            ConditionRecord::new(ConditionId::Dd, vec![row.row()], vec![], row.diagonal(), rel, off, tol)
        })
        .collect();
    Verdict::from_records(
        if strict { "sdd" } else { "dd" },
        if strict { "strict" } else { "weak" },
        recs,
    )
}

/// Z-tensor test, using the convention that every off-diagonal entry is <= 0.
pub fn check_z(t: &Tensor) -> Verdict {
    for row in t.rows() {
        if let Some((k, v)) = row.off_diagonal().find(|&(_, v)| v > 0.0) {
            let rec = ConditionRecord::new(
                ConditionId::Z,
                vec![row.row()],
                vec![t.tail_index(k)],
                v,
                Relation::Le,
                0.0,
                Tolerance::EXACT,
            );
            return Verdict::from_records("z", "offdiagonal_nonpositive", vec![rec]);
        }
    }
    Verdict::from_records("z", "offdiagonal_nonpositive", Vec::new())
}

/// Double B test: (a) diag > gamma, (b) left >= right per row,
/// (c) left_i * left_j > right_i * right_j for every ordered pair of distinct rows.
pub fn check_double_b(t: &Tensor, tol: Tolerance) -> Verdict {
    let stats: Vec<RowStats> = t.rows().map(|r| RowStats::of(&r)).collect();
    let mut recs = Vec::with_capacity(t.dim() * (t.dim() + 1));
    for (i, st) in stats.iter().enumerate() {
        recs.push(ConditionRecord::new(ConditionId::A, vec![i], vec![], st.diag, Relation::Gt, st.gamma, tol));
    }
    for (i, st) in stats.iter().enumerate() {
        recs.push(ConditionRecord::new(ConditionId::B, vec![i], vec![], st.left, Relation::Ge, st.right, tol));
    }
    for (i, si) in stats.iter().enumerate() {
        for (j, sj) in stats.iter().enumerate() {
            if i != j {
                recs.push(ConditionRecord::new(
                    ConditionId::C,
                    vec![i, j],
                    vec![],
                    si.left * sj.left,
                    Relation::Gt,
                    si.right * sj.right,
                    tol,
                ));
            }
        }
    }
    Verdict::from_records("double-b", "definition", recs)
}

/// Outcome of splitting double B tensors into B tensors and the critical-row case.
#[derive(Clone, Debug, PartialEq)]
pub enum Dichotomy {
    IsB,
    /// 0-based; serialized and displayed 1-based
    CriticalRow { row: usize },
    NotDoubleB,
    /// More than one row attains slack equality. The dichotomy says this cannot
    /// happen, so it is surfaced instead of picking one.
    Anomaly { rows: Vec<usize> },
}

impl Dichotomy {
    pub fn kind(&self) -> &'static str {
        match self {
            Dichotomy::IsB => "b",
            Dichotomy::CriticalRow { .. } => "critical_row",
            Dichotomy::NotDoubleB => "not_double_b",
            Dichotomy::Anomaly { .. } => "anomaly",
        }
    }
}

impl Serialize for Dichotomy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Dichotomy", 2)?;
        st.serialize_field("kind", self.kind())?;
        match self {
            Dichotomy::CriticalRow { row } => st.serialize_field("critical_row", &(row + 1))?,
            Dichotomy::Anomaly { rows } => {
                let r: Vec<usize> = rows.iter().map(|r| r + 1).collect();
                st.serialize_field("rows", &r)?;
            }
            _ => {}
        }
        st.end()
    }
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dichotomy::IsB => write!(f, "B tensor"),
            Dichotomy::CriticalRow { row } => write!(f, "double B with critical row {}", row + 1),
            Dichotomy::NotDoubleB => write!(f, "not double B"),
            Dichotomy::Anomaly { rows } => {
                let r: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
                write!(f, "anomaly: rows {} are all critical", r.join(","))
            }
        }
    }
}

pub fn classify_double_b_dichotomy(t: &Tensor, tol: Tolerance) -> Dichotomy {
    if !check_double_b(t, tol).holds() {
        return Dichotomy::NotDoubleB;
    }
    let critical: Vec<usize> = t
        .rows()
        .filter(|row| {
            let st = RowStats::of(row);
            !tol.gt(st.left, st.right)
        })
        .map(|row| row.row())
        .collect();
    match critical.as_slice() {
        [] => Dichotomy::IsB,
        [j] => Dichotomy::CriticalRow { row: *j },
        _ => Dichotomy::Anomaly { rows: critical },
    }
}

/// B test for circulant tensors: only row 1 needs checking.
pub fn check_b_circulant(t: &Tensor, tol: Tolerance) -> Result<Verdict> {
    if !t.is_circulant() {
        return Err(Error::NotCirculant);
    }
    let st = RowStats::of(&t.row_unchecked(0));
    let rec = gamma_record(t, 0, &st, st.left, st.right, tol);
    Ok(Verdict::from_records("circulant-b", "row1_slack", vec![rec]))
}

/// P-tensor sufficient conditions for even order: B and (Z or symmetric),
/// or symmetric double B. Never fails, only holds or is inconclusive.
pub fn p_sufficient(t: &Tensor, tol: Tolerance) -> Verdict {
    const CLASS: &str = "p-sufficient";
    if !t.order().is_multiple_of(2) {
        return Verdict::inconclusive(CLASS, "sufficient", format!("order {} is odd", t.order()));
    }
    let is_b = check_b(t, BMethod::RowsumGamma, tol).holds();
    let sym = t.is_symmetric();
    if is_b && check_z(t).holds() {
        return Verdict::from_records(CLASS, "b_and_z", Vec::new());
    }
    if is_b && sym {
        return Verdict::from_records(CLASS, "symmetric_b", Vec::new());
    }
    if sym && check_double_b(t, tol).holds() {
        return Verdict::from_records(CLASS, "symmetric_double_b", Vec::new());
    }
    Verdict::inconclusive(CLASS, "sufficient", "no sufficient condition applies")
}

/// Result of searching for a vector that shows a tensor is not a P tensor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalsifyResult {
    pub falsified: bool,
    pub counterexample_x: Option<Vec<f64>>,
    /// max_i x_i (A x^(m-1))_i at the counterexample
    pub value: Option<f64>,
    pub samples_used: u64,
    pub seed: u64,
}

/// `max_i x_i * (A x^(m-1))_i`; the vector disproves P membership when this is <= 0.
pub fn p_objective(t: &Tensor, x: &[f64]) -> f64 {
    let y = t.apply_unchecked(x);
    x.iter()
        .zip(&y)
        .map(|(a, b)| a * b)
        .fold(f64::NEG_INFINITY, f64::max)
}

const SIGN_VECTOR_MAX_DIM: usize = 20;

fn structured_candidates(n: usize) -> u64 {
    let signs = if n <= SIGN_VECTOR_MAX_DIM { 1u64 << n } else { 0 };
    2 * n as u64 + signs
}

fn structured_candidate(n: usize, k: u64, x: &mut [f64]) {
    let basis = 2 * n as u64;
    if k < basis {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[(k / 2) as usize] = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    } else {
        let bits = k - basis;
        for (c, v) in x.iter_mut().enumerate() {
            *v = if bits >> c & 1 == 1 { -1.0 } else { 1.0 };
        }
    }
}

/// The `k`-th random sample: a normalized Gaussian vector from its own stream.
pub(crate) fn random_unit_vector(seed: u64, k: u64, x: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    loop {
        let mut norm2 = 0.0;
        for v in x.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
            norm2 += *v * *v;
        }
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Searches ±basis vectors, every sign vector (n <= 20), then `budget` random
/// unit vectors. The reported counterexample is the first one in that order,
/// whatever the thread count.
pub fn falsify_p(t: &Tensor, budget: u64, seed: u64) -> FalsifyResult {
    let n = t.dim();
    let structured = structured_candidates(n);
    let total = structured + budget;
    const CHUNK: u64 = 256;
    let chunks = total.div_ceil(CHUNK);
    let hit = (0..chunks).into_par_iter().find_map_first(|c| {
        let mut x = vec![0.0; n];
        for k in c * CHUNK..((c + 1) * CHUNK).min(total) {
            if k < structured {
                structured_candidate(n, k, &mut x);
            } else {
                random_unit_vector(seed, k - structured, &mut x);
            }
            let v = p_objective(t, &x);
            if v <= 0.0 {
                return Some((k, x, v));
            }
        }
        None
    });
    match hit {
        Some((k, x, v)) => FalsifyResult {
            falsified: true,
            counterexample_x: Some(x),
            value: Some(v),
            samples_used: k + 1,
            seed,
        },
        None => FalsifyResult {
            falsified: false,
            counterexample_x: None,
            value: None,
            samples_used: total,
            seed,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::RowSource;
    use crate::verdict::Status;

    const EXACT: Tolerance = Tolerance::EXACT;

    fn ex31_lower() -> Tensor {
        Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.]).unwrap()
    }

    fn ex4_lower() -> Tensor {
        Tensor::constant_pattern(3, 2, 6.0, 0.0).unwrap()
    }

    fn all_b(t: &Tensor) -> Vec<Status> {
        BMethod::ALL.iter().map(|&m| check_b(t, m, EXACT).status).collect()
    }

    #[test]
    fn check_b_examples() {
        let d = Tensor::diagonal_tensor(3, &[1.0, 1.0]).unwrap();
        assert_eq!(all_b(&d), vec![Status::Holds; 3]);
        assert_eq!(all_b(&ex31_lower()), vec![Status::Holds; 3]);
        let z = Tensor::zeros(3, 2).unwrap();
        for m in BMethod::ALL {
            let v = check_b(&z, m, EXACT);
            let w = v.witness.unwrap();
            assert_eq!(w.condition, ConditionId::A, "{m:?}");
            assert_eq!((w.row, w.lhs, w.rhs), (0, 0.0, 0.0));
        }
    }

    #[test]
    fn check_b_single_entry() {
        let pos = Tensor::new(3, 1, vec![2.0]).unwrap();
        let neg = Tensor::new(3, 1, vec![-2.0]).unwrap();
        assert_eq!(all_b(&pos), vec![Status::Holds; 3]);
        assert_eq!(all_b(&neg), vec![Status::Fails; 3]);
    }

    #[test]
    fn check_b_reports_argmax_tail() {
        // row 2 has off-diagonal 3 at tail (1,2); rowsum 6 is not > 4 * 3
        let t = Tensor::new(3, 2, vec![4., 0., 0., 0., 0., 3., 0., 3.]).unwrap();
        let v = check_b(&t, BMethod::RowsumGamma, EXACT);
        let w = v.witness.unwrap();
        assert_eq!((w.condition, w.row), (ConditionId::B, 1));
        assert_eq!(w.tail.unwrap().to_string(), "(1,2)");
        assert_eq!((w.lhs, w.rhs), (6.0, 12.0));
        let d = check_b(&t, BMethod::Definition, EXACT).witness.unwrap();
        assert_eq!(d.tail.unwrap().to_string(), "(1,2)");
    }

    #[test]
    fn check_dd_examples() {
        let id = Tensor::diagonal_tensor(3, &[1.0, 1.0]).unwrap();
        assert!(check_dd(&id, true, EXACT).holds());
        let z = Tensor::zeros(3, 2).unwrap();
        assert!(check_dd(&z, false, EXACT).holds());
        assert!(check_dd(&z, true, EXACT).fails());
        assert!(check_dd(&ex4_lower(), true, EXACT).holds());
    }

    #[test]
    fn check_z_examples() {
        assert!(check_z(&Tensor::constant_pattern(3, 2, 5.0, -1.0).unwrap()).holds());
        assert!(check_z(&ex4_lower()).holds());
        let up = Tensor::constant_pattern(3, 2, 7.0, 1.0).unwrap();
        let w = check_z(&up).witness.unwrap();
        assert_eq!((w.row, w.tail.unwrap().to_string()), (0, "(1,2)".to_string()));
    }

    #[test]
    fn check_double_b_examples() {
        assert!(check_double_b(&ex31_lower(), EXACT).holds());
        assert!(check_double_b(&ex4_lower(), EXACT).holds());
        let w = check_double_b(&Tensor::zeros(3, 2).unwrap(), EXACT).witness.unwrap();
        assert_eq!((w.condition, w.row), (ConditionId::A, 0));
    }

    fn critical_row_example() -> Tensor {
        // row 1 = [3,1,0,0]: gamma 1, left 2, right 0+1+1 = 2, so slack is exactly 0
        let mut e = ex4_lower().into_entries();
        e[..4].copy_from_slice(&[3., 1., 0., 0.]);
        Tensor::new(3, 2, e).unwrap()
    }

    #[test]
    fn dichotomy_examples() {
        assert_eq!(classify_double_b_dichotomy(&ex4_lower(), EXACT), Dichotomy::IsB);
        let t = critical_row_example();
        assert!(check_double_b(&t, EXACT).holds());
        assert!(check_b(&t, BMethod::Slack, EXACT).fails());
        assert_eq!(classify_double_b_dichotomy(&t, EXACT), Dichotomy::CriticalRow { row: 0 });
        assert_eq!(
            classify_double_b_dichotomy(&Tensor::zeros(3, 2).unwrap(), EXACT),
            Dichotomy::NotDoubleB
        );
    }

    #[test]
    fn circulant_b_examples() {
        // the circulant tensor with first row {4,0,0,1}
        let c = Tensor::circulant_from_first_row(&[4., 0., 0., 1.], 3, 2).unwrap();
        let v = check_b_circulant(&c, EXACT).unwrap();
        assert!(v.holds());
        assert!(check_b(&c, BMethod::Definition, EXACT).holds());
        let k = Tensor::constant_pattern(3, 2, 2.0, 2.0).unwrap();
        assert!(check_b_circulant(&k, EXACT).unwrap().fails());
        let neg = Tensor::circulant_from_first_row(&[5., -1., -1., -1.], 3, 2).unwrap();
        assert!(check_b_circulant(&neg, EXACT).unwrap().holds());
        assert!(matches!(check_b_circulant(&ex31_lower(), EXACT), Err(Error::NotCirculant)));
    }

    #[test]
    fn p_sufficient_examples() {
        assert_eq!(p_sufficient(&ex4_lower(), EXACT).status, Status::Inconclusive);
        let d = Tensor::diagonal_tensor(4, &[1.0, 1.0]).unwrap();
        assert!(p_sufficient(&d, EXACT).holds());
        let lifted = Tensor::constant_pattern(4, 2, 6.0, 0.0).unwrap();
        assert!(p_sufficient(&lifted, EXACT).holds());
        assert!(!falsify_p(&lifted, 2000, 3).falsified);
    }

    #[test]
    fn falsify_examples() {
        let neg = Tensor::diagonal_tensor(4, &[-1.0, -1.0, -1.0]).unwrap();
        let r = falsify_p(&neg, 10, 0);
        assert!(r.falsified);
        assert_eq!(r.counterexample_x.unwrap(), vec![1.0, 0.0, 0.0]);
        // components 2 and 3 contribute 0, so the maximum is 0
        assert_eq!(r.value, Some(0.0));
        assert_eq!(r.samples_used, 1);
        let z = falsify_p(&Tensor::zeros(3, 2).unwrap(), 1, 0);
        assert!(z.falsified);
    }

    #[test]
    fn falsify_is_deterministic() {
        // odd order identity: x = -e1 gives -1 * 1 = -1
        let t = Tensor::from_fn(3, 3, |idx| (idx[0] as f64 - idx[1] as f64) * 0.5 + idx[2] as f64 * 0.25).unwrap();
        assert_eq!(falsify_p(&t, 500, 11), falsify_p(&t, 500, 11));
        let mut a = vec![0.0; 4];
        let mut b = vec![0.0; 4];
        random_unit_vector(9, 17, &mut a);
        random_unit_vector(9, 17, &mut b);
        assert_eq!(a, b);
        let norm: f64 = a.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn row_mix_of_b_parents_is_b() {
        let a = ex31_lower();
        let c = Tensor::circulant_from_first_row(&[5., -1., 0.5, 0.], 3, 2).unwrap();
        assert!(check_b(&c, BMethod::Slack, EXACT).holds());
        let assign = vec![
            RowSource { parent: 1, permutation: vec![2, 0, 1] },
            RowSource { parent: 0, permutation: vec![1, 2, 0] },
        ];
        let mixed = crate::tensor::row_mix(&[a, c], &assign).unwrap();
        assert!(check_b(&mixed, BMethod::Definition, EXACT).holds());
    }
}
