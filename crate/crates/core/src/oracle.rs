//! Brute-force ground truth and the cross-validation suite.
//!
//! Why vertex enumeration is exact:
//! * B: each defining inequality is affine in every entry, so its worst value
//!   over the box is attained at a vertex.
//! * double B: per row, gamma_plus is a max of entries and therefore convex,
//!   so the row violation functions are convex per coordinate and peak at
//!   vertices. The pairwise products factor over disjoint row blocks with
//!   nonnegative factors, so their extremes are attained at vertices too.
//!
//! The double B oracle also checks random interior members as a guard.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::IntervalTensor;
use crate::interval_class::{
    check_interval_b, check_interval_b_zfast, check_interval_circulant, check_interval_double_b,
    check_interval_double_b_dominance, check_interval_double_b_hat_sufficient, check_interval_double_b_zfast,
    classify_interval_double_b_dichotomy, interval_b_necessary, interval_double_b_necessary, interval_p_sufficient,
    DichotomyResult, IntervalBMethod, NecessaryVariant,
};
use crate::io::{IntervalFile, TensorFile};
use crate::point::{
    b_holds, check_b, check_double_b, classify_double_b_dichotomy, double_b_holds, falsify_p, BMethod, Dichotomy,
};
use crate::tensor::{row_mix, RowSource, Tensor};
use crate::verdict::{Status, Tolerance, Verdict};

/// Default cap on the number of vertices the oracles will visit.
pub const DEFAULT_VERTEX_LIMIT: u64 = 1 << 20;
/// Random interior members checked per instance.
pub const INTERIOR_MEMBERS: usize = 64;
/// Generated bounds are multiples of 1/GRID, so every criterion is computed exactly.
pub const GRID: f64 = 64.0;

const CHUNK: u64 = 1024;

/// Verdict of a vertex oracle plus the first failing vertex, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub verdict: Verdict,
    pub vertices: u64,
    /// counter over the free positions, lowest free flat index as bit 0
    pub failing_counter: Option<u64>,
    pub failing_vertex: Option<Tensor>,
}

/// Visits vertices in ascending counter order and returns the first that fails `ok`.
fn first_failing_vertex<F>(ai: &IntervalTensor, limit: u64, ok: F) -> Result<(u64, Option<u64>)>
where
    F: Fn(&Tensor, &mut Vec<(f64, f64)>) -> bool + Sync,
{
    let free = ai.check_budget(limit)?;
    let total = 1u64 << free.len();
    let lo = ai.lower().entries();
    let hi = ai.upper().entries();
    let chunks = total.div_ceil(CHUNK);
    let hit = (0..chunks).into_par_iter().find_map_first(|c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut buf = ai.lower().clone();
        let mut scratch = Vec::new();
        ai.write_vertex(&free, start, &mut buf);
        for counter in start..end {
            if counter > start {
                // only the bits that changed since the previous counter
                let mut flips = counter ^ (counter - 1);
                let e = buf.entries_mut();
                while flips != 0 {
                    let bit = flips.trailing_zeros() as usize;
                    flips &= flips - 1;
                    let flat = free[bit];
                    e[flat] = if counter >> bit & 1 == 1 { hi[flat] } else { lo[flat] };
                }
            }
            if !ok(&buf, &mut scratch) {
                return Some(counter);
            }
        }
        None
    });
    Ok((total, hit))
}

fn vertex_at(ai: &IntervalTensor, counter: u64) -> Tensor {
    let free = ai.free_positions();
    let mut t = ai.lower().clone();
    ai.write_vertex(&free, counter, &mut t);
    t
}

/// Interval B by checking every vertex against the point B test.
pub fn oracle_interval_b(ai: &IntervalTensor, limit: u64, tol: Tolerance) -> Result<OracleResult> {
    let (total, hit) = first_failing_vertex(ai, limit, |t, _| b_holds(t, tol))?;
    Ok(match hit {
        None => OracleResult {
            verdict: Verdict::from_records("interval-b", "vertex_oracle", Vec::new())
                .with_note(format!("all {total} vertices are B tensors")),
            vertices: total,
            failing_counter: None,
            failing_vertex: None,
        },
        Some(c) => {
            let v = vertex_at(ai, c);
            let inner = check_b(&v, BMethod::Slack, tol);
            OracleResult {
                verdict: Verdict {
                    class: "interval-b",
                    method: "vertex_oracle",
                    note: Some(format!("vertex {c} of {total} is not a B tensor")),
                    ..inner
                },
                vertices: total,
                failing_counter: Some(c),
                failing_vertex: Some(v),
            }
        }
    })
}

/// Interval double B by checking every vertex, then [`INTERIOR_MEMBERS`] random members.
pub fn oracle_interval_double_b(ai: &IntervalTensor, limit: u64, tol: Tolerance) -> Result<OracleResult> {
    let (total, hit) = first_failing_vertex(ai, limit, |t, s| double_b_holds(t, tol, s))?;
    if let Some(c) = hit {
        let v = vertex_at(ai, c);
        let inner = check_double_b(&v, tol);
        return Ok(OracleResult {
            verdict: Verdict {
                class: "interval-double-b",
                method: "vertex_oracle",
                note: Some(format!("vertex {c} of {total} is not a double B tensor")),
                ..inner
            },
            vertices: total,
            failing_counter: Some(c),
            failing_vertex: Some(v),
        });
    }
    let mut scratch = Vec::new();
    for k in 0..INTERIOR_MEMBERS as u64 {
        let m = random_member(ai, 0x1e7e_0000 + k);
        if !double_b_holds(&m, tol, &mut scratch) {
            let inner = check_double_b(&m, tol);
            return Ok(OracleResult {
                verdict: Verdict {
                    class: "interval-double-b",
                    method: "vertex_oracle",
                    note: Some(format!("all vertices pass but interior member {k} does not")),
                    ..inner
                },
                vertices: total,
                failing_counter: None,
                failing_vertex: Some(m),
            });
        }
    }
    Ok(OracleResult {
        verdict: Verdict::from_records("interval-double-b", "vertex_oracle", Vec::new())
            .with_note(format!("all {total} vertices and {INTERIOR_MEMBERS} interior members are double B")),
        vertices: total,
        failing_counter: None,
        failing_vertex: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    General,
    /// every off-diagonal upper bound <= 0
    Z,
    /// both bounds circulant
    Circulant,
    /// midpoint and radius symmetric
    Symmetric,
}

impl Structure {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "general" => Some(Structure::General),
            "z" => Some(Structure::Z),
            "circulant" => Some(Structure::Circulant),
            "symmetric" => Some(Structure::Symmetric),
            _ => None,
        }
    }
}

/// Parameters of the random instance generator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub order: usize,
    pub dim: usize,
    pub diag_range: (f64, f64),
    pub offdiag_range: (f64, f64),
    pub radius_scale: f64,
    pub structure: Structure,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(order: usize, dim: usize, structure: Structure, seed: u64) -> Self {
        GeneratorSpec {
            order,
            dim,
            diag_range: (1.0, 8.0),
            offdiag_range: (-2.0, 2.0),
            radius_scale: 0.5,
            structure,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok_range = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if !ok_range(self.diag_range) || !ok_range(self.offdiag_range) {
            return Err(Error::InvalidArgument("generator ranges must be finite and nonempty".into()));
        }
        if !(self.radius_scale.is_finite() && self.radius_scale >= 0.0) {
            return Err(Error::InvalidArgument("radius_scale must be finite and >= 0".into()));
        }
        if self.structure == Structure::Z && self.offdiag_range.0 > 0.0 {
            return Err(Error::InvalidArgument("Z structure needs offdiag_range to reach <= 0".into()));
        }
        Tensor::zeros(self.order, self.dim).map(|_| ())
    }
}

fn quantize(v: f64) -> f64 {
    (v * GRID).round() / GRID
}

fn uniform(rng: &mut ChaCha8Rng, (a, b): (f64, f64)) -> f64 {
    if a == b {
        a
    } else {
        rng.random_range(a..=b)
    }
}

/// One `(lower, upper)` pair on the grid.
fn draw_bounds(rng: &mut ChaCha8Rng, range: (f64, f64), radius_scale: f64, z: bool) -> (f64, f64) {
    let range = if z { (range.0, range.1.min(0.0)) } else { range };
    let c = uniform(rng, range);
    // a fifth of the entries are degenerate
    let r = if rng.random_bool(0.2) {
        0.0
    } else {
        uniform(rng, (0.0, radius_scale))
    };
    let mut hi = quantize(c + r);
    if z {
        hi = hi.min(0.0);
    }
    let lo = quantize(c - r).min(hi);
    (lo, hi)
}

fn is_diag(idx: &[usize]) -> bool {
    idx.iter().all(|&c| c == idx[0])
}

/// Random interval tensor with bounds on the 1/64 grid. Deterministic in the seed.
pub fn random_interval_tensor(spec: &GeneratorSpec) -> Result<IntervalTensor> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (m, n) = (spec.order, spec.dim);
    let z = spec.structure == Structure::Z;
    let mut draw = |diag: bool| {
        let range = if diag { spec.diag_range } else { spec.offdiag_range };
        draw_bounds(&mut rng, range, spec.radius_scale, z && !diag)
    };
    match spec.structure {
        Structure::General | Structure::Z => {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            let shape = Tensor::zeros(m, n)?;
            for flat in 0..shape.len() {
                let (l, u) = draw(is_diag(shape.multi_index(flat).components()));
                lo.push(l);
                hi.push(u);
            }
            IntervalTensor::new(Tensor::new(m, n, lo)?, Tensor::new(m, n, hi)?)
        }
        Structure::Circulant => {
            let shape = Tensor::zeros(m, n)?;
            let diag0 = shape.diag_tail(0);
            let (lo, hi): (Vec<f64>, Vec<f64>) = (0..shape.row_len()).map(|t| draw(t == diag0)).unzip();
            IntervalTensor::new(
                Tensor::circulant_from_first_row(&lo, m, n)?,
                Tensor::circulant_from_first_row(&hi, m, n)?,
            )
        }
        Structure::Symmetric => {
            // one draw per index orbit, keyed by the sorted index
            let mut orbits: BTreeMap<Vec<usize>, (f64, f64)> = BTreeMap::new();
            let shape = Tensor::zeros(m, n)?;
            for flat in 0..shape.len() {
                let mut key = shape.multi_index(flat).components().to_vec();
                key.sort_unstable();
                orbits.entry(key.clone()).or_insert_with(|| draw(is_diag(&key)));
            }
            let pick = |idx: &[usize], upper: bool| {
                let mut key = idx.to_vec();
                key.sort_unstable();
                let (l, u) = orbits[&key];
                if upper {
                    u
                } else {
                    l
                }
            };
            IntervalTensor::new(Tensor::from_fn(m, n, |i| pick(i, false))?, Tensor::from_fn(m, n, |i| pick(i, true))?)
        }
    }
}

/// Uniform random member of the box. Deterministic in the seed.
pub fn random_member(ai: &IntervalTensor, seed: u64) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = ai
        .lower()
        .entries()
        .iter()
        .zip(ai.upper().entries())
        .map(|(&l, &u)| uniform(&mut rng, (l, u)).clamp(l, u))
        .collect();
    Tensor::new(ai.order(), ai.dim(), entries).expect("member of finite bounds")
}

/// Raises the lower diagonal bound of row 1 until the interval B slack in that
/// row is exactly zero, producing an instance on the boundary between
/// interval B and interval double B. `None` when the row has no off-diagonal entries.
pub fn manufacture_boundary(ai: &IntervalTensor) -> Option<IntervalTensor> {
    let lo = ai.lower().row_unchecked(0);
    let hi = ai.upper().row_unchecked(0);
    let n_off = lo.values().len().checked_sub(1).filter(|&k| k > 0)?;
    let sum_lo_off: f64 = lo.off_diagonal().map(|(_, v)| v).sum();
    let target = hi
        .off_diagonal()
        .map(|(j, u)| u + ((n_off - 1) as f64 * u - (sum_lo_off - lo.values()[j])))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(-sum_lo_off);
    let flat = lo.diag_tail();
    let mut l = ai.lower().clone();
    let mut u = ai.upper().clone();
    l.set_flat(flat, target);
    if u.entries()[flat] < target {
        u.set_flat(flat, target);
    }
    IntervalTensor::new(l, u).ok()
}

/// Random sub-box on the grid.
fn nested_interval(ai: &IntervalTensor, rng: &mut ChaCha8Rng) -> IntervalTensor {
    let mut lo = Vec::with_capacity(ai.lower().len());
    let mut hi = Vec::with_capacity(ai.lower().len());
    for (&l, &u) in ai.lower().entries().iter().zip(ai.upper().entries()) {
        let steps = ((u - l) * GRID).round() as u64;
        let mut a = rng.random_range(0..=steps);
        let mut b = rng.random_range(0..=steps);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        lo.push((l + a as f64 / GRID).min(u));
        hi.push((l + b as f64 / GRID).min(u));
    }
    let (m, n) = (ai.order(), ai.dim());
    IntervalTensor::new(Tensor::new(m, n, lo).expect("finite"), Tensor::new(m, n, hi).expect("finite"))
        .expect("nested bounds are ordered")
}

/// Same interval with every upper diagonal bound raised by a random grid amount.
fn raise_upper_diagonal(ai: &IntervalTensor, rng: &mut ChaCha8Rng) -> IntervalTensor {
    let mut hi = ai.upper().clone();
    for i in 0..ai.dim() {
        let flat = i * ai.row_len() + ai.lower().diag_tail(i);
        let bump = rng.random_range(0..=256u32) as f64 / GRID;
        hi.set_flat(flat, hi.entries()[flat] + bump);
    }
    IntervalTensor::new(ai.lower().clone(), hi).expect("raising an upper bound keeps order")
}

/// Mixes rows of `ai` and its K-reduction with random off-diagonal permutations,
/// applying the same assignment to both bounds.
fn mixed_interval(ai: &IntervalTensor, rng: &mut ChaCha8Rng) -> Result<IntervalTensor> {
    let (reduced, _) = ai.reduce_via_k();
    let off = ai.row_len() - 1;
    let assignment: Vec<RowSource> = (0..ai.dim())
        .map(|_| {
            let mut perm: Vec<usize> = (0..off).collect();
            for k in (1..perm.len()).rev() {
                perm.swap(k, rng.random_range(0..=k));
            }
            RowSource {
                parent: rng.random_range(0..2),
                permutation: perm,
            }
        })
        .collect();
    let lo = row_mix(&[ai.lower().clone(), reduced.lower().clone()], &assignment)?;
    let hi = row_mix(&[ai.upper().clone(), reduced.upper().clone()], &assignment)?;
    IntervalTensor::new(lo, hi)
}

/// Pass/fail counts for one property.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub agreements: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub property: &'static str,
    pub detail: String,
    pub instance: IntervalFile,
}

/// Counts for the two directions between interval B and interval double B.
/// Neither direction is asserted by the suite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InclusionProbe {
    pub interval_b: u64,
    pub interval_double_b: u64,
    pub neither: u64,
    pub manufactured_boundary: u64,
    /// interval double B but not interval B (the critical-row case)
    pub double_b_not_b: u64,
    pub double_b_not_b_manufactured: u64,
    /// interval B but not interval double B; expected to stay 0
    pub b_not_double_b: u64,
    /// the argmax-only conditions pass although the family is not interval double B
    pub rowmax_pass_not_double_b: u64,
    /// "interval double B implies interval B" has a counterexample
    pub double_b_implies_b_refuted: bool,
    /// "interval B implies interval double B" has a counterexample
    pub b_implies_double_b_refuted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub trials: u64,
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub structure: Structure,
    pub properties: BTreeMap<&'static str, Tally>,
    pub counterexamples: Vec<Counterexample>,
    pub probe: InclusionProbe,
}

impl SuiteReport {
    pub fn total_violations(&self) -> u64 {
        self.properties.values().map(|t| t.violations).sum()
    }

    pub fn tally(&self, property: &str) -> Tally {
        self.properties.get(property).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub structure: Structure,
    pub vertex_limit: u64,
    /// every k-th trial gets a manufactured boundary row; 0 disables
    pub boundary_every: u64,
    pub tolerance: Tolerance,
}

impl SuiteConfig {
    pub fn new(order: usize, dim: usize, trials: u64, seed: u64) -> Self {
        SuiteConfig {
            trials,
            seed,
            order,
            dim,
            structure: Structure::General,
            vertex_limit: DEFAULT_VERTEX_LIMIT,
            boundary_every: 4,
            tolerance: Tolerance::EXACT,
        }
    }

    pub fn structure(mut self, s: Structure) -> Self {
        self.structure = s;
        self
    }
}

/// Seed of trial `t`, independent of how trials are scheduled.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng.next_u64()
}

struct TrialOutcome {
    checks: Vec<(&'static str, bool, String)>,
    probe: InclusionProbe,
    instance: IntervalTensor,
}

fn run_trial(cfg: &SuiteConfig, t: u64) -> Result<TrialOutcome> {
    let tol = cfg.tolerance;
    let seed = trial_seed(cfg.seed, t);
    let spec = GeneratorSpec::new(cfg.order, cfg.dim, cfg.structure, seed);
    let mut ai = random_interval_tensor(&spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0bad_5eed);
    let mut manufactured = false;
    if cfg.boundary_every > 0 && t % cfg.boundary_every == cfg.boundary_every - 1 && cfg.structure != Structure::Circulant {
        if let Some(b) = manufacture_boundary(&ai) {
            ai = b;
            manufactured = true;
        }
    }
    let mut checks: Vec<(&'static str, bool, String)> = Vec::new();
    let mut check = |name: &'static str, ok: bool, detail: String| checks.push((name, ok, detail));

    let ib = check_interval_b(&ai, IntervalBMethod::Theorem, tol);
    let idb = check_interval_double_b(&ai, tol);
    let ob = oracle_interval_b(&ai, cfg.vertex_limit, tol)?;
    let odb = oracle_interval_double_b(&ai, cfg.vertex_limit, tol)?;
    check(
        "oracle_b",
        ib.status == ob.verdict.status,
        format!("theorem {} vs oracle {}", ib.status, ob.verdict.status),
    );
    check(
        "oracle_double_b",
        idb.status == odb.verdict.status,
        format!("theorem {} vs oracle {}", idb.status, odb.verdict.status),
    );

    let methods: Vec<Status> = IntervalBMethod::ALL
        .iter()
        .map(|&m| check_interval_b(&ai, m, tol).status)
        .collect();
    check(
        "interval_b_methods",
        methods.iter().all(|&s| s == methods[0]),
        format!("{methods:?}"),
    );

    let members: Vec<Tensor> = (0..INTERIOR_MEMBERS as u64)
        .map(|k| random_member(&ai, seed.wrapping_add(k)))
        .collect();
    let probes = [ai.lower().clone(), ai.upper().clone(), ai.extreme_prime(), members[0].clone()];
    for p in &probes {
        let st: Vec<Status> = BMethod::ALL.iter().map(|&m| check_b(p, m, tol).status).collect();
        check("point_b_methods", st.iter().all(|&s| s == st[0]), format!("{st:?}"));
        let b = st[0] == Status::Holds;
        let db = check_double_b(p, tol).holds();
        check("point_b_implies_double_b", !b || db, format!("b {b}, double b {db}"));
        let d = classify_double_b_dichotomy(p, tol);
        let ok = match &d {
            Dichotomy::IsB => b && db,
            Dichotomy::CriticalRow { .. } => !b && db,
            Dichotomy::NotDoubleB => !db,
            Dichotomy::Anomaly { .. } => false,
        };
        check("point_dichotomy", ok, format!("{d:?}"));
    }

    if ai.is_interval_z() {
        let zb = check_interval_b_zfast(&ai, tol)?;
        check("zfast_b", zb.status == ib.status, format!("zfast {} vs {}", zb.status, ib.status));
        let zdb = check_interval_double_b_zfast(&ai, tol)?;
        check(
            "zfast_double_b",
            zdb.status == idb.status,
            format!("zfast {} vs {}", zdb.status, idb.status),
        );
    }
    if ai.is_circulant() {
        let c = check_interval_circulant(&ai, tol)?;
        check("circulant_b", c.status == ib.status, format!("circulant {} vs {}", c.status, ib.status));
        check(
            "circulant_double_b",
            c.status == idb.status,
            format!("circulant {} vs {}", c.status, idb.status),
        );
    }

    if ib.holds() {
        check(
            "interval_b_vertices",
            ob.verdict.holds() && odb.verdict.holds(),
            format!("vertex B {}, vertex double B {}", ob.verdict.status, odb.verdict.status),
        );
        let bad = members.iter().position(|m| !check_b(m, BMethod::Slack, tol).holds());
        check("interval_b_members", bad.is_none(), format!("member {bad:?} is not B"));
        let nec = interval_b_necessary(&ai, tol);
        check("necessary_b", nec.passed(), format!("{:?}", nec.first_failure()));
        let mixed = mixed_interval(&ai, &mut rng)?;
        let mv = check_interval_b(&mixed, IntervalBMethod::Theorem, tol);
        check("row_mix_b", mv.holds(), format!("mixed interval {}", mv.status));
    }
    if idb.holds() {
        for variant in [NecessaryVariant::Extremes, NecessaryVariant::Rowmax] {
            let nec = interval_double_b_necessary(&ai, variant, tol);
            check("necessary_double_b", nec.passed(), format!("{variant:?}: {:?}", nec.first_failure()));
        }
    }
    let hat = check_interval_double_b_hat_sufficient(&ai, tol);
    if hat.holds() {
        check("hat_sufficient", idb.holds(), format!("hat holds, theorem {}", idb.status));
    }
    let dom = check_interval_double_b_dominance(&ai, tol);
    if dom.status != Status::Inconclusive {
        check("dominance", dom.status == idb.status, format!("dominance {} vs {}", dom.status, idb.status));
    }

    let (reduced, _) = ai.reduce_via_k();
    let rb = check_interval_b(&reduced, IntervalBMethod::Theorem, tol).status;
    let rdb = check_interval_double_b(&reduced, tol).status;
    check("k_reduction", rb == ib.status && rdb == idb.status, format!("b {rb}/{}, double b {rdb}/{}", ib.status, idb.status));

    let nested = nested_interval(&ai, &mut rng);
    let nb = check_interval_b(&nested, IntervalBMethod::Theorem, tol);
    let ndb = check_interval_double_b(&nested, tol);
    check(
        "containment",
        (!ib.holds() || nb.holds()) && (!idb.holds() || ndb.holds()),
        format!("outer {}/{}, inner {}/{}", ib.status, idb.status, nb.status, ndb.status),
    );

    let raised = raise_upper_diagonal(&ai, &mut rng);
    let rs = check_interval_b(&raised, IntervalBMethod::Theorem, tol).status;
    check("diagonal_irrelevance", rs == ib.status, format!("{rs} vs {}", ib.status));

    let dich = classify_interval_double_b_dichotomy(&ai, tol);
    let ok = match &dich {
        DichotomyResult::IntervalB => ib.holds() && idb.holds(),
        DichotomyResult::CriticalRow { .. } => !ib.holds() && idb.holds(),
        DichotomyResult::NotDoubleB => !idb.holds(),
        DichotomyResult::Anomaly { .. } => false,
    };
    check("interval_dichotomy", ok, dich.to_string());

    if ai.order() % 2 == 0 && interval_p_sufficient(&ai, tol).holds() {
        let bad = members.iter().take(4).position(|m| falsify_p(m, 256, seed).falsified);
        check("interval_p_members", bad.is_none(), format!("member {bad:?} falsified"));
    }

    let mut probe = InclusionProbe::default();
    match (ib.holds(), idb.holds()) {
        (true, true) => probe.interval_b += 1,
        (false, true) => {
            probe.double_b_not_b += 1;
            probe.double_b_not_b_manufactured += manufactured as u64;
        }
        (true, false) => probe.b_not_double_b += 1,
        (false, false) => probe.neither += 1,
    }
    probe.interval_double_b += idb.holds() as u64;
    probe.manufactured_boundary += manufactured as u64;
    if !idb.holds() && interval_double_b_necessary(&ai, NecessaryVariant::Rowmax, tol).passed() {
        probe.rowmax_pass_not_double_b += 1;
    }

    Ok(TrialOutcome {
        checks,
        probe,
        instance: ai,
    })
}

/// Runs every cross-check on `trials` generated instances. Trials run in
/// parallel; the report is identical to a sequential run.
pub fn equivalence_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let mut report = SuiteReport {
        trials: cfg.trials,
        seed: cfg.seed,
        order: cfg.order,
        dim: cfg.dim,
        structure: cfg.structure,
        properties: BTreeMap::new(),
        counterexamples: Vec::new(),
        probe: InclusionProbe::default(),
    };
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        let p = &outcome.probe;
        let r = &mut report.probe;
        r.interval_b += p.interval_b;
        r.interval_double_b += p.interval_double_b;
        r.neither += p.neither;
        r.manufactured_boundary += p.manufactured_boundary;
        r.double_b_not_b += p.double_b_not_b;
        r.double_b_not_b_manufactured += p.double_b_not_b_manufactured;
        r.b_not_double_b += p.b_not_double_b;
        r.rowmax_pass_not_double_b += p.rowmax_pass_not_double_b;
        for (name, ok, detail) in outcome.checks {
            let tally = report.properties.entry(name).or_default();
            tally.checked += 1;
            if ok {
                tally.agreements += 1;
            } else {
                tally.violations += 1;
                report.counterexamples.push(Counterexample {
                    trial: t as u64,
                    property: name,
                    detail,
                    instance: IntervalFile::from(&outcome.instance),
                });
            }
        }
    }
    report.probe.double_b_implies_b_refuted = report.probe.double_b_not_b > 0;
    report.probe.b_implies_double_b_refuted = report.probe.b_not_double_b > 0;
    Ok(report)
}

/// A member of a certified interval P family that the falsifier broke.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PFalsification {
    pub instance: IntervalFile,
    pub member: TensorFile,
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PSuiteReport {
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub instances: usize,
    pub draws: u64,
    pub members_checked: u64,
    pub budget: u64,
    /// instances where the interval P sufficient test did not hold
    pub not_certified: usize,
    pub falsified: Vec<PFalsification>,
}

/// Draws symmetric even-order interval B families and tries to falsify the P
/// property on random members and on every sign-transform member.
pub fn interval_p_suite(order: usize, dim: usize, instances: usize, budget: u64, seed: u64) -> Result<PSuiteReport> {
    if !order.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("interval P suite needs even order, got {order}")));
    }
    let tol = Tolerance::EXACT;
    let mut picked = Vec::new();
    let mut draws = 0u64;
    while picked.len() < instances {
        let mut spec = GeneratorSpec::new(order, dim, Structure::Symmetric, trial_seed(seed, draws));
        // heavier diagonals so that interval B families are common
        spec.diag_range = (4.0, 16.0);
        spec.offdiag_range = (-1.0, 1.0);
        draws += 1;
        let ai = random_interval_tensor(&spec)?;
        if check_interval_b(&ai, IntervalBMethod::Theorem, tol).holds() {
            picked.push(ai);
        }
        if draws > 1000 * instances as u64 + 1000 {
            return Err(Error::InvalidArgument("could not draw enough interval B families".into()));
        }
    }
    let signs: Vec<Vec<f64>> = (0..1u64 << dim)
        .map(|bits| (0..dim).map(|c| if bits >> c & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect();
    let per_instance: Vec<(u64, bool, Vec<PFalsification>)> = picked
        .par_iter()
        .enumerate()
        .map(|(k, ai)| {
            let certified = interval_p_sufficient(ai, tol).holds();
            let (c, d) = ai.midpoint_radius();
            let mut members: Vec<Tensor> = (0..INTERIOR_MEMBERS as u64)
                .map(|j| random_member(ai, trial_seed(seed ^ 0x7e57, (k as u64) << 16 | j)))
                .collect();
            members.extend(signs.iter().map(|z| Tensor::sign_transform(&c, &d, z).expect("valid sign vector")));
            let mut bad = Vec::new();
            for m in &members {
                let r = falsify_p(m, budget, seed);
                if r.falsified {
                    bad.push(PFalsification {
                        instance: IntervalFile::from(ai),
                        member: TensorFile::from(m),
                        x: r.counterexample_x.unwrap_or_default(),
                        value: r.value.unwrap_or(f64::NAN),
                    });
                }
            }
            (members.len() as u64, certified, bad)
        })
        .collect();
    let mut report = PSuiteReport {
        seed,
        order,
        dim,
        instances,
        draws,
        members_checked: 0,
        budget,
        not_certified: 0,
        falsified: Vec::new(),
    };
    for (count, certified, bad) in per_instance {
        report.members_checked += count;
        report.not_certified += (!certified) as usize;
        report.falsified.extend(bad);
    }
    Ok(report)
}
