//! Property tests over random tensors and interval families on a dyadic grid,
//! so every comparison is exact.

use itensor::io::{format_f64, to_report_json};
use itensor::oracle::DEFAULT_VERTEX_LIMIT;
use itensor::{
    check_b, check_double_b, check_interval_b, check_interval_double_b, classify_double_b_dichotomy,
    classify_interval_double_b_dichotomy, falsify_p, oracle_interval_b, oracle_interval_double_b, parse_input,
    random_member, BMethod, Dichotomy, DichotomyResult, Input, IntervalBMethod, IntervalFile, IntervalTensor, Status,
    Tensor, TensorFile, Tolerance,
};
use proptest::prelude::*;

const EXACT: Tolerance = Tolerance::EXACT;

fn grid(lo: i32, hi: i32) -> impl Strategy<Value = f64> {
    (lo..=hi).prop_map(|k| k as f64 / 64.0)
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((2, 2)), Just((2, 3)), Just((3, 2)), Just((4, 2)), Just((3, 3))]
}

/// Diagonal entries in [0, 8], off-diagonal entries in [-2, 2].
fn tensor() -> impl Strategy<Value = Tensor> {
    shapes().prop_flat_map(|(m, n)| {
        let len = n.pow(m as u32);
        (prop::collection::vec(grid(0, 512), len), prop::collection::vec(grid(-128, 128), len)).prop_map(
            move |(d, o)| {
                Tensor::from_fn(m, n, |idx| {
                    let flat = idx.iter().fold(0, |acc, &c| acc * n + c);
                    if idx.iter().all(|&c| c == idx[0]) {
                        d[flat]
                    } else {
                        o[flat]
                    }
                })
                .unwrap()
            },
        )
    })
}

/// Families small enough for the vertex oracle.
fn small_interval() -> impl Strategy<Value = IntervalTensor> {
    prop_oneof![Just((3usize, 2usize)), Just((2, 3)), Just((2, 2))].prop_flat_map(|(m, n)| {
        let len = n.pow(m as u32);
        (
            prop::collection::vec(grid(-128, 128), len),
            prop::collection::vec(grid(0, 448), n),
            prop::collection::vec(grid(0, 48), len),
        )
            .prop_map(move |(off, diag, width)| {
                let lower = Tensor::from_fn(m, n, |idx| {
                    let flat = idx.iter().fold(0, |acc, &c| acc * n + c);
                    if idx.iter().all(|&c| c == idx[0]) {
                        diag[idx[0]]
                    } else {
                        off[flat]
                    }
                })
                .unwrap();
                let upper = Tensor::new(
                    m,
                    n,
                    lower.entries().iter().zip(&width).map(|(l, w)| l + w).collect(),
                )
                .unwrap();
                IntervalTensor::new(lower, upper).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flat_and_multi_index_round_trip(t in tensor(), k in 0usize..1024) {
        let flat = k % t.len();
        let idx = t.multi_index(flat);
        prop_assert_eq!(t.flat_index(idx.components()).unwrap(), flat);
    }

    #[test]
    fn b_methods_agree(t in tensor()) {
        let st: Vec<Status> = BMethod::ALL.iter().map(|&m| check_b(&t, m, EXACT).status).collect();
        prop_assert!(st.iter().all(|&s| s == st[0]), "{:?}", st);
    }

    #[test]
    fn b_implies_double_b(t in tensor()) {
        if check_b(&t, BMethod::Slack, EXACT).holds() {
            prop_assert!(check_double_b(&t, EXACT).holds());
        }
    }

    #[test]
    fn point_dichotomy_is_consistent(t in tensor()) {
        let b = check_b(&t, BMethod::Definition, EXACT).holds();
        let db = check_double_b(&t, EXACT).holds();
        match classify_double_b_dichotomy(&t, EXACT) {
            Dichotomy::IsB => prop_assert!(b && db),
            Dichotomy::CriticalRow { .. } => prop_assert!(!b && db),
            Dichotomy::NotDoubleB => prop_assert!(!db),
            Dichotomy::Anomaly { rows } => prop_assert!(false, "anomaly {:?}", rows),
        }
    }

    #[test]
    fn failing_verdicts_carry_a_failing_witness(t in tensor()) {
        for v in [check_b(&t, BMethod::Slack, EXACT), check_double_b(&t, EXACT)] {
            prop_assert_eq!(v.fails(), v.witness.is_some());
            prop_assert_eq!(v.fails(), v.conditions.iter().any(|r| !r.passed));
        }
    }

    #[test]
    fn degenerate_interval_matches_point_tests(t in tensor()) {
        let d = IntervalTensor::degenerate(t.clone());
        prop_assert_eq!(
            check_interval_b(&d, IntervalBMethod::Theorem, EXACT).status,
            check_b(&t, BMethod::Definition, EXACT).status
        );
        prop_assert_eq!(check_interval_double_b(&d, EXACT).status, check_double_b(&t, EXACT).status);
    }

    #[test]
    fn tensor_files_round_trip(t in tensor()) {
        let text = to_report_json(&TensorFile::from(&t));
        match parse_input(&text).unwrap() {
            Input::Tensor(back) => prop_assert_eq!(back, t),
            Input::Interval(_) => prop_assert!(false),
        }
    }

    #[test]
    fn falsifier_is_deterministic(t in tensor(), seed in any::<u64>()) {
        prop_assert_eq!(falsify_p(&t, 64, seed), falsify_p(&t, 64, seed));
    }

    #[test]
    fn number_format_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let back: f64 = format_f64(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interval_b_methods_agree(ai in small_interval()) {
        let st: Vec<Status> = IntervalBMethod::ALL.iter().map(|&m| check_interval_b(&ai, m, EXACT).status).collect();
        prop_assert!(st.iter().all(|&s| s == st[0]), "{:?}", st);
    }

    #[test]
    fn interval_b_matches_vertex_oracle(ai in small_interval()) {
        let o = oracle_interval_b(&ai, DEFAULT_VERTEX_LIMIT, EXACT).unwrap();
        prop_assert_eq!(check_interval_b(&ai, IntervalBMethod::Theorem, EXACT).status, o.verdict.status);
    }

    #[test]
    fn interval_double_b_matches_vertex_oracle(ai in small_interval()) {
        let o = oracle_interval_double_b(&ai, DEFAULT_VERTEX_LIMIT, EXACT).unwrap();
        prop_assert_eq!(check_interval_double_b(&ai, EXACT).status, o.verdict.status);
    }

    #[test]
    fn members_of_interval_b_families_are_b(ai in small_interval(), seed in any::<u64>()) {
        let m = random_member(&ai, seed);
        prop_assert!(ai.contains(&m).unwrap());
        if check_interval_b(&ai, IntervalBMethod::Theorem, EXACT).holds() {
            prop_assert!(check_b(&m, BMethod::Slack, EXACT).holds());
        }
        if check_interval_double_b(&ai, EXACT).holds() {
            prop_assert!(check_double_b(&m, EXACT).holds());
        }
    }

    #[test]
    fn interval_dichotomy_is_consistent(ai in small_interval()) {
        let b = check_interval_b(&ai, IntervalBMethod::Theorem, EXACT).holds();
        let db = check_interval_double_b(&ai, EXACT).holds();
        match classify_interval_double_b_dichotomy(&ai, EXACT) {
            DichotomyResult::IntervalB => prop_assert!(b && db),
            DichotomyResult::CriticalRow { .. } => prop_assert!(!b && db),
            DichotomyResult::NotDoubleB => prop_assert!(!db),
            DichotomyResult::Anomaly { rows } => prop_assert!(false, "anomaly {:?}", rows),
        }
    }

    #[test]
    fn k_reduction_keeps_both_verdicts(ai in small_interval()) {
        let (r, _) = ai.reduce_via_k();
        prop_assert!(ai.contains(r.lower()).unwrap() && ai.contains(r.upper()).unwrap());
        prop_assert_eq!(
            check_interval_b(&r, IntervalBMethod::Theorem, EXACT).status,
            check_interval_b(&ai, IntervalBMethod::Theorem, EXACT).status
        );
        prop_assert_eq!(check_interval_double_b(&r, EXACT).status, check_interval_double_b(&ai, EXACT).status);
    }

    #[test]
    fn sign_transforms_stay_in_the_family(ai in small_interval(), bits in any::<u8>()) {
        let (c, d) = ai.midpoint_radius();
        let z: Vec<f64> = (0..ai.dim()).map(|k| if bits >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let member = Tensor::sign_transform(&c, &d, &z).unwrap();
        prop_assert!(ai.contains(&member).unwrap());
    }

    #[test]
    fn interval_files_round_trip(ai in small_interval()) {
        let text = to_report_json(&IntervalFile::from(&ai));
        match parse_input(&text).unwrap() {
            Input::Interval(back) => prop_assert_eq!(back, ai),
            Input::Tensor(_) => prop_assert!(false),
        }
    }
}
