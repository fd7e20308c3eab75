//! Membership tests for structured real tensors and interval tensor families.
//!
//! A tensor of order `m` and dimension `n` stores `n^m` entries row-major with
//! the first index slowest; row `i` is the contiguous block of `n^(m-1)`
//! entries whose first index is `i`. Indices are 0-based in the API and
//! 1-based in reports and `Display` output.
//!
//! ```
//! use itensor::{check_interval_b, IntervalBMethod, IntervalTensor, Tensor, Tolerance};
//!
//! let lower = Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.]).unwrap();
//! let upper = Tensor::new(3, 2, vec![5., 1., 1., 2., 1., 2., 2., 5.]).unwrap();
//! let family = IntervalTensor::new(lower, upper).unwrap();
//! let v = check_interval_b(&family, IntervalBMethod::Theorem, Tolerance::EXACT);
//! let w = v.witness.unwrap();
//! assert_eq!((w.row, w.lhs, w.rhs), (0, 4.0, 6.0));
//! ```

pub mod error;
pub mod tensor;
pub mod verdict;
pub mod point;
pub mod interval;
pub mod interval_class;
pub mod io;
pub mod oracle;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
pub use interval::{IntervalTensor, VertexSelector};
pub use interval_class::{
    check_interval_b, check_interval_b_zfast, check_interval_circulant, check_interval_double_b,
    check_interval_double_b_dominance, check_interval_double_b_hat_sufficient, check_interval_double_b_zfast,
    classify_interval_double_b_dichotomy, interval_b_necessary, interval_double_b_necessary, interval_p_sufficient,
    CriticalMode, DichotomyResult, IntervalBMethod, NecessaryReport, NecessaryVariant,
};
pub use io::{parse_input, parse_interval, parse_tensor, Input, IntervalFile, TensorFile};
pub use oracle::{
    equivalence_suite, oracle_interval_b, oracle_interval_double_b, random_interval_tensor, random_member,
    GeneratorSpec, Structure, SuiteConfig, SuiteReport,
};
pub use point::{
    check_b, check_b_circulant, check_dd, check_double_b, check_z, classify_double_b_dichotomy, falsify_p,
    p_objective, p_sufficient, BMethod, Dichotomy, FalsifyResult,
};
pub use tensor::{row_mix, MultiIndex, RowSource, RowView, Tensor};
pub use verdict::{ConditionId, ConditionRecord, Relation, Status, Tolerance, Verdict, Witness};
