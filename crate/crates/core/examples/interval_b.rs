//! Interval B families: the four equivalent tests, the failing witness, and
//! the necessary-condition report.
//!
//!     cargo run --example interval_b

use itensor::{check_interval_b, interval_b_necessary, IntervalBMethod, IntervalTensor, Tensor, Tolerance};

fn main() -> itensor::Result<()> {
    let tol = Tolerance::EXACT;
    let lower = Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.])?;
    let upper = Tensor::new(3, 2, vec![5., 1., 1., 2., 1., 2., 2., 5.])?;
    let family = IntervalTensor::new(lower.clone(), upper.clone())?;

    println!("lower {:?}\nupper {:?}", lower.entries(), upper.entries());
    for m in IntervalBMethod::ALL {
        let v = check_interval_b(&family, m, tol);
        println!("{:<9} {}", m.name(), v.status);
        if let Some(w) = &v.witness {
            println!("          {w}");
        }
    }

    // Tightening the three upper bounds that mix index 1 and 2 rescues row 1
    // at tail (2,2) but the other tails still fail.
    let mut clamped = upper.entries().to_vec();
    for flat in [3, 5, 6] {
        clamped[flat] = 1.0;
    }
    let clamped = IntervalTensor::new(lower, Tensor::new(3, 2, clamped)?)?;
    let v = check_interval_b(&clamped, IntervalBMethod::Theorem, tol);
    println!("\nclamped: {}", v.status);
    for rec in &v.conditions {
        println!("  {rec}");
    }

    let nec = interval_b_necessary(&family, tol);
    println!("\nnecessary conditions pass: {}", nec.passed());
    if let Some(c) = nec.first_failure() {
        println!("  first failure: {} on row {:?}", c.name, c.row.map(|r| r + 1));
    }
    Ok(())
}
