//! Interval double B families: the full condition log, the dichotomy between
//! interval B and the critical-row case, and the cheaper shortcuts.
//!
//!     cargo run --example interval_double_b

use itensor::{
    check_interval_b, check_interval_double_b, check_interval_double_b_dominance,
    check_interval_double_b_hat_sufficient, classify_interval_double_b_dichotomy, interval_double_b_necessary,
    IntervalBMethod, IntervalTensor, NecessaryVariant, Tensor, Tolerance,
};

fn main() -> itensor::Result<()> {
    let tol = Tolerance::EXACT;
    let family = IntervalTensor::new(
        Tensor::constant_pattern(3, 2, 6.0, 0.0)?,
        Tensor::constant_pattern(3, 2, 7.0, 1.0)?,
    )?;
    let v = check_interval_double_b(&family, tol);
    println!("interval double B: {}", v.status);
    for rec in &v.conditions {
        println!("  {rec}");
    }

    // Lower the first diagonal to 3: row 1 now meets its interval B bound with
    // equality, so the family is double B without being B.
    let mut lo = family.lower().entries().to_vec();
    lo[0] = 3.0;
    let critical = IntervalTensor::new(Tensor::new(3, 2, lo)?, family.upper().clone())?;
    for (name, ai) in [("example", &family), ("critical", &critical)] {
        println!("\n{name}");
        println!("  interval B         {}", check_interval_b(ai, IntervalBMethod::Theorem, tol).status);
        println!("  interval double B  {}", check_interval_double_b(ai, tol).status);
        println!("  dichotomy          {}", classify_interval_double_b_dichotomy(ai, tol));
        println!("  hat shortcut       {}", check_interval_double_b_hat_sufficient(ai, tol).status);
        println!("  dominance          {}", check_interval_double_b_dominance(ai, tol).status);
        for variant in [NecessaryVariant::Extremes, NecessaryVariant::Rowmax] {
            let rep = interval_double_b_necessary(ai, variant, tol);
            println!("  necessary {:<8} {}", format!("{variant:?}"), if rep.passed() { "pass" } else { "fail" });
        }
    }
    Ok(())
}
