//! Brute-force vertex oracles and the randomized cross-validation suite.
//!
//!     cargo run --release --example oracle_cross_validation [trials] [seed]

use itensor::oracle::DEFAULT_VERTEX_LIMIT;
use itensor::{
    equivalence_suite, oracle_interval_b, oracle_interval_double_b, IntervalTensor, SuiteConfig, Tensor, Tolerance,
};

fn main() -> itensor::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    let family = IntervalTensor::new(
        Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.])?,
        Tensor::new(3, 2, vec![5., 1., 1., 2., 1., 2., 2., 5.])?,
    )?;
    let r = oracle_interval_b(&family, DEFAULT_VERTEX_LIMIT, Tolerance::EXACT)?;
    println!("oracle interval B: {} ({} vertices)", r.verdict.status, r.vertices);
    if let Some(v) = &r.failing_vertex {
        println!("  failing vertex {:?}", v.entries());
    }
    let r = oracle_interval_double_b(&family, DEFAULT_VERTEX_LIMIT, Tolerance::EXACT)?;
    println!("oracle interval double B: {}", r.verdict.status);

    for (m, n, t) in [(3, 2, trials), (2, 3, trials / 2)] {
        let report = equivalence_suite(&SuiteConfig::new(m, n, t, seed))?;
        println!("\nm={m} n={n} trials={t} seed={seed}: {} violations", report.total_violations());
        for (name, tally) in &report.properties {
            println!("  {name:<26} {:>5}/{:<5}", tally.agreements, tally.checked);
        }
        let p = &report.probe;
        println!(
            "  interval B {}, interval double B {}, double B only {} ({} from manufactured boundaries)",
            p.interval_b, p.interval_double_b, p.double_b_not_b, p.double_b_not_b_manufactured
        );
        println!(
            "  double B => B is {}",
            if p.double_b_implies_b_refuted { "refuted" } else { "unrefuted" }
        );
    }
    Ok(())
}
