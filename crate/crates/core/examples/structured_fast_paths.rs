//! Shortcuts for Z and circulant families, checked against the general tests.
//!
//!     cargo run --example structured_fast_paths

use itensor::{
    check_interval_b, check_interval_b_zfast, check_interval_circulant, check_interval_double_b,
    check_interval_double_b_zfast, random_interval_tensor, GeneratorSpec, IntervalBMethod, Structure, Tolerance,
};

fn main() -> itensor::Result<()> {
    let tol = Tolerance::EXACT;
    let mut agree = [0usize; 3];
    let trials = 200;
    for seed in 0..trials {
        let z = random_interval_tensor(&GeneratorSpec::new(3, 2, Structure::Z, seed))?;
        let general = check_interval_b(&z, IntervalBMethod::Theorem, tol).status;
        agree[0] += (check_interval_b_zfast(&z, tol)?.status == general) as usize;
        let general = check_interval_double_b(&z, tol).status;
        agree[1] += (check_interval_double_b_zfast(&z, tol)?.status == general) as usize;

        let c = random_interval_tensor(&GeneratorSpec::new(3, 3, Structure::Circulant, seed))?;
        let fast = check_interval_circulant(&c, tol)?.status;
        agree[2] += (fast == check_interval_b(&c, IntervalBMethod::Theorem, tol).status
            && fast == check_interval_double_b(&c, tol).status) as usize;
    }
    println!("Z interval B (row sums only)       {}/{trials}", agree[0]);
    println!("Z interval double B (lower only)   {}/{trials}", agree[1]);
    println!("circulant (first row only)         {}/{trials}", agree[2]);

    let sample = random_interval_tensor(&GeneratorSpec::new(3, 3, Structure::Circulant, 4))?;
    println!("\ncirculant sample: {}", check_interval_circulant(&sample, tol)?.status);
    println!("  first lower row {:?}", sample.lower().row(0)?.values());
    println!("  first upper row {:?}", sample.upper().row(0)?.values());
    Ok(())
}
