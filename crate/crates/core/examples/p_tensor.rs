//! P tensors: sufficient conditions, the sampling falsifier, and the interval
//! version on a symmetric family.
//!
//!     cargo run --example p_tensor

use itensor::{falsify_p, interval_p_sufficient, p_sufficient, IntervalTensor, Tensor, Tolerance};

fn main() -> itensor::Result<()> {
    let tol = Tolerance::EXACT;

    // even order, symmetric, B: P by the symmetric B criterion
    let good = Tensor::constant_pattern(4, 2, 10.0, 0.5)?;
    let v = p_sufficient(&good, tol);
    println!("sufficient test: {} via {}", v.status, v.method);
    let r = falsify_p(&good, 10_000, 1);
    println!("falsifier: {} after {} samples", if r.falsified { "counterexample" } else { "none" }, r.samples_used);

    // negative diagonal: at x = e1 the products are -1 and 0, so the max is 0
    let bad = Tensor::diagonal_tensor(4, &[-1.0, 2.0])?;
    let r = falsify_p(&bad, 10_000, 1);
    println!("\nnegative diagonal: falsified={} x={:?} value={:?}", r.falsified, r.counterexample_x, r.value);

    let family = IntervalTensor::new(
        Tensor::constant_pattern(4, 2, 9.0, 0.0)?,
        Tensor::constant_pattern(4, 2, 11.0, 0.5)?,
    )?;
    let v = interval_p_sufficient(&family, tol);
    println!("\ninterval family: {} via {}", v.status, v.method);
    let (mid, rad) = family.midpoint_radius();
    for z in [[1.0, 1.0], [1.0, -1.0]] {
        let member = Tensor::sign_transform(&mid, &rad, &z)?;
        println!("  sign {z:?}: falsified={}", falsify_p(&member, 10_000, 1).falsified);
    }
    Ok(())
}
