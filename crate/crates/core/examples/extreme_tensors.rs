//! The extreme members used in the proofs: single and double raises, the
//! primed tensor, the row-max variant, the hat tensor and the K-reduction.
//!
//!     cargo run --example extreme_tensors

use itensor::{check_b, check_double_b, BMethod, IntervalTensor, Tensor, Tolerance};

fn show(name: &str, t: &Tensor) {
    let tol = Tolerance::EXACT;
    println!(
        "{name:<22} {:?}  B={} double-B={}",
        t.entries(),
        check_b(t, BMethod::Slack, tol).status,
        check_double_b(t, tol).status
    );
}

fn main() -> itensor::Result<()> {
    let family = IntervalTensor::new(
        Tensor::new(3, 2, vec![4., 0., 0., 1., 0., 1., 1., 4.])?,
        Tensor::new(3, 2, vec![5., 1., 1., 2., 1., 2., 2., 5.])?,
    )?;
    show("lower", family.lower());
    show("upper", family.upper());
    show("single raise 1,(2,2)", &family.extreme_single_raise(0, &[1, 1])?);
    show("double raise", &family.extreme_double_raise((0, &[1, 1]), (1, &[0, 0]))?);
    show("prime", &family.extreme_prime());
    show("row max except 1", &family.extreme_row_max_except(0)?);
    show("hat", &family.extreme_hat());

    let (reduced, k) = family.reduce_via_k();
    let k: Vec<String> = k.iter().map(|i| i.to_string()).collect();
    println!("\nK-reduction pins {} position(s): {}", k.len(), k.join(" "));
    println!("reduced upper {:?}", reduced.upper().entries());
    println!("{} vertices, {} free positions", family.vertex_count().unwrap_or(0), family.free_positions().len());
    Ok(())
}
