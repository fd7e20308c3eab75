//! B, double B, Z and diagonal dominance for single tensors, plus the
//! critical-row split of double B tensors.
//!
//!     cargo run --example point_classes

use itensor::{
    check_b, check_dd, check_double_b, check_z, classify_double_b_dichotomy, BMethod, Tensor, Tolerance,
};

fn main() -> itensor::Result<()> {
    let tol = Tolerance::EXACT;

    // order 3, dimension 2: diagonal 6, every off-diagonal entry 1
    let dominant = Tensor::constant_pattern(3, 2, 6.0, 1.0)?;
    // same shape but row 1 sits exactly on the B boundary
    let critical = Tensor::new(3, 2, vec![3., 1., 0., 0., 0., 0., 0., 6.])?;
    // row 1 with a large off-diagonal entry
    let weak = Tensor::new(3, 2, vec![4., 0., 0., 2., 0., 1., 1., 4.])?;

    for (name, t) in [("dominant", &dominant), ("critical", &critical), ("weak", &weak)] {
        println!("== {name}: {:?}", t.entries());
        for m in BMethod::ALL {
            let v = check_b(t, m, tol);
            print!("  b/{:<13} {}", m.name(), v.status);
            match &v.witness {
                Some(w) => println!("   {w}"),
                None => println!(),
            }
        }
        println!("  double-b        {}", check_double_b(t, tol).status);
        println!("  z               {}", check_z(t).status);
        println!("  strict dd       {}", check_dd(t, true, tol).status);
        println!("  split           {}", classify_double_b_dichotomy(t, tol));
    }
    Ok(())
}
