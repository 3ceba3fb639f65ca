//! Finite quadratic forms: validation, radicals, Gauss sums and isometries.
//!
//!     cargo run --example metric_groups

use minext::metric_groups::isometric;
use minext::{isometry_rel_point, MetricGroup};
use num_rational::BigRational;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn main() -> minext::Result<()> {
    let z4 = |k: i64| MetricGroup::from_generators(&[4], &[r(k, 8)], &[]);
    let (a, b) = (z4(1)?, z4(5)?);
    println!("Z4 k=1: gauss sum {}, signature {:?}", a.gauss_sum(), a.signature_mod8());
    println!("Z4 k=1 vs k=5 fixing 2: {}", isometry_rel_point(&a, &b, 2, 2)?);
    println!("Z4 k=3 vs k=27: {}", isometric(&z4(3)?, &z4(27)?)?);

    let bad = MetricGroup::from_generators(&[2], &[r(1, 3)], &[])?;
    for v in bad.validate() {
        println!("Z2 q=1/3: {v}");
    }

    // Z2 x Z4 with q(1,0) = 1/2, q(0,1) = 1/8: the radical is the fermion line.
    let g = MetricGroup::from_generators(&[2, 4], &[r(1, 2), r(1, 8)], &[])?;
    let rad: Vec<String> = g.radical().iter().map(|&x| g.element_name(x)).collect();
    println!("Z2 x Z4 radical {rad:?}, fermion {:?}", g.slight_fermion().map(|e| g.element_name(e)));
    Ok(())
}
