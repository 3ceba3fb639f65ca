//! Exact arithmetic in cyclotomic fields.
//!
//!     cargo run --example cyclotomic

use minext::CycNum;

fn main() -> minext::Result<()> {
    let z8 = CycNum::zeta(8, 1);
    let sqrt2 = &z8 + &z8.conj();
    println!("zeta8 + zeta8^-1 = {sqrt2}  ~ {:.12}", sqrt2.to_complex().re);
    println!("(zeta8 + zeta8^-1)^2 = {}", &sqrt2 * &sqrt2);

    // zeta6 = 1 + zeta3, checked across conductors.
    let lhs = CycNum::zeta(6, 1);
    let rhs = &CycNum::one(3) + &CycNum::zeta(3, 1);
    println!("zeta6 == 1 + zeta3: {}", lhs == rhs);

    let x = &CycNum::zeta(16, 3) + &CycNum::from_integer(2, 16);
    let inv = x.inv()?;
    println!("x = {x}\n1/x = {inv}\nx * (1/x) = {}", &x * &inv);

    println!("json of zeta8 + zeta8^-1: {}", serde_json::to_string(&sqrt2)?);
    Ok(())
}
