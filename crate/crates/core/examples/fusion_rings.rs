//! Fusion rings: validation, fusion matrices and Frobenius-Perron dimensions.
//!
//!     cargo run --example fusion_rings

use minext::catalog::ising_ring;
use minext::fusion_ring::group_ring;

fn main() -> minext::Result<()> {
    let ising = ising_ring();
    println!("Ising labels: {:?}", ising.labels());
    println!("violations: {:?}", ising.validate());
    println!("N_sigma = {:?}", ising.fusion_matrix_of("sigma")?);
    let fp = ising.fpdim()?;
    println!("FPdim = {:?}, total {}", fp.per_label, fp.total);

    let z2xz4 = group_ring(&[2, 4]);
    println!("\nZ2 x Z4 has {} simples; dual of (1,1) is {}", z2xz4.rank(), z2xz4.label(z2xz4.dual(5)));
    let sub = z2xz4.restrict(&[0, 2, 4, 6])?;
    println!("subring {:?}", sub.labels());
    Ok(())
}
