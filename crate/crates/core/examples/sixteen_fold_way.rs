//! Minimal nondegenerate extensions of sVec: the eight pointed ones found by
//! enumeration and the eight Ising categories from the catalog.
//!
//!     cargo run --example sixteen_fold_way

use minext::metric_groups::ExtensionOptions;
use minext::{catalog_get, enumerate_pointed_extensions, Datum};

fn main() -> minext::Result<()> {
    let Datum::MetricGroup(svec) = catalog_get("svec")?.payload else {
        unreachable!("svec is pointed")
    };
    let exts = enumerate_pointed_extensions(&svec, ExtensionOptions::default())?;
    println!("pointed ({}):", exts.len());
    for e in &exts {
        let q: Vec<String> = (0..e.group.size())
            .map(|x| {
                let (p, d) = e.group.q(x);
                format!("{p}/{d}")
            })
            .collect();
        println!(
            "  {:?}  q = [{}]  fermion {}  c = {} mod 8",
            e.group.orders(),
            q.join(", "),
            e.group.element_name(e.fermion),
            e.signature
        );
    }
    println!("Ising type (8):");
    for nu in (1..16).step_by(2) {
        let d = catalog_get(&format!("ising:{nu}"))?.payload.to_premodular();
        println!("  ising:{nu:<3} gauss sum {}  c = {nu}/2 mod 8", d.gauss_sum());
    }
    Ok(())
}
