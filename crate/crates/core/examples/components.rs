//! Components of the centre as characters of the transparent fusion subring.
//!
//!     cargo run --example components

use minext::{catalog_get, component_count, ring_characters};

fn main() -> minext::Result<()> {
    for name in ["semion", "svec", "z4-q:2", "svec-x-semion", "ising:5"] {
        let d = catalog_get(name)?.payload.to_premodular();
        let a = ring_characters(&d, 0)?;
        println!("{name}: {} component(s), exact = {}", component_count(&d)?, a.exact);
        for (i, ch) in a.characters.iter().enumerate() {
            let values: Vec<String> = a
                .labels
                .iter()
                .zip(ch)
                .map(|(l, z)| format!("{l} -> {:+.3}", z.re))
                .collect();
            let tag = match (i == a.dim_index, Some(i) == a.magnetic_index) {
                (true, _) => " (dim)",
                (_, true) => " (magnetic)",
                _ => "",
            };
            println!("  chi{i}: {}{tag}", values.join(", "));
        }
    }
    Ok(())
}
