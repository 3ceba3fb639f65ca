//! Balanced s-matrices, transparency and the Müger centre for every catalog entry.
//!
//!     cargo run --example classify

use minext::catalog::all_entries;

fn main() -> minext::Result<()> {
    println!("{:<16}{:<22}{:<24}gauss sum", "entry", "classification", "transparent");
    for entry in all_entries() {
        let d = entry.payload.to_premodular();
        let cls = d.classify_degeneracy();
        let transparent: Vec<&str> = cls.transparent.iter().map(|&a| d.label(a)).collect();
        println!(
            "{:<16}{:<22}{:<24}{}",
            entry.name,
            cls.kind.as_str(),
            transparent.join(" "),
            d.gauss_sum()
        );
    }

    let ising = minext::catalog_get("ising:3")?.payload.to_premodular();
    println!("\nIsing(3): framed S(sigma, psi) = {}", ising.framed_s_entry("sigma", "psi")?);
    println!("centralizer of {{1, psi}}: {:?}", ising.relative_centralizer_of(&["1", "psi"])?);
    Ok(())
}
