//! Round trip of catalog data through the JSON formats, and the CLI driven in-process.
//!
//!     cargo run --example json_io

use minext::io::{parse_datum, serialize_datum};

fn main() -> minext::Result<()> {
    let entry = minext::catalog_get("ising:7")?;
    let text = serialize_datum(&entry.payload);
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("...");
    let back = parse_datum(&text)?;
    println!("round trip exact: {}", back == entry.payload);

    let out = minext::cli::run(["minext", "analyze", "catalog:svec-x-semion"]);
    print!("\n$ minext analyze catalog:svec-x-semion\n{}", out.stdout);
    Ok(())
}
