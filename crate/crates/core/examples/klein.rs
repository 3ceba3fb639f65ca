//! η-dimensions, the Klein invariant of L± and the extension verdict.
//!
//!     cargo run --example klein

use minext::klein::{eta_at, VerdictKind};
use minext::{catalog_get, kappa_lagrangian, main_theorem_verdict};

fn main() -> minext::Result<()> {
    for name in ["svec", "svec-x-semion", "pointed:2x4:1/2,1/8", "semion", "z4-q:2"] {
        let d = catalog_get(name)?.payload.to_premodular();
        let verdict = main_theorem_verdict(&d);
        println!("{name}: {}", verdict.kind.as_str());
        if verdict.kind == VerdictKind::ExtensionExistsS {
            let k = kappa_lagrangian(&d)?;
            println!(
                "  self-dual {}, e-twisted {}, kappa+ {}, kappa- {} (matrix: {}, {})",
                k.n_self_dual, k.n_e_twisted, k.kappa_plus, k.kappa_minus, k.matrix_kappa_plus, k.matrix_kappa_minus
            );
            let e = d.classify_degeneracy().fermion.expect("fermion");
            println!("  eta(e) = {}", eta_at(&d, e));
        }
    }
    Ok(())
}
