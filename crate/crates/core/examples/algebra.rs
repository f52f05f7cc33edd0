//! Clifford tables, SO(8) commutators and the SO(6) reduction for `2N = 4, 8, 12, 16`.
//!
//! Run with `cargo run --release --example algebra`.

use spinor_forge::clifford::{
    build_extended_gammas, build_rcqm_gammas, build_so_generators, build_standard_gammas, verify_clifford_relations,
    verify_so_commutations, ExtendedForm, SoTarget,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [2, 4, 6, 8] {
        let sets = [
            build_standard_gammas(n)?,
            build_extended_gammas(n, ExtendedForm::Tilde)?,
            build_extended_gammas(n, ExtendedForm::AntiHermitian)?,
            build_rcqm_gammas(n)?,
        ];
        for set in &sets {
            let r = verify_clifford_relations(set);
            println!("{:<36} {:>3}/{:<3} max {:.1e}", r.name, r.pass_count(), r.entries.len(), r.max_residual());
        }
    }
    let barred = build_rcqm_gammas(2)?;
    for target in [SoTarget::So8, SoTarget::So6, SoTarget::Su2Pair] {
        let table = build_so_generators(&barred, target)?;
        let r = verify_so_commutations(&table);
        println!("{target:?}: {} generators, {} pairs, max {:.1e}", table.len(), r.entries.len(), r.max_residual());
    }
    // A wrong generator shows up as failing entries.
    let std = build_standard_gammas(2)?;
    let bad = std.with_replaced(1, std.get(1).scale_real(1.5));
    let r = verify_clifford_relations(&bad);
    println!("corrupted Γ¹: {} failing entries, e.g. {}", r.fail_count(), r.failures().next().map_or("", |f| &f.label));
    Ok(())
}
