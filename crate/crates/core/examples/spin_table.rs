//! Spin matrices, doublet forms and charge sign for a chosen spin.
//!
//! Run with `cargo run --release --example spin_table -- 3/2`.

use spinor_forge::spin::{verify_spin_algebra, DoubletForm, Spin, SpinSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spin: Spin = std::env::args().nth(1).unwrap_or_else(|| "1/2".into()).parse()?;
    let sys = SpinSystem::new(spin);
    println!("s = {}, N = {}, 2N = {}, s(s+1) = {}", sys.s, sys.n, sys.dim(), sys.casimir);
    println!("{:>3} {:>9} {:>9} {:>4}", "A", "rcqm s³", "fw s³", "g");
    for a in 0..sys.dim() {
        let fw = sys.doublet(DoubletForm::Fw)[2][(a, a)].re;
        println!("{:>3} {:>9} {:>9} {:>4}", a + 1, sys.rcqm_projection(a), fw, sys.charge_sign[(a, a)].re);
    }
    let r = verify_spin_algebra(&sys);
    println!("{}: {}/{} relations, max residual {:.1e}", r.name, r.pass_count(), r.entries.len(), r.max_residual());
    Ok(())
}
