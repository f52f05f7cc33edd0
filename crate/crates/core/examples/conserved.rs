//! Conserved functionals of a spin-s packet at a few times.
//!
//! Run with `cargo run --release --example conserved -- 1`.

use spinor_forge::fields::{evolve, make_packet, MomentumGrid, PacketSpec, StateRep};
use spinor_forge::linalg::C64;
use spinor_forge::observables::observables_report;
use spinor_forge::spin::{Spin, SpinSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spin: Spin = std::env::args().nth(1).unwrap_or_else(|| "1/2".into()).parse()?;
    let sys = SpinSystem::new(spin);
    let grid = MomentumGrid::cubic(32, 16.0, 1.0)?;
    let weights = (0..sys.dim()).map(|c| C64::new(1.0, 0.2 * c as f64)).collect();
    let spec = PacketSpec { k0: [0.3, -0.2, 0.4], sigma: 1.0, weights, x0: [0.5, -0.3, 0.2] };
    let st = make_packet(&grid, sys.dim(), &spec, StateRep::Rcqm)?;
    let r0 = observables_report(&st, &sys)?;
    for f in r0.entries() {
        println!("{:<8} {:<8} {:+.12}", f.label, f.anchor, f.value);
    }
    for t in [1.0, 5.0, 20.0] {
        let rt = observables_report(&evolve(&st, t)?, &sys)?;
        let worst = rt.drift_from(&r0).into_iter().fold(0.0f64, |m, (_, d)| m.max(d));
        println!("t = {t:>4}: {} functionals, max drift {worst:.1e}", rt.len());
    }
    Ok(())
}
