//! Exact spectral evolution of a Gaussian packet in all three representations.
//!
//! Run with `cargo run --release --example evolve`.

use spinor_forge::fields::{convert, energy, evolve, make_packet, mean_momentum, MomentumGrid, PacketSpec, StateRep};
use spinor_forge::linalg::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MomentumGrid::cubic(32, 16.0, 1.0)?;
    let weights = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0), C64::new(0.0, -0.2)];
    let spec = PacketSpec { k0: [0.3, -0.2, 0.4], sigma: 1.0, weights, x0: [0.5, -0.3, 0.2] };
    let rcqm = make_packet(&grid, 4, &spec, StateRep::Rcqm)?;
    println!("<k> = {:?}", mean_momentum(&rcqm));
    for rep in [StateRep::Rcqm, StateRep::Fw, StateRep::Dirac] {
        let st = convert(&rcqm, rep)?;
        let (n0, e0) = (st.norm(), energy(&st)?);
        println!("{rep:>5}   t   |ψ|-|ψ₀|     E-E₀");
        for j in 0..=5 {
            let later = evolve(&st, j as f64)?;
            println!("{:>9} {:>9.1e} {:>9.1e}", j, later.norm() - n0, energy(&later)? - e0);
        }
    }
    let a = convert(&evolve(&rcqm, 5.0)?, StateRep::Dirac)?;
    let b = evolve(&convert(&rcqm, StateRep::Dirac)?, 5.0)?;
    println!("evolve/convert commute to {:.1e}", a.max_abs_diff(&b));
    Ok(())
}
