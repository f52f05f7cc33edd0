//! Poincaré-algebra residuals of every generator set on a 16³ Gaussian.
//!
//! Run with `cargo run --release --example poincare -- [spin]`.

use spinor_forge::observables::poincare::{
    default_grid, default_states, poincare_residuals, spin_sign_scan, structure_sign_scan, GeneratorSet,
    PoincareOptions,
};
use spinor_forge::spin::{Spin, SpinSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spin: Spin = std::env::args().nth(1).unwrap_or_else(|| "1/2".into()).parse()?;
    let sys = SpinSystem::new(spin);
    let grid = default_grid(1.0)?;
    let (plus, minus) = structure_sign_scan(&sys, &grid)?;
    println!("structure sign scan on the orbital set: +1 -> {plus:.2e}, -1 -> {minus:.2e}");
    for set in [GeneratorSet::RcqmFull, GeneratorSet::Fw, GeneratorSet::Dirac] {
        if set != GeneratorSet::RcqmFull && set != GeneratorSet::Fw && sys.n % 2 != 0 {
            continue;
        }
        let (p, m) = spin_sign_scan(set, &sys, &grid)?;
        println!("boost spin-term sign scan, {set}: +1 -> {p:.2e}, -1 -> {m:.2e}");
    }
    let states = default_states(sys.dim());
    let sets = GeneratorSet::PRIMARY.into_iter().chain([GeneratorSet::CovariantOrbital, GeneratorSet::CovariantSpin]);
    for set in sets {
        if matches!(set, GeneratorSet::Dirac | GeneratorSet::Covariant | GeneratorSet::CovariantOrbital | GeneratorSet::CovariantSpin)
            && sys.n % 2 != 0
        {
            continue;
        }
        for t in [0.0, 1.0] {
            let r = poincare_residuals(set, &sys, &grid, &states, t, &PoincareOptions::default())?;
            println!("{set:>18} t={t}: max [G,D] {:.2e}   max closure {:.2e}", r.max_motion(), r.max_closure());
        }
    }
    Ok(())
}
