//! FW operator relations, covariant basis spinors and a representation round trip.
//!
//! Run with `cargo run --release --example transforms`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor_forge::fields::{convert, make_gaussian_packet, MomentumGrid, StateRep};
use spinor_forge::linalg::C64;
use spinor_forge::transforms::{
    dirac_spin_at_k, dirac_spinors, reversed_conjugation_residual, verify_dirac_spinors, verify_fw_relations,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ks: Vec<[f64; 3]> = (0..1000).map(|_| [0; 3].map(|_| rng.gen_range(-4.0..4.0))).collect();
    for n in [2, 4] {
        let r = verify_fw_relations(&ks, 1.0, n)?;
        for e in &r.entries {
            println!("2N={:<2} {:<16} {:.1e}", 2 * n, e.label, e.residual);
        }
        println!("2N={:<2} V⁺H_FW V⁻ - H_D    {:.2}", 2 * n, reversed_conjugation_residual(&ks, 1.0, n)?);
    }

    let k = [0.4, -1.1, 0.7];
    let s3 = &dirac_spin_at_k(k, 1.0, 4)?[2];
    let s3m = &dirac_spin_at_k(k.map(|x| -x), 1.0, 4)?[2];
    for (a, v) in dirac_spinors(k, 1.0, 4)?.iter().enumerate() {
        let op = if a < 4 { s3 } else { s3m };
        let lam = op.apply(v).iter().zip(v).map(|(x, y)| (y.conj() * x).re).sum::<f64>();
        println!("spin-3/2 spinor {}: <s³_D> = {lam:+.3}", a + 1);
    }
    println!("s³_D eigen-residual at 100 k: {:.1e}", verify_dirac_spinors(&ks[..100], 1.0, 4)?.max_residual());

    let grid = MomentumGrid::cubic(16, 10.0, 1.0)?;
    let w = [1.0, 0.5, -0.2, 0.3].map(|x| C64::new(x, 0.1));
    let st = make_gaussian_packet(&grid, 4, [0.3, 0.0, -0.2], 1.0, &w)?;
    let back = convert(&convert(&st, StateRep::Dirac)?, StateRep::Rcqm)?;
    println!("rcqm -> dirac -> rcqm max difference {:.1e}", back.max_abs_diff(&st));
    Ok(())
}
