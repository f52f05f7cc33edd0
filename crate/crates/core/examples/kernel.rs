//! Position-space ω kernel against the spectral square root, and K₂ samples.
//!
//! Run with `cargo run --release --example kernel -- 64`.

use spinor_forge::fields::bessel::bessel_k2;
use spinor_forge::fields::kernel::{KernelOptions, OmegaKernel};
use spinor_forge::fields::{apply_omega_spectral, make_gaussian_packet, to_position, MomentumGrid};
use spinor_forge::linalg::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(64), |s| s.parse())?;
    for z in [0.5, 1.0, 2.0, 5.0] {
        println!("K₂({z}) = {:.15e}", bessel_k2(z));
    }
    let grid = MomentumGrid::cubic(n, 8.0, 1.0)?;
    let st = make_gaussian_packet(&grid, 1, [0.0; 3], 1.0, &[C64::new(1.0, 0.0)])?;
    let kern = OmegaKernel::new(&grid, &KernelOptions::default())?;
    let got = kern.apply(&to_position(&st));
    let want = to_position(&apply_omega_spectral(&st));
    println!("{n}³ relative L² difference {:.2e}", got.l2_diff(&want) / want.norm_sqr().sqrt());
    Ok(())
}
