use spinor_forge::fields::bessel::bessel_k2;
use spinor_forge::fields::kernel::{KernelOptions, OmegaKernel};
use spinor_forge::fields::{apply_omega_spectral, make_gaussian_packet, to_position, MomentumGrid};
use spinor_forge::linalg::C64;

/// K₂(z) = ∫₀^∞ e^{-z cosh t} cosh(2t) dt by the trapezoid rule, which
/// converges geometrically for this analytic, doubly decaying integrand.
fn k2_quadrature(z: f64) -> f64 {
    let h: f64 = 1.0 / 64.0;
    let mut acc = 0.5 * (-z).exp();
    let mut t: f64 = h;
    loop {
        let v = (-z * t.cosh()).exp() * (2.0 * t).cosh();
        acc += v;
        if v < 1e-30 {
            break;
        }
        t += h;
    }
    acc * h
}

#[test]
fn k2_matches_integral_representation() {
    for z in [0.5, 1.0, 2.0, 5.0, 0.1, 3.3, 12.0] {
        let q = k2_quadrature(z);
        let k = bessel_k2(z);
        assert!(((k - q) / q).abs() < 1e-9, "z={z}: {k} vs {q}");
    }
}

#[test]
fn kernel_matches_spectral_on_centered_gaussian() {
    let grid = MomentumGrid::cubic(64, 8.0, 1.0).unwrap();
    let st = make_gaussian_packet(&grid, 1, [0.0; 3], 1.0, &[C64::new(1.0, 0.0)]).unwrap();
    let kern = OmegaKernel::new(&grid, &KernelOptions::default()).unwrap();
    let got = kern.apply(&to_position(&st));
    let want = to_position(&apply_omega_spectral(&st));
    let rel = got.l2_diff(&want) / want.norm_sqr().sqrt();
    eprintln!("kernel vs spectral relative L2 = {rel:.3e}");
    assert!(rel <= 1e-3);
}
