//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor_forge::clifford::{
    build_extended_gammas, build_rcqm_gammas, build_so_generators, build_standard_gammas, verify_clifford_relations,
    verify_so_commutations, ExtendedForm, SoTarget,
};
use spinor_forge::fields::bessel::bessel_k2;
use spinor_forge::fields::kernel::{KernelOptions, OmegaKernel};
use spinor_forge::fields::{
    apply_omega_spectral, convert, evolve, make_gaussian_packet, make_packet, to_position, FieldError, MomentumGrid,
    PacketSpec, StateRep, WaveFunctionK,
};
use spinor_forge::linalg::{ComplexMatrix, C64};
use spinor_forge::observables::poincare::{covariant_contrast, default_grid, poincare_suite};
use spinor_forge::observables::{casimir_check, observables_report};
use spinor_forge::spin::{su2_irrep, verify_spin_algebra, Spin, SpinSystem};
use spinor_forge::transforms::{reversed_conjugation_residual, verify_dirac_spinors, verify_fw_relations};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn sys(twice: u32) -> SpinSystem {
    SpinSystem::new(Spin::from_twice(twice).unwrap())
}

fn sample_ks(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [0; 3].map(|_| rng.gen_range(-4.0..4.0))).collect()
}

fn random_state(grid: &MomentumGrid, ncomp: usize, rep: StateRep, seed: u64) -> WaveFunctionK {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = WaveFunctionK::zeros(grid, ncomp, rep);
    st.data.iter_mut().for_each(|z| *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    st
}

fn c1_clifford() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    for n in [2, 4, 6, 8] {
        let sets = [
            build_standard_gammas(n).unwrap(),
            build_extended_gammas(n, ExtendedForm::Tilde).unwrap(),
            build_extended_gammas(n, ExtendedForm::AntiHermitian).unwrap(),
            build_rcqm_gammas(n).unwrap(),
        ];
        for set in &sets {
            let r = verify_clifford_relations(set);
            ok &= r.passed();
            worst = worst.max(r.max_residual());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && worst <= 1e-12 && secs < 5.0, format!("max residual {worst:.2e} (tol 1e-12), {secs:.2} s (limit 5 s)"))
}

fn c2_so8() -> Verdict {
    let start = Instant::now();
    let (mut worst, mut ok, mut pairs) = (0.0f64, true, 0);
    for n in [2, 4] {
        for set in [build_extended_gammas(n, ExtendedForm::AntiHermitian).unwrap(), build_rcqm_gammas(n).unwrap()] {
            let table = build_so_generators(&set, SoTarget::So8).unwrap();
            ok &= table.len() == 28;
            let r = verify_so_commutations(&table);
            pairs = pairs.max(r.entries.len());
            ok &= r.passed() && r.entries.len() == 406;
            worst = worst.max(r.max_residual());
            let su2 = verify_so_commutations(&build_so_generators(&set, SoTarget::Su2Pair).unwrap());
            ok &= su2.passed();
            worst = worst.max(su2.max_residual());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        ok && worst <= 1e-12 && secs < 10.0,
        format!("28 generators, {pairs} pairs, SU(2) pair commuting; max residual {worst:.2e} (tol 1e-12), {secs:.2} s (limit 10 s)"),
    )
}

fn c3_spin() -> Verdict {
    let (mut ok, mut alg, mut cas) = (true, 0.0f64, 0.0f64);
    for twice in 0..=4 {
        let s = sys(twice);
        let r = verify_spin_algebra(&s);
        ok &= r.passed();
        alg = alg.max(r.max_residual());
        let m = su2_irrep(s.s);
        let sq = &(&(&m[0] * &m[0]) + &(&m[1] * &m[1])) + &(&m[2] * &m[2]);
        cas = cas.max(sq.max_abs_diff(&ComplexMatrix::identity(twice as usize + 1).scale_real(s.casimir)));
    }
    let half = sys(1);
    let pattern: Vec<f64> = (0..4).map(|a| half.rcqm_projection(a)).collect();
    let g: Vec<f64> = (0..4).map(|a| half.charge_sign[(a, a)].re).collect();
    let exact = pattern == [0.5, -0.5, -0.5, 0.5] && g == [-1.0, -1.0, 1.0, 1.0];
    verdict(
        ok && cas <= 1e-13 && exact,
        format!("s ∈ {{0..2}} algebra {alg:.2e}, Casimir {cas:.2e} (tol 1e-13), s=1/2 s³ {pattern:?} g {g:?}"),
    )
}

fn c4_transforms() -> Verdict {
    let ks = sample_ks(1000, 4);
    let (mut ok, mut rel, mut reversed) = (true, 0.0f64, 0.0f64);
    for n in [2, 4] {
        let r = verify_fw_relations(&ks, 1.0, n).unwrap();
        ok &= r.passed();
        rel = rel.max(r.max_residual());
        reversed = reversed.max(reversed_conjugation_residual(&ks, 1.0, n).unwrap());
    }
    let grid = MomentumGrid::cubic(8, 6.0, 1.0).unwrap();
    let mut trip = 0.0f64;
    for n in [2, 4] {
        let st = random_state(&grid, 2 * n, StateRep::Rcqm, n as u64);
        let d = convert(&convert(&st, StateRep::Fw).unwrap(), StateRep::Dirac).unwrap();
        let back = convert(&convert(&d, StateRep::Fw).unwrap(), StateRep::Rcqm).unwrap();
        trip = trip.max(back.max_abs_diff(&st));
    }
    verdict(
        ok && rel <= 1e-12 && trip <= 1e-12,
        format!(
            "V⁻V⁺=I, V⁻H_FW V⁺=H_D at 10³ k: {rel:.2e}; round trip {trip:.2e} (tol 1e-12); \
             literal V⁺H_FW V⁻ vs H_D: {reversed:.2} (ordering does not hold)"
        ),
    )
}

fn c5_dirac_spin() -> Verdict {
    let ks = sample_ks(100, 5);
    let r = verify_dirac_spinors(&ks, 1.0, 4).unwrap();
    let c = casimir_check(&sys(3), &ks, 1.0).unwrap();
    let ok = r.passed() && c.passed() && r.entries.len() == 8;
    verdict(
        ok && r.max_residual() <= 1e-10 && c.max_residual() <= 1e-10,
        format!("s³_D on 8 spinors {:.2e}, W=(15/4)m² {:.2e} (tol 1e-10)", r.max_residual(), c.max_residual()),
    )
}

fn c6_dynamics() -> Verdict {
    let start = Instant::now();
    let grid = MomentumGrid::cubic(32, 16.0, 1.0).unwrap();
    let s = sys(1);
    let weights = (0..4).map(|c| C64::new(1.0 + 0.3 * c as f64, 0.2 - 0.7 * c as f64)).collect();
    let spec = PacketSpec { k0: [0.3, -0.2, 0.4], sigma: 1.0, weights, x0: [0.5, -0.3, 0.2] };
    let r0 = make_packet(&grid, 4, &spec, StateRep::Rcqm).unwrap();
    let reps = [StateRep::Rcqm, StateRep::Fw, StateRep::Dirac];
    let starts: Vec<WaveFunctionK> = reps.iter().map(|&r| convert(&r0, r).unwrap()).collect();
    let times: Vec<f64> = (1..=10).map(|j| 0.5 * j as f64).collect();
    let mut norm = 0.0f64;
    for st in &starts {
        for &t in &times {
            norm = norm.max((evolve(st, t).unwrap().norm() - st.norm()).abs());
        }
    }
    let base = observables_report(&r0, &s).unwrap();
    let main_add = 22;
    let mut drift = 0.0f64;
    for &t in &times {
        let rt = observables_report(&evolve(&r0, t).unwrap(), &s).unwrap();
        for (_, d) in rt.drift_from(&base) {
            drift = drift.max(d);
        }
    }
    let mut cross = 0.0f64;
    for sa in &starts {
        for &b in &reps {
            let p1 = convert(&evolve(sa, 5.0).unwrap(), b).unwrap();
            let p2 = evolve(&convert(sa, b).unwrap(), 5.0).unwrap();
            cross = cross.max(p1.max_abs_diff(&p2));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        norm <= 1e-10 && drift <= 1e-8 && cross <= 1e-10 && secs < 60.0 && base.len() >= main_add,
        format!(
            "norm drift {norm:.2e} (tol 1e-10), {} functionals (10 main, 12 additional, a32) {drift:.2e} (tol 1e-8), cross-rep {cross:.2e} (tol 1e-10), {secs:.1} s (limit 60 s)",
            base.len()
        ),
    )
}

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

fn c7_kernel() -> Verdict {
    let start = Instant::now();
    let grid = MomentumGrid::cubic(64, 8.0, 1.0).unwrap();
    let st = make_gaussian_packet(&grid, 1, [0.0; 3], 1.0, &[C64::new(1.0, 0.0)]).unwrap();
    let kern = OmegaKernel::new(&grid, &KernelOptions::default()).unwrap();
    let got = kern.apply(&to_position(&st));
    let want = to_position(&apply_omega_spectral(&st));
    let rel = got.l2_diff(&want) / want.norm_sqr().sqrt();
    let k2 = [0.5, 1.0, 2.0, 5.0]
        .iter()
        .map(|&z| ((bessel_k2(z) - k2_quadrature(z)) / k2_quadrature(z)).abs())
        .fold(0.0f64, f64::max);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        rel <= 1e-3 && k2 <= 1e-9 && secs < 120.0,
        format!("relative L² {rel:.2e} (tol 1e-3), K₂ vs quadrature {k2:.2e} (tol 1e-9), {secs:.1} s (limit 120 s)"),
    )
}

fn c8_poincare() -> Verdict {
    let s = sys(1);
    let grid = default_grid(1.0).unwrap();
    let reports = poincare_suite(&s, &grid).unwrap();
    let sets: Vec<_> = reports.iter().filter(|r| r.name != "covariant contrast").collect();
    let closure_ok = sets.iter().all(|r| r.entries.len() == 55);
    let worst = sets.iter().map(|r| r.max_residual()).fold(0.0f64, f64::max);
    let contrast = covariant_contrast(&s, &grid).unwrap();
    let floor = contrast.entries.iter().map(|e| e.residual).fold(f64::INFINITY, f64::min);
    verdict(
        sets.iter().all(|r| r.passed()) && closure_ok && worst <= 1e-6 && contrast.passed() && floor >= 1e-2,
        format!(
            "{} set/time runs, [G,D] and 45 closures max {worst:.2e} (tol 1e-6); separate covariant parts min {floor:.2e} (floor 1e-2)",
            sets.len()
        ),
    )
}

fn c9_spin_zero() -> Verdict {
    let s = sys(0);
    let grid = MomentumGrid::cubic(16, 8.0, 1.0).unwrap();
    let st = make_gaussian_packet(&grid, 2, [0.1, 0.2, 0.0], 1.0, &[C64::new(1.0, 0.0), C64::new(0.3, -0.4)]).unwrap();
    let count = observables_report(&st, &s).unwrap().len();
    let suite = poincare_suite(&s, &grid).unwrap();
    let generators_ok = suite.iter().all(|r| r.passed());
    let refused = matches!(convert(&st, StateRep::Dirac), Err(FieldError::OddMultiplicity(1)));
    verdict(
        count == 10 && generators_ok && refused,
        format!(
            "{count} conserved functionals, {} generator runs pass: {generators_ok}, covariant refused: {refused}",
            suite.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("Clifford tables", c1_clifford),
        ("SO(8)/SO(6) commutators", c2_so8),
        ("spin algebra", c3_spin),
        ("FW transforms", c4_transforms),
        ("spin-3/2 covariant spin", c5_dirac_spin),
        ("dynamics and conservation", c6_dynamics),
        ("ω kernel vs spectral", c7_kernel),
        ("Poincaré residuals", c8_poincare),
        ("spin-0 path", c9_spin_zero),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("criterion {} {:<28} {}  {}", i + 1, name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
