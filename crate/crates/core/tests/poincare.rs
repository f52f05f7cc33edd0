use spinor_forge::fields::{apply_position, x_dirac_apply, MomentumGrid, StateRep, WaveFunctionK};
use spinor_forge::linalg::{ComplexMatrix, C64};
use spinor_forge::observables::poincare::{
    covariant_contrast, default_grid, default_states, generator_values, poincare_residuals, poincare_suite,
    spin_sign_scan, structure_sign_scan, GenIndex, GeneratorSet, PoincareOptions, TestState, CONTRAST_FLOOR,
    GENERATORS, POINCARE_TOLERANCE,
};
use spinor_forge::spin::{Spin, SpinSystem};
use spinor_forge::transforms::dirac_spin_at_k;

fn sys(twice: u32) -> SpinSystem {
    SpinSystem::new(Spin::from_twice(twice).unwrap())
}

#[test]
fn standard_structure_sign_zeroes_orbital_set() {
    let grid = default_grid(1.0).unwrap();
    let (plus, minus) = structure_sign_scan(&sys(1), &grid).unwrap();
    assert!(plus < 1e-12, "{plus}");
    assert!(minus > 1e-1, "{minus}");
}

#[test]
fn boost_spin_term_sign_is_positive() {
    let grid = MomentumGrid::cubic(8, 8.0, 1.0).unwrap();
    for set in [GeneratorSet::RcqmFull, GeneratorSet::Fw, GeneratorSet::Dirac] {
        let (plus, minus) = spin_sign_scan(set, &sys(1), &grid).unwrap();
        assert!(plus < 1e-12, "{set}: {plus}");
        assert!(minus > 1e-1, "{set}: {minus}");
    }
}

#[test]
fn every_set_commutes_and_closes_for_spin_half() {
    let grid = default_grid(1.0).unwrap();
    let reports = poincare_suite(&sys(1), &grid).unwrap();
    assert_eq!(reports.len(), 11);
    for r in &reports {
        assert!(r.passed(), "{}: {:?}", r.name, r.failures().next());
    }
    for r in &reports[..10] {
        assert_eq!(r.entries.len(), 55);
        assert!(r.max_residual() <= POINCARE_TOLERANCE);
    }
}

#[test]
fn momentum_components_commute_exactly() {
    let grid = MomentumGrid::cubic(8, 8.0, 1.0).unwrap();
    let r = poincare_residuals(GeneratorSet::Dirac, &sys(1), &grid, &default_states(4), 0.0, &PoincareOptions::default())
        .unwrap();
    let pp = r.closure.iter().find(|e| e.0 == "[P1,P2]").unwrap();
    // Only the rounding of k¹k² against k²k¹ remains.
    assert!(pp.1 < 1e-15, "{}", pp.1);
    let j12 = r.motion.iter().find(|e| e.0 == "[J12,D]").unwrap();
    assert!(j12.1 <= 1e-8);
}

#[test]
fn higher_spin_sets_on_a_coarse_grid() {
    let grid = MomentumGrid::cubic(6, 8.0, 1.3).unwrap();
    for twice in [2, 3] {
        let s = sys(twice);
        let states = default_states(s.dim());
        for set in GeneratorSet::PRIMARY {
            let r = poincare_residuals(set, &s, &grid, &states, 1.0 / 1.3, &PoincareOptions::default());
            if s.n % 2 != 0 && matches!(set, GeneratorSet::Dirac | GeneratorSet::Covariant) {
                assert!(r.is_err(), "{set} should refuse odd N");
                continue;
            }
            let r = r.unwrap();
            assert!(r.max_motion() < 1e-12 && r.max_closure() < 1e-12, "s={} {set}", s.s);
        }
    }
}

#[test]
fn spin_zero_sets() {
    let grid = MomentumGrid::cubic(8, 8.0, 1.0).unwrap();
    let s = sys(0);
    let reports = poincare_suite(&s, &grid).unwrap();
    // rcqm_orbital, rcqm_full, fw at two times; no covariant sets.
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r.passed()));
    assert!(covariant_contrast(&s, &grid).is_err());
}

#[test]
fn separate_covariant_parts_do_not_commute() {
    let grid = default_grid(1.0).unwrap();
    let r = covariant_contrast(&sys(1), &grid).unwrap();
    assert_eq!(r.entries.len(), 12);
    for e in &r.entries {
        assert!(e.pass && e.residual >= CONTRAST_FLOOR, "{}: {}", e.label, e.residual);
    }
}

fn grid_state(grid: &MomentumGrid, st: &TestState, rep: StateRep) -> WaveFunctionK {
    let mut w = WaveFunctionK::zeros(grid, st.weights.len(), rep);
    for i in 0..grid.len() {
        w.set_spinor(i, &st.value(grid.node_k(i)));
    }
    w
}

fn max_rel(jet: &[Vec<C64>], spectral: &[Vec<C64>]) -> f64 {
    let scale = spectral.iter().flatten().fold(0.0f64, |m, z| m.max(z.norm()));
    let diff = jet.iter().flatten().zip(spectral.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    diff / scale
}

/// Jet application against spectral `x` on a resolved packet. The mass is
/// large so the `e^{-mr}` tails of `ωψ` and `x_D ψ` do not wrap the box.
#[test]
fn jet_generators_match_spectral_application() {
    let m = 3.0;
    let grid = MomentumGrid::cubic(48, 24.0, m).unwrap();
    let s = sys(1);
    let st = TestState { k0: [0.2, -0.1, 0.3], x0: [0.3, 0.1, -0.2], sigma: 0.6, weights: TestState::generic(4, 0).weights };
    let opts = PoincareOptions::default();
    let nodes: Vec<usize> = (0..grid.len()).step_by(97).collect();

    // rcqm_full boost J⁰¹ = -½{x¹, ω} + (s × k)¹/(ω + m)
    let psi = grid_state(&grid, &st, StateRep::Rcqm);
    let om = grid.omega_table();
    let wpsi = psi.scale_nodes(&om);
    let orb = apply_position(&wpsi, 0).add(&apply_position(&psi, 0).scale_nodes(&om)).scaled(C64::new(-0.5, 0.0));
    let sr = &s.doublet_rcqm;
    let inv: Vec<f64> = om.iter().map(|w| 1.0 / (w + m)).collect();
    let sxk = psi.apply_matrix(&sr[1]).apply_momentum(2).sub(&psi.apply_matrix(&sr[2]).apply_momentum(1));
    let spectral = orb.add(&sxk.scale_nodes(&inv));
    let j01 = GenIndex::J(0, 1);
    let col = GENERATORS.iter().position(|g| *g == j01).unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for &i in &nodes {
        a.push(generator_values(GeneratorSet::RcqmFull, &s, m, 0.0, &opts, &st, grid.node_k(i)).unwrap()[col].clone());
        b.push(spectral.spinor_at(i));
    }
    assert!(max_rel(&a, &b) < 1e-9, "{}", max_rel(&a, &b));

    // dirac rotation J¹² = x_D¹ k² - x_D² k¹ + s_D³
    let psi = grid_state(&grid, &st, StateRep::Dirac);
    let xk2 = x_dirac_apply(&psi.apply_momentum(1)).unwrap();
    let xk1 = x_dirac_apply(&psi.apply_momentum(0)).unwrap();
    let orb = xk2.components[0].sub(&xk1.components[1]);
    let sd: Vec<ComplexMatrix> = (0..grid.len()).map(|i| dirac_spin_at_k(grid.node_k(i), m, 2).unwrap()[2].clone()).collect();
    let spectral = orb.add(&psi.map_spinors(|i, v| sd[i].apply(v)));
    let col = GENERATORS.iter().position(|g| *g == GenIndex::J(1, 2)).unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for &i in &nodes {
        a.push(generator_values(GeneratorSet::Dirac, &s, m, 0.0, &opts, &st, grid.node_k(i)).unwrap()[col].clone());
        b.push(spectral.spinor_at(i));
    }
    assert!(max_rel(&a, &b) < 1e-9, "{}", max_rel(&a, &b));
}
