use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor_forge::fields::{convert, MomentumGrid, StateRep, WaveFunctionK};
use spinor_forge::linalg::{hermitian_eigh, C64, I};
use spinor_forge::transforms::{
    dirac_hamiltonian, dirac_spin_at_k, dirac_spinors, fw_pair, mean_spin_closed_form, omega,
    reversed_conjugation_residual, verify_dirac_spinors, verify_fw_relations, x_dirac_matrix_part, TransformError,
    TRANSFORM_TOLERANCE,
};

fn sample_ks(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [0; 3].map(|_| rng.gen_range(-4.0..4.0))).collect()
}

#[test]
fn fw_relations_hold_on_random_momenta() {
    let ks = sample_ks(1000, 11);
    for n in [2, 4] {
        let r = verify_fw_relations(&ks, 1.0, n).unwrap();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert!(r.max_residual() <= TRANSFORM_TOLERANCE);
    }
    for n in [6, 8] {
        assert!(verify_fw_relations(&ks[..50], 0.7, n).unwrap().passed());
    }
}

/// `H_D` is Hermitian with spectrum `±ω`, each `N`-fold.
#[test]
fn covariant_hamiltonian_spectrum() {
    for k in sample_ks(50, 12) {
        for n in [2, 4] {
            let h = dirac_hamiltonian(k, 1.3, n).unwrap();
            assert!(h.is_hermitian(1e-14));
            let (vals, _) = hermitian_eigh(&h).unwrap();
            let w = omega(k, 1.3);
            for (i, v) in vals.iter().enumerate() {
                let want = if i < n { -w } else { w };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }
}

/// The literal `V⁺ H_FW V⁻` misses `H_D` by an O(|k|) amount, so this
/// ordering cannot be a tolerance issue.
#[test]
fn reversed_conjugation_is_not_the_covariant_hamiltonian() {
    let ks = sample_ks(1000, 11);
    for n in [2, 4] {
        let r = reversed_conjugation_residual(&ks, 1.0, n).unwrap();
        assert!(r > 1.0, "N={n}: {r}");
    }
    assert!(reversed_conjugation_residual(&[[0.0; 3]], 1.0, 2).unwrap() < 1e-15);
}

#[test]
fn basis_spinors_are_energy_and_spin_eigenvectors() {
    let ks = sample_ks(100, 13);
    for n in [2, 4] {
        let r = verify_dirac_spinors(&ks, 1.0, n).unwrap();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert_eq!(r.entries.len(), 2 * n);
        for &k in &ks[..10] {
            let w = omega(k, 1.0);
            let hk = dirac_hamiltonian(k, 1.0, n).unwrap();
            let hmk = dirac_hamiltonian([-k[0], -k[1], -k[2]], 1.0, n).unwrap();
            for (a, v) in dirac_spinors(k, 1.0, n).unwrap().iter().enumerate() {
                let (h, lam) = if a < n { (&hk, w) } else { (&hmk, -w) };
                let hv = h.apply(v);
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-13);
                assert!(hv.iter().zip(v).all(|(x, y)| (x - y * lam).norm() < 1e-12));
            }
        }
    }
}

/// `x_D = V⁻ x V⁺` with `x = i∂_k`, so the matrix part is `i V⁻ ∂_j V⁺`;
/// compared against central differences.
#[test]
fn x_dirac_matrix_part_matches_finite_differences() {
    let h = 1e-5;
    for n in [2, 4] {
        for k in sample_ks(20, 14) {
            let part = x_dirac_matrix_part(k, 1.0, n).unwrap();
            let (vm, _) = fw_pair(k, 1.0, n).unwrap();
            for j in 0..3 {
                let (mut kp, mut km) = (k, k);
                kp[j] += h;
                km[j] -= h;
                let d = (&fw_pair(kp, 1.0, n).unwrap().1 - &fw_pair(km, 1.0, n).unwrap().1).scale_real(0.5 / h);
                let want = (&vm * &d).scale(I);
                assert!(part[j].max_abs_diff(&want) < 1e-8, "N={n} j={j}: {}", part[j].max_abs_diff(&want));
            }
        }
    }
}

#[test]
fn mean_spin_closed_form_matches_conjugated_spin() {
    for k in sample_ks(50, 15) {
        let closed = mean_spin_closed_form(k, 0.8).unwrap();
        let conj = dirac_spin_at_k(k, 0.8, 2).unwrap();
        for j in 0..3 {
            assert!(closed[j].max_abs_diff(&conj[j]) < 1e-13);
        }
    }
}

fn random_state(grid: &MomentumGrid, ncomp: usize, rep: StateRep, seed: u64) -> WaveFunctionK {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = WaveFunctionK::zeros(grid, ncomp, rep);
    st.data.iter_mut().for_each(|z| *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    st
}

#[test]
fn state_round_trips_through_every_representation() {
    let grid = MomentumGrid::cubic(8, 6.0, 1.0).unwrap();
    for n in [2, 4] {
        for (seed, rep) in [StateRep::Rcqm, StateRep::Fw, StateRep::Dirac].into_iter().enumerate() {
            let st = random_state(&grid, 2 * n, rep, seed as u64);
            for via in [StateRep::Rcqm, StateRep::Fw, StateRep::Dirac] {
                let there = convert(&st, via).unwrap();
                assert!((there.norm() - st.norm()).abs() < 1e-12 * st.norm());
                let back = convert(&there, rep).unwrap();
                assert!(back.max_abs_diff(&st) < 1e-13, "{rep} via {via}");
            }
        }
    }
}

#[test]
fn odd_multiplicity_and_bad_mass_are_refused() {
    let grid = MomentumGrid::cubic(4, 4.0, 1.0).unwrap();
    let st = random_state(&grid, 6, StateRep::Fw, 1);
    let err = convert(&st, StateRep::Dirac).unwrap_err().to_string();
    assert!(err.contains("requires even N"), "{err}");
    assert!(matches!(fw_pair([0.0; 3], 0.0, 2), Err(TransformError::NonPositiveMass(_))));
    assert!(matches!(fw_pair([0.0; 3], 1.0, 3), Err(TransformError::Clifford(_))));
}
