use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor_forge::clifford::{
    build_extended_gammas, build_rcqm_gammas, build_so_generators, build_standard_gammas, verify_clifford_relations,
    verify_commutes_with, verify_so_commutations, CliffordError, ExtendedForm, GammaSet, SoTarget, TABLE_TOLERANCE,
};
use spinor_forge::linalg::{vec_max_abs_diff, AntilinearOperator, ComplexMatrix, C64, I};
use spinor_forge::transforms::conjugate_by_v;

fn all_sets(n: usize) -> Vec<GammaSet> {
    vec![
        build_standard_gammas(n).unwrap(),
        build_extended_gammas(n, ExtendedForm::Tilde).unwrap(),
        build_extended_gammas(n, ExtendedForm::AntiHermitian).unwrap(),
        build_rcqm_gammas(n).unwrap(),
    ]
}

#[test]
fn every_table_holds_for_all_supported_dimensions() {
    let start = Instant::now();
    for n in [2, 4, 6, 8] {
        for set in all_sets(n) {
            let r = verify_clifford_relations(&set);
            assert!(r.passed(), "{}: {:?}", r.name, r.failures().next());
            assert!(r.max_residual() <= TABLE_TOLERANCE);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

/// Anticommutators checked by applying operators to vectors, bypassing
/// operator composition.
#[test]
fn anticommutators_act_correctly_on_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 4] {
        for set in all_sets(n) {
            let dim = set.dim();
            let v: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            for table in &set.tables {
                for (ia, &a) in table.members.iter().enumerate() {
                    for (ib, &b) in table.members.iter().enumerate() {
                        let (p, q) = (set.get(a), set.get(b));
                        let lhs: Vec<C64> =
                            p.apply(&q.apply(&v)).iter().zip(q.apply(&p.apply(&v))).map(|(x, y)| x + y).collect();
                        let g = if ia == ib { 2.0 * table.metric[ia] } else { 0.0 };
                        let rhs: Vec<C64> = v.iter().map(|z| z * g).collect();
                        assert!(vec_max_abs_diff(&lhs, &rhs) < 1e-13, "{:?} {a},{b}", set.representation);
                    }
                }
            }
        }
    }
}

#[test]
fn tilde_signature_and_first_square() {
    let set = build_extended_gammas(4, ExtendedForm::Tilde).unwrap();
    let id = AntilinearOperator::identity(8);
    let expected = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
    for (a, s) in (1..=7).zip(expected) {
        let sq = set.get(a).compose(set.get(a));
        assert!(sq.max_abs_diff(&id.scale_real(s)) < 1e-15, "Γ̃{a}");
    }
}

#[test]
fn unbarred_and_barred_fifth_sixth_products() {
    let ext = build_extended_gammas(2, ExtendedForm::AntiHermitian).unwrap();
    let p = ext.get(5).compose(ext.get(6));
    assert!(p.is_linear());
    assert!(p.max_abs_diff(&AntilinearOperator::identity(4).scale(I)) < 1e-15);
    // In the barred set the product is the v-conjugate of i, which is iΓ⁰.
    let bar = build_rcqm_gammas(2).unwrap();
    let q = bar.get(5).compose(bar.get(6));
    assert!(q.is_linear());
    let g0 = ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]);
    assert!(q.max_abs_diff(&AntilinearOperator::linear(g0.scale(I))) < 1e-15);
    assert!(bar.get(7).max_abs_diff(&AntilinearOperator::identity(4).scale(I)) == 0.0);
}

#[test]
fn barred_set_is_v_conjugate_for_every_dimension() {
    for n in [2, 4, 6, 8] {
        let std = build_standard_gammas(n).unwrap();
        let bar = build_rcqm_gammas(n).unwrap();
        for mu in 0..5 {
            let c = conjugate_by_v(std.get(mu), n).unwrap();
            assert!(c.max_abs_diff(bar.get(mu)) < 1e-14, "N={n} mu={mu}");
        }
    }
}

#[test]
fn so8_tables_close_for_4_and_8() {
    let start = Instant::now();
    for n in [2, 4] {
        for set in [build_extended_gammas(n, ExtendedForm::AntiHermitian).unwrap(), build_rcqm_gammas(n).unwrap()] {
            let table = build_so_generators(&set, SoTarget::So8).unwrap();
            assert_eq!(table.len(), 28);
            let r = verify_so_commutations(&table);
            assert_eq!(r.entries.len(), 28 * 29 / 2);
            assert!(r.passed(), "{}: {:?}", r.name, r.failures().next());
            let pair = verify_so_commutations(&build_so_generators(&set, SoTarget::Su2Pair).unwrap());
            assert!(pair.passed(), "{}: {:?}", pair.name, pair.failures().next());
            assert_eq!(pair.entries.iter().filter(|e| e.label.contains("=0")).count(), 9);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

/// `s^{AB}` with `A, B ≤ 6` (and `s^{78}`) commute with `Γ⁷`; the others do not.
#[test]
fn so6_subalgebra_commutes_with_seventh_generator() {
    for set in [build_extended_gammas(2, ExtendedForm::AntiHermitian).unwrap(), build_rcqm_gammas(2).unwrap()] {
        let table = build_so_generators(&set, SoTarget::So8).unwrap();
        let r = verify_commutes_with(&table, set.get(7), "Eq.49", |g| g.indices.1 <= 6 || g.indices == (7, 8));
        assert!(r.passed(), "{:?}", r.failures().next());
        assert_eq!(build_so_generators(&set, SoTarget::So6).unwrap().len(), 15);
    }
}

#[test]
fn corrupted_generator_is_detected() {
    let set = build_standard_gammas(2).unwrap();
    let bad = set.with_replaced(2, set.get(2).scale_real(1.01));
    let r = verify_clifford_relations(&bad);
    assert!(!r.passed());
    assert!(r.failures().any(|f| f.label == "{2,2}"));
}

#[test]
fn unsupported_dimensions_and_wrong_sources() {
    for n in [1, 3, 5, 10] {
        assert_eq!(build_standard_gammas(n).unwrap_err(), CliffordError::UnsupportedDimension(n));
        assert!(build_rcqm_gammas(n).is_err());
    }
    let std = build_standard_gammas(2).unwrap();
    assert!(matches!(build_so_generators(&std, SoTarget::So8), Err(CliffordError::WrongRepresentation { .. })));
}
