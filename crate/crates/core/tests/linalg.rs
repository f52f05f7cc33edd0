use proptest::prelude::*;
use spinor_forge::linalg::{
    al_compose, hermitian_eigh, hermitian_propagator, kron, pairwise_sum, vec_dot, vec_max_abs_diff,
    AntilinearOperator, ComplexMatrix, LinalgError, RealLinearOperator, C64,
};

fn cvec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    cvec(n * n).prop_map(move |d| ComplexMatrix::new(n, n, d).unwrap())
}

fn operator(n: usize) -> impl Strategy<Value = AntilinearOperator> {
    (matrix(n), any::<bool>()).prop_map(|(m, c)| AntilinearOperator::new(m, c).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(|m| (&m + &m.adjoint()).scale_real(0.5))
}

/// Operators, a vector and a scalar on a shared random dimension.
fn triple() -> impl Strategy<Value = (AntilinearOperator, AntilinearOperator, AntilinearOperator, Vec<C64>, C64)> {
    (1usize..=6).prop_flat_map(|n| (operator(n), operator(n), operator(n), cvec(n), (-2.0..2.0f64, -2.0..2.0f64)))
        .prop_map(|(p, q, r, v, (a, b))| (p, q, r, v, C64::new(a, b)))
}

proptest! {
    #[test]
    fn composition_matches_sequential_application((p, q, _r, v, _c) in triple()) {
        let direct = p.compose(&q).apply(&v);
        let seq = p.apply(&q.apply(&v));
        prop_assert!(vec_max_abs_diff(&direct, &seq) < 1e-12);
    }

    #[test]
    fn composition_is_associative((p, q, r, _v, _c) in triple()) {
        let left = p.compose(&q).compose(&r);
        let right = p.compose(&q.compose(&r));
        prop_assert_eq!(left.conjugates, right.conjugates);
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn scalars_pass_through_conjugated((p, _q, _r, v, c) in triple()) {
        let cv: Vec<C64> = v.iter().map(|z| z * c).collect();
        let expect_factor = if p.conjugates { c.conj() } else { c };
        let want: Vec<C64> = p.apply(&v).iter().map(|z| z * expect_factor).collect();
        prop_assert!(vec_max_abs_diff(&p.apply(&cv), &want) < 1e-12);
    }

    #[test]
    fn real_linear_embedding_agrees((p, q, _r, v, _c) in triple()) {
        let rp = RealLinearOperator::from(&p);
        prop_assert!(vec_max_abs_diff(&rp.apply(&v), &p.apply(&v)) < 1e-12);
        let rq = RealLinearOperator::from(&q);
        let composed = rp.compose(&rq).unwrap();
        let back = composed.to_antilinear(0.0).unwrap();
        prop_assert!(back.max_abs_diff(&p.compose(&q)) < 1e-12);
    }

    /// `Re <u, T v> = Re <T† u, v>` for both linear and antilinear `T`.
    #[test]
    fn adjoint_for_real_inner_product((p, _q, _r, v, _c) in triple(), seed in 0u64..1000) {
        let u: Vec<C64> = (0..v.len()).map(|i| C64::new(((i as u64 + seed) % 7) as f64 - 3.0, (seed % 5) as f64 * 0.3)).collect();
        let lhs = vec_dot(&u, &p.apply(&v)).re;
        let rhs = vec_dot(&p.adjoint().apply(&u), &v).re;
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn eigh_reconstructs_and_is_unitary(h in (1usize..=8).prop_flat_map(hermitian)) {
        let (vals, vecs) = hermitian_eigh(&h).unwrap();
        let n = h.rows();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let re = &(&vecs * &ComplexMatrix::diag_real(&vals)) * &vecs.adjoint();
        prop_assert!(re.max_abs_diff(&h) < 1e-12);
        prop_assert!((&vecs.adjoint() * &vecs).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn propagator_is_a_one_parameter_group(h in (1usize..=6).prop_flat_map(hermitian), t in -3.0..3.0f64, s in -3.0..3.0f64) {
        let ut = hermitian_propagator(&h, t).unwrap();
        let us = hermitian_propagator(&h, s).unwrap();
        let uts = hermitian_propagator(&h, t + s).unwrap();
        prop_assert!((&ut * &us).max_abs_diff(&uts) < 1e-11);
        prop_assert!((&ut * &ut.adjoint()).max_abs_diff(&ComplexMatrix::identity(h.rows())) < 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(3), c in matrix(2), d in matrix(3)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn pairwise_sum_is_accurate(xs in prop::collection::vec(-1e3..1e3f64, 0..500)) {
        let naive: f64 = xs.iter().sum();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-12 * scale);
    }
}

#[test]
fn conjugation_squares_to_identity() {
    let c = AntilinearOperator::conjugation(3);
    assert_eq!(c.compose(&c), AntilinearOperator::identity(3));
}

#[test]
fn shape_errors_are_reported() {
    assert!(matches!(ComplexMatrix::new(2, 2, vec![C64::new(0.0, 0.0); 3]), Err(LinalgError::EntryCount { .. })));
    let a = AntilinearOperator::identity(2);
    let b = AntilinearOperator::identity(3);
    assert!(matches!(al_compose(&a, &b), Err(LinalgError::DimensionMismatch { .. })));
    let lin = AntilinearOperator::identity(2);
    let anti = AntilinearOperator::conjugation(2);
    assert_eq!(lin.try_add(&anti).unwrap_err(), LinalgError::MixedLinearity);
    let rect = ComplexMatrix::zeros(2, 3);
    assert!(matches!(hermitian_eigh(&rect), Err(LinalgError::NotSquare(2, 3))));
}
