//! Operator bridges between the three representations.
//!
//! `v = diag(I, Ĉ)` links RCQM and FW; the momentum-space unitary
//! `V∓(k) = (∓Γ·k + ω + m) / √(2ω(ω+m))` links FW and the covariant form, with
//! `H_D = V⁻ H_FW V⁺`, `H_FW = Γ⁰ω`, `H_D = Γ⁰(Γ·k + m)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{build_standard_gammas, standard_matrices, CliffordError};
use crate::linalg::{AntilinearOperator, ComplexMatrix, RealLinearOperator, C64, I};
use crate::report::RelationReport;
use crate::spin::{doublet_spin, gamma_spin, DoubletForm, Spin};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("operator is neither linear nor antilinear after conjugation by v")]
    MixedLinearity,
    #[error("dimension mismatch: operator is {got}x{got}, expected {expected}x{expected}")]
    Dimension { got: usize, expected: usize },
}

/// `v = diag(I_N, Ĉ I_N)` as a real-linear operator on `C^{2N}`.
pub fn v_operator(n: usize) -> RealLinearOperator {
    let upper: Vec<f64> = (0..2 * n).map(|i| if i < n { 1.0 } else { 0.0 }).collect();
    let lower: Vec<f64> = upper.iter().map(|x| 1.0 - x).collect();
    RealLinearOperator { linear: ComplexMatrix::diag_real(&upper), antilinear: ComplexMatrix::diag_real(&lower) }
}

/// `v ∘ op ∘ v`. The operator should be given in anti-Hermitian form.
pub fn conjugate_by_v(op: &AntilinearOperator, n: usize) -> Result<AntilinearOperator, TransformError> {
    if op.dim() != 2 * n {
        return Err(TransformError::Dimension { got: op.dim(), expected: 2 * n });
    }
    let v = v_operator(n);
    let out = v
        .compose(&RealLinearOperator::from(op))
        .and_then(|x| x.compose(&v))
        .map_err(|_| TransformError::Dimension { got: op.dim(), expected: 2 * n })?;
    out.to_antilinear(0.0).ok_or(TransformError::MixedLinearity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FwSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FwOperatorAt {
    pub k: [f64; 3],
    pub m: f64,
    pub n: usize,
    pub sign: FwSign,
    pub matrix: ComplexMatrix,
}

pub fn omega(k: [f64; 3], m: f64) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + m * m).sqrt()
}

fn gamma_dot(g: &[ComplexMatrix; 5], k: [f64; 3]) -> ComplexMatrix {
    let mut acc = g[1].scale_real(k[0]);
    acc = &acc + &g[2].scale_real(k[1]);
    &acc + &g[3].scale_real(k[2])
}

fn check_mass(m: f64) -> Result<(), TransformError> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(TransformError::NonPositiveMass(m));
    }
    Ok(())
}

pub fn fw_operator(k: [f64; 3], m: f64, n: usize, sign: FwSign) -> Result<FwOperatorAt, TransformError> {
    check_mass(m)?;
    let g = standard_matrices(n)?;
    let w = omega(k, m);
    let s = match sign {
        FwSign::Minus => -1.0,
        FwSign::Plus => 1.0,
    };
    let norm = 1.0 / (2.0 * w * (w + m)).sqrt();
    let id = ComplexMatrix::identity(2 * n);
    let matrix = (&gamma_dot(&g, k).scale_real(s) + &id.scale_real(w + m)).scale_real(norm);
    Ok(FwOperatorAt { k, m, n, sign, matrix })
}

/// `(V⁻(k), V⁺(k))`.
pub fn fw_pair(k: [f64; 3], m: f64, n: usize) -> Result<(ComplexMatrix, ComplexMatrix), TransformError> {
    Ok((fw_operator(k, m, n, FwSign::Minus)?.matrix, fw_operator(k, m, n, FwSign::Plus)?.matrix))
}

pub fn fw_hamiltonian(k: [f64; 3], m: f64, n: usize) -> Result<ComplexMatrix, TransformError> {
    check_mass(m)?;
    let g = standard_matrices(n)?;
    Ok(g[0].scale_real(omega(k, m)))
}

pub fn dirac_hamiltonian(k: [f64; 3], m: f64, n: usize) -> Result<ComplexMatrix, TransformError> {
    check_mass(m)?;
    let g = standard_matrices(n)?;
    let inner = &gamma_dot(&g, k) + &ComplexMatrix::identity(2 * n).scale_real(m);
    Ok(&g[0] * &inner)
}

fn spin_for(n: usize) -> Spin {
    Spin::from_twice(n as u32 - 1).expect("even N within range has a spin")
}

/// `s_D(k) = V⁻(k) s_FW V⁺(k)` with the doublet spin of the multiplicity N.
pub fn dirac_spin_at_k(k: [f64; 3], m: f64, n: usize) -> Result<[ComplexMatrix; 3], TransformError> {
    let (vm, vp) = fw_pair(k, m, n)?;
    let s = doublet_spin(spin_for(n), DoubletForm::Fw);
    Ok(s.map(|sj| &(&vm * &sj) * &vp))
}

/// Charge sign in the covariant representation, `g_D = -V⁻ Γ⁰ V⁺ = -H_D / ω`.
pub fn dirac_charge_sign_at_k(k: [f64; 3], m: f64, n: usize) -> Result<ComplexMatrix, TransformError> {
    Ok(dirac_hamiltonian(k, m, n)?.scale_real(-1.0 / omega(k, m)))
}

/// Basis spinors: `V⁻(k) d_A` for the first N orts, `V⁻(-k) d_B` for the rest.
pub fn dirac_spinors(k: [f64; 3], m: f64, n: usize) -> Result<Vec<Vec<C64>>, TransformError> {
    let vk = fw_operator(k, m, n, FwSign::Minus)?.matrix;
    let vmk = fw_operator([-k[0], -k[1], -k[2]], m, n, FwSign::Minus)?.matrix;
    Ok((0..2 * n)
        .map(|a| {
            let v = if a < n { &vk } else { &vmk };
            (0..2 * n).map(|r| v[(r, a)]).collect()
        })
        .collect())
}

fn cross_matrix(s: &[ComplexMatrix; 3], k: [f64; 3]) -> [ComplexMatrix; 3] {
    // (s × k)^l = ε^{lab} s^a k^b
    [
        &s[1].scale_real(k[2]) - &s[2].scale_real(k[1]),
        &s[2].scale_real(k[0]) - &s[0].scale_real(k[2]),
        &s[0].scale_real(k[1]) - &s[1].scale_real(k[0]),
    ]
}

/// The `k`-dependent part of `x_D`:
/// `iΓ/(2ω) - (s^Γ × k)/(ω(ω+m)) - i k (Γ·k) / (2ω²(ω+m))`.
pub fn x_dirac_matrix_part(k: [f64; 3], m: f64, n: usize) -> Result<[ComplexMatrix; 3], TransformError> {
    check_mass(m)?;
    let g = standard_matrices(n)?;
    let set = build_standard_gammas(n)?;
    let sg = gamma_spin(&set).map(|op| op.matrix);
    let w = omega(k, m);
    let cross = cross_matrix(&sg, k);
    let gk = gamma_dot(&g, k);
    let out = [0usize, 1, 2].map(|j| {
        let t1 = g[j + 1].scale(I * (0.5 / w));
        let t2 = cross[j].scale_real(1.0 / (w * (w + m)));
        let t3 = gk.scale(I * (k[j] / (2.0 * w * w * (w + m))));
        &(&t1 - &t2) - &t3
    });
    Ok(out)
}

/// Closed-form mean-spin operator for N=2 at momentum k:
/// `s - i(Γ×k)/(2ω) - k×(s×k)/(ω(ω+m))`, obtained by replacing ∇ with `ik`.
pub fn mean_spin_closed_form(k: [f64; 3], m: f64) -> Result<[ComplexMatrix; 3], TransformError> {
    check_mass(m)?;
    let g = standard_matrices(2)?;
    let gam = [g[1].clone(), g[2].clone(), g[3].clone()];
    let s = doublet_spin(spin_for(2), DoubletForm::Fw);
    let w = omega(k, m);
    let gxk = cross_matrix(&gam, k);
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    let ks = &(&s[0].scale_real(k[0]) + &s[1].scale_real(k[1])) + &s[2].scale_real(k[2]);
    Ok([0usize, 1, 2].map(|j| {
        // k × (s × k) = s k² - k (k·s)
        let kxsxk = &s[j].scale_real(k2) - &ks.scale_real(k[j]);
        let a = gxk[j].scale(I * (0.5 / w));
        let b = kxsxk.scale_real(1.0 / (w * (w + m)));
        &(&s[j] - &a) - &b
    }))
}

pub const TRANSFORM_TOLERANCE: f64 = 1e-12;
pub const SPINOR_TOLERANCE: f64 = 1e-10;

/// Unitarity of `V∓` and the FW-to-covariant Hamiltonian relation at each `k`.
pub fn verify_fw_relations(ks: &[[f64; 3]], m: f64, n: usize) -> Result<RelationReport, TransformError> {
    let mut r = RelationReport::new(format!("fw relations 2N={}", 2 * n), "Eq.73", TRANSFORM_TOLERANCE);
    let id = ComplexMatrix::identity(2 * n);
    let (mut inv, mut inv_rev, mut adj, mut ham) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &k in ks {
        let (vm, vp) = fw_pair(k, m, n)?;
        inv = inv.max((&vm * &vp).max_abs_diff(&id));
        inv_rev = inv_rev.max((&vp * &vm).max_abs_diff(&id));
        adj = adj.max(vm.max_abs_diff(&vp.adjoint()));
        let hd = &(&vm * &fw_hamiltonian(k, m, n)?) * &vp;
        ham = ham.max(hd.max_abs_diff(&dirac_hamiltonian(k, m, n)?));
    }
    r.push("V⁻V⁺=I", "Eq.73", inv);
    r.push("V⁺V⁻=I", "Eq.73", inv_rev);
    r.push("V⁻=(V⁺)†", "Eq.73", adj);
    r.push("V⁻H_FW V⁺=H_D", "Eq.74", ham);
    Ok(r)
}

/// `max |V⁺ H_FW V⁻ - H_D|` over `ks`: the reversed conjugation.
pub fn reversed_conjugation_residual(ks: &[[f64; 3]], m: f64, n: usize) -> Result<f64, TransformError> {
    let mut worst = 0.0f64;
    for &k in ks {
        let (vm, vp) = fw_pair(k, m, n)?;
        let h = &(&vp * &fw_hamiltonian(k, m, n)?) * &vm;
        worst = worst.max(h.max_abs_diff(&dirac_hamiltonian(k, m, n)?));
    }
    Ok(worst)
}

/// `s³_D` on the basis spinors: particle spinors at `k`, antiparticle spinors
/// with `k -> -k` in the operator, eigenvalues `s, s-1, .., -s` in each half.
pub fn verify_dirac_spinors(ks: &[[f64; 3]], m: f64, n: usize) -> Result<RelationReport, TransformError> {
    let mut r = RelationReport::new(format!("dirac spinors 2N={}", 2 * n), "Eq.92", SPINOR_TOLERANCE);
    let s = spin_for(n).value();
    let mut worst = vec![0.0f64; 2 * n];
    for &k in ks {
        let plus = dirac_spin_at_k(k, m, n)?;
        let minus = dirac_spin_at_k([-k[0], -k[1], -k[2]], m, n)?;
        for (a, v) in dirac_spinors(k, m, n)?.iter().enumerate() {
            let op = if a < n { &plus[2] } else { &minus[2] };
            let lam = s - (a % n) as f64;
            let res = op.apply(v).iter().zip(v).fold(0.0f64, |acc, (x, y)| acc.max((x - y * lam).norm()));
            worst[a] = worst[a].max(res);
        }
    }
    for (a, w) in worst.into_iter().enumerate() {
        let lam = s - (a % n) as f64;
        r.push(format!("s3_D v{} = {lam} v{}", a + 1, a + 1), "Eq.92", w);
    }
    Ok(r)
}
