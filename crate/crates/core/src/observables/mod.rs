//! Conserved functionals, Poincaré residuals and Casimir checks.
//!
//! Functionals are quadratures over the time-independent amplitude
//! `A(k) = e^{iωt} f̃(k, t)` of an RCQM state, with `x^l = i∂/∂k^l` applied
//! spectrally. [`main_conserved_explicit`] evaluates the same generators on
//! `f̃(t)` itself, where the boosts carry their explicit `t`.

pub mod jet;
pub mod poincare;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{build_rcqm_gammas, build_so_generators, CliffordError, GammaSet, SoTarget};
use crate::fields::{apply_position, FieldError, StateRep, WaveFunctionK};
use crate::linalg::{ComplexMatrix, C64, I};
use crate::report::RelationReport;
use crate::spin::{spin_tensor, SpinSystem};
use crate::transforms::{dirac_hamiltonian, dirac_spin_at_k, TransformError};

pub const DRIFT_TOLERANCE: f64 = 1e-8;
pub const REALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ObservablesError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("state has {got} components, spin system needs {expected}")]
    Components { expected: usize, got: usize },
    #[error("the a32 algebra needs even N (got N = {0})")]
    OddMultiplicity(usize),
    #[error("generator {0} is neither Hermitian nor anti-Hermitian as a linear map")]
    NotNormalizable(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub label: String,
    pub anchor: String,
    pub value: f64,
    /// Imaginary part left over by the quadrature.
    pub imag: f64,
}

impl Functional {
    fn new(label: impl Into<String>, anchor: &str, z: C64) -> Self {
        Self { label: label.into(), anchor: anchor.into(), value: z.re, imag: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservablesReport {
    pub time: f64,
    /// `P⁰..P³`.
    #[serde(rename = "P")]
    pub p: Vec<Functional>,
    /// `J²³, J³¹, J¹², J⁰¹, J⁰², J⁰³`.
    #[serde(rename = "J")]
    pub j: Vec<Functional>,
    pub additional: Vec<Functional>,
    pub a32: Vec<Functional>,
}

impl ObservablesReport {
    pub fn entries(&self) -> impl Iterator<Item = &Functional> {
        self.p.iter().chain(&self.j).chain(&self.additional).chain(&self.a32)
    }

    pub fn len(&self) -> usize {
        self.entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_imag(&self) -> f64 {
        self.entries().map(|f| f.imag.abs()).fold(0.0, f64::max)
    }

    /// `|value(t) - value(0)|` per entry, labels taken from `self`.
    pub fn drift_from(&self, initial: &ObservablesReport) -> Vec<(String, f64)> {
        assert_eq!(self.len(), initial.len(), "reports list different functionals");
        self.entries().zip(initial.entries()).map(|(a, b)| (a.label.clone(), (a.value - b.value).abs())).collect()
    }
}

fn require_rcqm(state: &WaveFunctionK, sys: &SpinSystem) -> Result<(), ObservablesError> {
    if state.representation != StateRep::Rcqm {
        return Err(FieldError::WrongRepresentation { expected: StateRep::Rcqm, got: state.representation }.into());
    }
    if state.ncomp != sys.dim() {
        return Err(ObservablesError::Components { expected: sys.dim(), got: state.ncomp });
    }
    Ok(())
}

/// `A(k) = e^{iωt} f̃(k, t)`.
pub fn amplitude(state: &WaveFunctionK) -> WaveFunctionK {
    let n = state.nodes();
    let om = state.grid.omega_table();
    let mut a = state.clone();
    for (i, z) in a.data.iter_mut().enumerate() {
        *z *= C64::from_polar(1.0, om[i % n] * state.time);
    }
    a.time = 0.0;
    a
}

/// Operator pieces on one state, shared by the functionals.
struct Pieces {
    psi: WaveFunctionK,
    /// `x^l ψ`.
    x: [WaveFunctionK; 3],
    /// `ωψ`.
    w: WaveFunctionK,
    /// `k^l ψ`.
    k: [WaveFunctionK; 3],
}

impl Pieces {
    fn new(psi: WaveFunctionK) -> Self {
        let x = [0, 1, 2].map(|l| apply_position(&psi, l));
        let w = psi.scale_nodes(&psi.grid.omega_table());
        let k = [0, 1, 2].map(|l| psi.apply_momentum(l));
        Self { psi, x, w, k }
    }

    /// `<ψ, (x^l k^n - x^n k^l) ψ>`, using `<ψ, x k ψ> = <x ψ, k ψ>`.
    fn orbital_rotation(&self, l: usize, n: usize) -> C64 {
        self.x[l].inner(&self.k[n]) - self.x[n].inner(&self.k[l])
    }

    /// `-½ <ψ, {x^l, ω} ψ>`.
    fn orbital_boost(&self, l: usize) -> C64 {
        -(self.x[l].inner(&self.w) + self.w.inner(&self.x[l])) * 0.5
    }

    fn matrix(&self, m: &ComplexMatrix) -> C64 {
        self.psi.inner(&self.psi.apply_matrix(m))
    }

    /// `<ψ, (s × k)^l / (ω + m) ψ>`.
    fn spin_boost(&self, s: &[ComplexMatrix; 3], l: usize) -> C64 {
        let g = &self.psi.grid;
        let inv: Vec<f64> = (0..g.len()).map(|i| 1.0 / (g.omega_at(i) + g.mass)).collect();
        let (a, b) = ((l + 1) % 3, (l + 2) % 3);
        // (s × k)^l = s^a k^b - s^b k^a
        let t1 = self.psi.apply_matrix(&s[a]).apply_momentum(b);
        let t2 = self.psi.apply_matrix(&s[b]).apply_momentum(a);
        self.psi.inner(&t1.sub(&t2).scale_nodes(&inv))
    }
}

const ROTATIONS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

fn rot_label(prefix: &str, (l, n): (usize, usize)) -> String {
    format!("{prefix}{}{}", l + 1, n + 1)
}

fn main_from(pc: &Pieces, sys: &SpinSystem, t: f64) -> (Vec<Functional>, Vec<Functional>) {
    let mut p = vec![Functional::new("P0", "Eq.57", pc.psi.inner(&pc.w))];
    for l in 0..3 {
        p.push(Functional::new(format!("P{}", l + 1), "Eq.57", pc.psi.inner(&pc.k[l])));
    }
    let s = &sys.doublet_rcqm;
    let mut j = Vec::new();
    for (l, n) in ROTATIONS {
        let v = pc.orbital_rotation(l, n) + pc.matrix(&spin_tensor(s, l + 1, n + 1));
        j.push(Functional::new(rot_label("J", (l, n)), "Eq.58", v));
    }
    for l in 0..3 {
        let explicit = pc.psi.inner(&pc.k[l]) * t;
        let v = explicit + pc.orbital_boost(l) + pc.spin_boost(s, l);
        j.push(Functional::new(format!("J0{}", l + 1), "Eq.59", v));
    }
    (p, j)
}

/// The ten main functionals, evaluated on the amplitude.
pub fn main_conserved(state: &WaveFunctionK, sys: &SpinSystem) -> Result<(Vec<Functional>, Vec<Functional>), ObservablesError> {
    require_rcqm(state, sys)?;
    Ok(main_from(&Pieces::new(amplitude(state)), sys, 0.0))
}

/// The ten main functionals evaluated on `f̃(t)` with the explicit `t` in
/// the boosts. Needs a box large enough that the packet never wraps.
pub fn main_conserved_explicit(
    state: &WaveFunctionK,
    sys: &SpinSystem,
) -> Result<(Vec<Functional>, Vec<Functional>), ObservablesError> {
    require_rcqm(state, sys)?;
    Ok(main_from(&Pieces::new(state.clone()), sys, state.time))
}

fn additional_from(pc: &Pieces, sys: &SpinSystem) -> Vec<Functional> {
    if sys.s.twice() == 0 {
        return Vec::new();
    }
    let s = &sys.doublet_rcqm;
    let mut out = Vec::new();
    for (l, n) in ROTATIONS {
        out.push(Functional::new(rot_label("M", (l, n)), "Eq.60", pc.orbital_rotation(l, n)));
    }
    for l in 0..3 {
        out.push(Functional::new(format!("M0{}", l + 1), "Eq.60", pc.orbital_boost(l)));
    }
    for (l, n) in ROTATIONS {
        out.push(Functional::new(rot_label("S", (l, n)), "Eq.60", pc.matrix(&spin_tensor(s, l + 1, n + 1))));
    }
    for l in 0..3 {
        out.push(Functional::new(format!("S̆{}", l + 1), "Eq.56", pc.spin_boost(s, l)));
    }
    out
}

/// Twelve additional functionals: orbital `M^{ln}`, `M^{0l}`, spin `S^{ln}`
/// and `S̆^l`. Empty for spin 0.
pub fn additional_conserved(state: &WaveFunctionK, sys: &SpinSystem) -> Result<Vec<Functional>, ObservablesError> {
    require_rcqm(state, sys)?;
    Ok(additional_from(&Pieces::new(amplitude(state)), sys))
}

/// The 32 matrix generators `I, s̄^{AB}, i, i·s̄^{AB}` (A < B ≤ 6) as linear maps.
pub fn a32_generators(gammas: &GammaSet) -> Result<Vec<(String, ComplexMatrix)>, ObservablesError> {
    let table = build_so_generators(gammas, SoTarget::So6)?;
    let dim = gammas.dim();
    let mut base = vec![("I".to_string(), ComplexMatrix::identity(dim))];
    for g in &table.generators {
        if !g.op.is_linear() {
            return Err(ObservablesError::NotNormalizable(g.label.clone()));
        }
        base.push((g.label.clone(), g.op.matrix.clone()));
    }
    let imag: Vec<(String, ComplexMatrix)> = base
        .iter()
        .map(|(l, m)| (if l == "I" { "i".to_string() } else { format!("i·{l}") }, m.scale(I)))
        .collect();
    base.extend(imag);
    Ok(base)
}

/// `<A, G A>` for each a32 generator; anti-Hermitian ones are divided by `i`.
pub fn a32_conserved(state: &WaveFunctionK, sys: &SpinSystem, gammas: &GammaSet) -> Result<Vec<Functional>, ObservablesError> {
    require_rcqm(state, sys)?;
    if sys.n % 2 != 0 {
        return Err(ObservablesError::OddMultiplicity(sys.n));
    }
    let amp = amplitude(state);
    a32_from(&amp, gammas)
}

fn a32_from(amp: &WaveFunctionK, gammas: &GammaSet) -> Result<Vec<Functional>, ObservablesError> {
    let mut out = Vec::new();
    for (label, m) in a32_generators(gammas)? {
        let herm = m.max_abs_diff(&m.adjoint()) < 1e-14;
        let anti = m.max_abs_diff(&-&m.adjoint()) < 1e-14;
        let z = amp.inner(&amp.apply_matrix(&m));
        let v = match (herm, anti) {
            (true, _) => z,
            (_, true) => z / I,
            _ => return Err(ObservablesError::NotNormalizable(label)),
        };
        out.push(Functional::new(label, "Eq.61", v));
    }
    Ok(out)
}

/// Full report: 10 main, 12 additional (s > 0), 32 algebra entries (even N).
pub fn observables_report(state: &WaveFunctionK, sys: &SpinSystem) -> Result<ObservablesReport, ObservablesError> {
    require_rcqm(state, sys)?;
    let pc = Pieces::new(amplitude(state));
    let (p, j) = main_from(&pc, sys, 0.0);
    let additional = additional_from(&pc, sys);
    let a32 = if sys.n % 2 == 0 { a32_from(&pc.psi, &build_rcqm_gammas(sys.n)?)? } else { Vec::new() };
    Ok(ObservablesReport { time: state.time, p, j, additional, a32 })
}

pub const CASIMIR_TOLERANCE: f64 = 1e-10;

/// `p² = H_D² - k² = m²` and `W = m² s_D² = s(s+1) m²` at each sample.
pub fn casimir_check(sys: &SpinSystem, ks: &[[f64; 3]], m: f64) -> Result<RelationReport, ObservablesError> {
    if sys.n % 2 != 0 {
        return Err(ObservablesError::OddMultiplicity(sys.n));
    }
    let dim = sys.dim();
    let id = ComplexMatrix::identity(dim);
    let mut r = RelationReport::new(format!("casimir s={}", sys.s), "Sec.7", CASIMIR_TOLERANCE);
    let scale = m * m;
    for (i, &k) in ks.iter().enumerate() {
        let h = dirac_hamiltonian(k, m, sys.n)?;
        let k2 = k.iter().map(|x| x * x).sum::<f64>();
        let p2 = &(&h * &h) - &id.scale_real(k2);
        r.push(format!("p²=m² #{i}"), "Sec.7", p2.max_abs_diff(&id.scale_real(m * m)) / scale);
        let sd = dirac_spin_at_k(k, m, sys.n)?;
        let s2 = &(&(&sd[0] * &sd[0]) + &(&sd[1] * &sd[1])) + &(&sd[2] * &sd[2]);
        let w = s2.scale_real(m * m);
        r.push(format!("W=s(s+1)m² #{i}"), "Sec.7", w.max_abs_diff(&id.scale_real(sys.casimir * m * m)) / scale);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_gaussian_packet, MomentumGrid};
    use crate::spin::Spin;

    #[test]
    fn spin_zero_reports_ten_entries() {
        let sys = SpinSystem::new(Spin::from_twice(0).unwrap());
        let g = MomentumGrid::cubic(8, 8.0, 1.0).unwrap();
        let w = [C64::new(1.0, 0.0), C64::new(0.0, 0.5)];
        let st = make_gaussian_packet(&g, 2, [0.0; 3], 1.0, &w).unwrap();
        let r = observables_report(&st, &sys).unwrap();
        assert_eq!(r.len(), 10);
    }

    #[test]
    fn a32_has_32_generators() {
        let gs = a32_generators(&build_rcqm_gammas(2).unwrap()).unwrap();
        assert_eq!(gs.len(), 32);
    }
}
