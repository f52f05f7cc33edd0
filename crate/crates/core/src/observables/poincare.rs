//! Poincaré generator sets and their commutator residuals.
//!
//! Each generator at a momentum node is a first-order differential operator
//! `A(k) + Σ_l B_l(k) ∂_l` with matrix-valued second-order jet coefficients.
//! Test states are Gaussian jets, so `[G, D]ψ` and `[G_a, G_b]ψ` are exact
//! pointwise; the grid only supplies quadrature nodes for the norms.
//!
//! Index conventions are contravariant: `x^l = i∂/∂k^l`, `p^l = k^l`,
//! metric `diag(1, -1, -1, -1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::jet::Jet;
use crate::clifford::standard_matrices;
use crate::fields::{FieldError, MomentumGrid};
use crate::linalg::{pairwise_sum, ComplexMatrix, C64, I};
use crate::report::RelationReport;
use crate::spin::{spin_tensor, SpinSystem};
use crate::transforms::TransformError;

pub const POINCARE_TOLERANCE: f64 = 1e-6;
pub const CONTRAST_FLOOR: f64 = 1e-2;

/// Square matrix of jets.
#[derive(Clone, Debug)]
pub struct MatJet {
    pub dim: usize,
    pub e: Vec<Jet>,
}

impl MatJet {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, e: vec![Jet::zero(); dim * dim] }
    }

    pub fn constant(m: &ComplexMatrix) -> Self {
        let dim = m.rows();
        Self { dim, e: (0..dim * dim).map(|i| Jet::constant(m[(i / dim, i % dim)])).collect() }
    }

    /// `f · I`.
    pub fn scalar(f: Jet, dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.e[i * dim + i] = f;
        }
        out
    }

    /// `f · M`.
    pub fn weighted(m: &ComplexMatrix, f: Jet) -> Self {
        let dim = m.rows();
        Self { dim, e: (0..dim * dim).map(|i| f.scale(m[(i / dim, i % dim)])).collect() }
    }

    pub fn mul(&self, o: &MatJet) -> MatJet {
        let d = self.dim;
        let mut out = Self::zeros(d);
        let live: Vec<bool> = o.e.iter().map(|x| !x.is_zero()).collect();
        for r in 0..d {
            for j in 0..d {
                let a = self.e[r * d + j];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    if live[j * d + c] {
                        out.e[r * d + c] = out.e[r * d + c] + a * o.e[j * d + c];
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &MatJet) -> MatJet {
        MatJet { dim: self.dim, e: self.e.iter().zip(&o.e).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &MatJet) -> MatJet {
        MatJet { dim: self.dim, e: self.e.iter().zip(&o.e).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, c: C64) -> MatJet {
        MatJet { dim: self.dim, e: self.e.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn times(&self, f: Jet) -> MatJet {
        MatJet { dim: self.dim, e: self.e.iter().map(|a| *a * f).collect() }
    }

    pub fn derivative(&self, axis: usize) -> MatJet {
        MatJet { dim: self.dim, e: self.e.iter().map(|a| a.derivative(axis)).collect() }
    }

    pub fn apply(&self, v: &[Jet]) -> Vec<Jet> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                (0..d).fold(Jet::zero(), |acc, c| {
                    let a = self.e[r * d + c];
                    if a.is_zero() {
                        acc
                    } else {
                        acc + a * v[c]
                    }
                })
            })
            .collect()
    }
}

/// `A + Σ_l B_l ∂_l` at one node.
#[derive(Clone, Debug)]
pub struct DiffOp {
    pub a: MatJet,
    pub b: Option<[MatJet; 3]>,
}

impl DiffOp {
    pub fn mult(a: MatJet) -> Self {
        Self { a, b: None }
    }

    /// `x^l = i ∂/∂k^l`.
    pub fn position(l: usize, dim: usize) -> Self {
        let mut b = [MatJet::zeros(dim), MatJet::zeros(dim), MatJet::zeros(dim)];
        b[l] = MatJet::scalar(Jet::constant(I), dim);
        Self { a: MatJet::zeros(dim), b: Some(b) }
    }

    pub fn dim(&self) -> usize {
        self.a.dim
    }

    /// `self ∘ other`. At most one factor may carry derivatives.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        match (&self.b, &o.b) {
            (Some(_), Some(_)) => panic!("composition would be second order"),
            (None, None) => DiffOp::mult(self.a.mul(&o.a)),
            (None, Some(d)) => DiffOp { a: self.a.mul(&o.a), b: Some(d.clone().map(|dl| self.a.mul(&dl))) },
            (Some(b), None) => {
                // (A + B∂)(C·) = (AC + B_m ∂_m C) + B_l C ∂_l
                let mut a = self.a.mul(&o.a);
                for (m, bm) in b.iter().enumerate() {
                    a = a.add(&bm.mul(&o.a.derivative(m)));
                }
                DiffOp { a, b: Some(b.clone().map(|bl| bl.mul(&o.a))) }
            }
        }
    }

    fn combine(&self, o: &DiffOp, sign: f64) -> DiffOp {
        let s = |m: &MatJet| m.scale(C64::new(sign, 0.0));
        let a = self.a.add(&s(&o.a));
        let b = match (&self.b, &o.b) {
            (None, None) => None,
            (Some(x), None) => Some(x.clone()),
            (None, Some(y)) => Some(y.clone().map(|m| s(&m))),
            (Some(x), Some(y)) => Some([0, 1, 2].map(|l| x[l].add(&s(&y[l])))),
        };
        DiffOp { a, b }
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        self.combine(o, 1.0)
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.combine(o, -1.0)
    }

    pub fn scale(&self, c: C64) -> DiffOp {
        DiffOp { a: self.a.scale(c), b: self.b.as_ref().map(|b| b.clone().map(|m| m.scale(c))) }
    }

    pub fn anticommutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).add(&o.compose(self))
    }

    /// Value of `self ψ` only; needs first derivatives of `ψ`.
    pub fn apply_value(&self, psi: &[Jet]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); d];
        for (r, o) in out.iter_mut().enumerate() {
            for c in 0..d {
                *o += self.a.e[r * d + c].v * psi[c].v;
            }
        }
        if let Some(b) = &self.b {
            assert!(psi.iter().all(|p| p.order > 0), "derivative of an order-0 jet is not exact");
            for (l, bl) in b.iter().enumerate() {
                for (r, o) in out.iter_mut().enumerate() {
                    for c in 0..d {
                        *o += bl.e[r * d + c].v * psi[c].g[l];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, psi: &[Jet]) -> Vec<Jet> {
        let mut out = self.a.apply(psi);
        if let Some(b) = &self.b {
            for (l, bl) in b.iter().enumerate() {
                let d: Vec<Jet> = psi.iter().map(|p| p.derivative(l)).collect();
                out.iter_mut().zip(bl.apply(&d)).for_each(|(o, x)| *o = *o + x);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSet {
    RcqmOrbital,
    RcqmFull,
    Fw,
    Dirac,
    Covariant,
    /// Orbital part of the covariant set only (contrast).
    CovariantOrbital,
    /// Spin part of the covariant set only (contrast).
    CovariantSpin,
}

impl GeneratorSet {
    pub const PRIMARY: [GeneratorSet; 5] =
        [Self::RcqmOrbital, Self::RcqmFull, Self::Fw, Self::Dirac, Self::Covariant];

    pub fn name(self) -> &'static str {
        match self {
            Self::RcqmOrbital => "rcqm_orbital",
            Self::RcqmFull => "rcqm_full",
            Self::Fw => "fw",
            Self::Dirac => "dirac",
            Self::Covariant => "covariant",
            Self::CovariantOrbital => "covariant_orbital",
            Self::CovariantSpin => "covariant_spin",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Self::RcqmOrbital => "Eq.21",
            Self::RcqmFull => "Eq.56",
            Self::Fw => "Eq.72",
            Self::Dirac => "Eq.78",
            Self::Covariant | Self::CovariantOrbital | Self::CovariantSpin => "Eq.98",
        }
    }

    fn needs_gammas(self) -> bool {
        matches!(self, Self::Dirac | Self::Covariant | Self::CovariantOrbital | Self::CovariantSpin)
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [
            Self::RcqmOrbital,
            Self::RcqmFull,
            Self::Fw,
            Self::Dirac,
            Self::Covariant,
            Self::CovariantOrbital,
            Self::CovariantSpin,
        ]
        .into_iter()
        .find(|g| g.name() == s)
        .ok_or_else(|| format!("unknown generator set `{s}`"))
    }
}

/// Ten Poincaré generators in fixed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenIndex {
    P(usize),
    J(usize, usize),
}

pub const GENERATORS: [GenIndex; 10] = [
    GenIndex::P(0),
    GenIndex::P(1),
    GenIndex::P(2),
    GenIndex::P(3),
    GenIndex::J(0, 1),
    GenIndex::J(0, 2),
    GenIndex::J(0, 3),
    GenIndex::J(1, 2),
    GenIndex::J(1, 3),
    GenIndex::J(2, 3),
];

impl GenIndex {
    pub fn label(self) -> String {
        match self {
            GenIndex::P(m) => format!("P{m}"),
            GenIndex::J(a, b) => format!("J{a}{b}"),
        }
    }

    fn position(self) -> usize {
        GENERATORS.iter().position(|g| *g == self).expect("known generator")
    }
}

fn metric(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 0) => 1.0,
        (x, y) if x == y => -1.0,
        _ => 0.0,
    }
}

/// `J^{μν}` as `(sign, index)`; `None` on the diagonal.
fn j_index(mu: usize, nu: usize) -> Option<(f64, usize)> {
    use std::cmp::Ordering::*;
    match mu.cmp(&nu) {
        Equal => None,
        Less => Some((1.0, GenIndex::J(mu, nu).position())),
        Greater => Some((-1.0, GenIndex::J(nu, mu).position())),
    }
}

/// Structure combination `[G_a, G_b] = Σ c_i G_i` with overall sign `eps`
/// multiplying the standard `i(g ⋯)` right-hand sides.
pub fn structure(a: GenIndex, b: GenIndex, eps: f64) -> Vec<(C64, usize)> {
    let ie = C64::new(0.0, eps);
    let mut out = Vec::new();
    let mut push_j = |w: f64, mu: usize, nu: usize| {
        if w != 0.0 {
            if let Some((s, ix)) = j_index(mu, nu) {
                out.push((ie * (w * s), ix));
            }
        }
    };
    match (a, b) {
        (GenIndex::P(_), GenIndex::P(_)) => {}
        (GenIndex::J(mu, nu), GenIndex::P(rho)) => {
            let mut v = Vec::new();
            let w1 = metric(nu, rho);
            if w1 != 0.0 {
                v.push((ie * w1, GenIndex::P(mu).position()));
            }
            let w2 = metric(mu, rho);
            if w2 != 0.0 {
                v.push((ie * -w2, GenIndex::P(nu).position()));
            }
            return v;
        }
        (GenIndex::P(_), GenIndex::J(_, _)) => {
            return structure(b, a, eps).into_iter().map(|(c, i)| (-c, i)).collect();
        }
        (GenIndex::J(mu, nu), GenIndex::J(rho, sig)) => {
            push_j(metric(nu, rho), mu, sig);
            push_j(-metric(mu, rho), nu, sig);
            push_j(-metric(nu, sig), mu, rho);
            push_j(metric(mu, sig), nu, rho);
        }
    }
    out
}

/// One operator of a set at a node, with its explicit time derivative.
#[derive(Clone, Debug)]
pub struct NodeGenerator {
    pub index: GenIndex,
    pub op: DiffOp,
    pub dt: Option<DiffOp>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoincareOptions {
    /// Sign of the spin term in the boosts.
    pub spin_sign: f64,
    /// Sign multiplying the standard structure constants.
    pub structure_sign: f64,
}

impl Default for PoincareOptions {
    fn default() -> Self {
        Self { spin_sign: 1.0, structure_sign: 1.0 }
    }
}

/// Gaussian test state `w · exp(-|k-k₀|²/(4σ²) - i k·x₀)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestState {
    pub k0: [f64; 3],
    pub x0: [f64; 3],
    pub sigma: f64,
    pub weights: Vec<C64>,
}

impl TestState {
    /// Deterministic off-axis state with unequal complex weights.
    pub fn generic(dim: usize, variant: usize) -> Self {
        let v = variant as f64;
        let weights = (0..dim)
            .map(|c| {
                let c = c as f64;
                C64::new((0.7 + 0.3 * c + 0.2 * v).cos(), (0.4 - 0.9 * c + 0.5 * v).sin())
            })
            .collect();
        Self {
            k0: [0.3 - 0.2 * v, -0.2 + 0.1 * v, 0.4],
            x0: [0.5, -0.3 + 0.4 * v, 0.2],
            sigma: 0.8 + 0.2 * v,
            weights,
        }
    }

    /// Plain values at one momentum.
    pub fn value(&self, k: [f64; 3]) -> Vec<C64> {
        let kj = [Jet::real(k[0]), Jet::real(k[1]), Jet::real(k[2])];
        self.at(&kj).iter().map(|j| j.v).collect()
    }

    fn at(&self, k: &[Jet; 3]) -> Vec<Jet> {
        let mut e = Jet::zero();
        for a in 0..3 {
            let d = k[a] - Jet::real(self.k0[a]);
            e = e + (d * d).scale_real(-0.25 / (self.sigma * self.sigma)) + k[a].scale(C64::new(0.0, -self.x0[a]));
        }
        let g = e.exp();
        self.weights.iter().map(|w| g.scale(*w)).collect()
    }
}

/// Matrices shared by every node of a set.
struct SetData {
    set: GeneratorSet,
    dim: usize,
    mass: f64,
    t: f64,
    opts: PoincareOptions,
    /// Γ⁰ in rcqm/fw block form (σ³ for N = 1).
    g0: ComplexMatrix,
    spin: [ComplexMatrix; 3],
    /// `[Γ⁰, Γ¹, Γ², Γ³]`, only for the covariant-type sets.
    gammas: Option<[ComplexMatrix; 4]>,
}

fn cross(s: &[MatJet; 3], k: &[Jet; 3]) -> [MatJet; 3] {
    [
        s[1].times(k[2]).sub(&s[2].times(k[1])),
        s[2].times(k[0]).sub(&s[0].times(k[2])),
        s[0].times(k[1]).sub(&s[1].times(k[0])),
    ]
}

impl SetData {
    fn new(set: GeneratorSet, sys: &SpinSystem, mass: f64, t: f64, opts: &PoincareOptions) -> Result<Self, FieldError> {
        if !(mass > 0.0) {
            return Err(FieldError::NonPositiveMass(mass));
        }
        let n = sys.n;
        let id = ComplexMatrix::identity(n);
        let g0 = ComplexMatrix::block_diag(&id, &-&id);
        let gammas = if set.needs_gammas() {
            if n % 2 != 0 {
                return Err(FieldError::OddMultiplicity(n));
            }
            let g = standard_matrices(n).map_err(TransformError::from)?;
            Some([g[0].clone(), g[1].clone(), g[2].clone(), g[3].clone()])
        } else {
            None
        };
        let spin = match set {
            GeneratorSet::RcqmOrbital | GeneratorSet::RcqmFull => sys.doublet_rcqm.clone(),
            _ => sys.doublet_fw.clone(),
        };
        Ok(Self { set, dim: sys.dim(), mass, t, opts: opts.clone(), g0, spin, gammas })
    }

    fn generators(&self, k: &[Jet; 3]) -> Vec<NodeGenerator> {
        let d = self.dim;
        let m = self.mass;
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let w = (k2 + Jet::real(m * m)).sqrt();
        let inv_wm = (w + Jet::real(m)).recip();
        let half = C64::new(0.5, 0.0);
        let p: [DiffOp; 3] = [0, 1, 2].map(|l| DiffOp::mult(MatJet::scalar(k[l], d)));
        let x: [DiffOp; 3] = [0, 1, 2].map(|l| DiffOp::position(l, d));
        let omega = DiffOp::mult(MatJet::scalar(w, d));
        let orbital_rot = |l: usize, n: usize| x[l].compose(&p[n]).sub(&x[n].compose(&p[l]));
        let tp = |l: usize| p[l].scale(C64::new(self.t, 0.0));
        let spin_c = self.spin.clone().map(|s| MatJet::constant(&s));
        let tensor = |l: usize, n: usize| DiffOp::mult(MatJet::constant(&spin_tensor(&self.spin, l + 1, n + 1)));
        let ss = C64::new(self.opts.spin_sign, 0.0);

        let (p0, rot, boost): (DiffOp, Vec<DiffOp>, Vec<DiffOp>) = match self.set {
            GeneratorSet::RcqmOrbital | GeneratorSet::RcqmFull => {
                let full = self.set == GeneratorSet::RcqmFull;
                let sxk = cross(&spin_c, k);
                let rot = [(0, 1), (0, 2), (1, 2)]
                    .map(|(l, n)| if full { orbital_rot(l, n).add(&tensor(l, n)) } else { orbital_rot(l, n) });
                let boost = [0, 1, 2].map(|l| {
                    let g = tp(l).sub(&x[l].anticommutator(&omega).scale(half));
                    if full {
                        g.add(&DiffOp::mult(sxk[l].times(inv_wm)).scale(ss))
                    } else {
                        g
                    }
                });
                (omega.clone(), rot.to_vec(), boost.to_vec())
            }
            GeneratorSet::Fw => {
                let g0 = DiffOp::mult(MatJet::constant(&self.g0));
                let sxk = cross(&spin_c, k);
                let rot = [(0, 1), (0, 2), (1, 2)].map(|(l, n)| orbital_rot(l, n).add(&tensor(l, n)));
                let boost = [0, 1, 2].map(|l| {
                    let orb = g0.compose(&x[l].anticommutator(&omega)).scale(half);
                    let sp = g0.compose(&DiffOp::mult(sxk[l].times(inv_wm))).scale(ss);
                    tp(l).sub(&orb).add(&sp)
                });
                (g0.compose(&omega), rot.to_vec(), boost.to_vec())
            }
            GeneratorSet::Dirac | GeneratorSet::Covariant | GeneratorSet::CovariantOrbital | GeneratorSet::CovariantSpin => {
                let g = self.gammas.as_ref().expect("gamma matrices for covariant sets");
                let gc = g.clone().map(|x| MatJet::constant(&x));
                let gk = gc[1].times(k[0]).add(&gc[2].times(k[1])).add(&gc[3].times(k[2]));
                let hd = gc[0].mul(&gk.add(&MatJet::scalar(Jet::real(m), d)));
                let h = DiffOp::mult(hd.clone());
                if self.set == GeneratorSet::Dirac {
                    let c = (w * (w + Jet::real(m))).scale_real(2.0).sqrt().recip();
                    let wm = MatJet::scalar(w + Jet::real(m), d);
                    let vm = wm.sub(&gk).times(c);
                    let vp = wm.add(&gk).times(c);
                    let sd = spin_c.clone().map(|s| vm.mul(&s).mul(&vp));
                    // s^Γ = (i/2)(Γ²Γ³, Γ³Γ¹, Γ¹Γ²)
                    let hi = C64::new(0.0, 0.5);
                    let sg = [(2, 3), (3, 1), (1, 2)].map(|(a, b)| gc[a].mul(&gc[b]).scale(hi));
                    let sgxk = cross(&sg, k);
                    let inv_w = w.recip();
                    let xd: [DiffOp; 3] = [0, 1, 2].map(|l| {
                        let t1 = gc[l + 1].times(inv_w).scale(hi);
                        let t2 = sgxk[l].times(inv_w * inv_wm);
                        let t3 = gk.times(k[l] * inv_w * inv_w * inv_wm).scale(hi);
                        x[l].add(&DiffOp::mult(t1.sub(&t2).sub(&t3)))
                    });
                    let sdlm = |l: usize, n: usize| -> MatJet {
                        // s^{23} = s¹, s^{31} = s², s^{12} = s³
                        match (l, n) {
                            (1, 2) => sd[0].clone(),
                            (0, 2) => sd[1].scale(C64::new(-1.0, 0.0)),
                            (0, 1) => sd[2].clone(),
                            _ => unreachable!(),
                        }
                    };
                    let rot = [(0, 1), (0, 2), (1, 2)]
                        .map(|(l, n)| xd[l].compose(&p[n]).sub(&xd[n].compose(&p[l])).add(&DiffOp::mult(sdlm(l, n))));
                    let sdxk = cross(&sd, k);
                    let boost = [0, 1, 2].map(|l| {
                        let orb = xd[l].anticommutator(&h).scale(half);
                        let sp = DiffOp::mult(hd.mul(&sdxk[l]).times(inv_w * inv_wm)).scale(ss);
                        tp(l).sub(&orb).add(&sp)
                    });
                    (h.clone(), rot.to_vec(), boost.to_vec())
                } else {
                    let quarter_i = C64::new(0.0, 0.25);
                    let spin_mu = |a: usize, b: usize| DiffOp::mult(gc[a].mul(&gc[b]).sub(&gc[b].mul(&gc[a])).scale(quarter_i));
                    let orb = self.set != GeneratorSet::CovariantSpin;
                    let spn = self.set != GeneratorSet::CovariantOrbital;
                    let zero = DiffOp::mult(MatJet::zeros(d));
                    let rot = [(0, 1), (0, 2), (1, 2)].map(|(l, n)| {
                        let mut g = zero.clone();
                        if orb {
                            g = g.add(&orbital_rot(l, n));
                        }
                        if spn {
                            g = g.add(&spin_mu(l + 1, n + 1));
                        }
                        g
                    });
                    let boost = [0, 1, 2].map(|l| {
                        let mut g = zero.clone();
                        if orb {
                            g = g.add(&tp(l)).sub(&x[l].compose(&h));
                        }
                        if spn {
                            g = g.add(&spin_mu(0, l + 1));
                        }
                        g
                    });
                    (h.clone(), rot.to_vec(), boost.to_vec())
                }
            }
        };
        let has_t = !matches!(self.set, GeneratorSet::CovariantSpin);
        let mut out = vec![NodeGenerator { index: GenIndex::P(0), op: p0, dt: None }];
        for l in 0..3 {
            out.push(NodeGenerator { index: GenIndex::P(l + 1), op: p[l].clone(), dt: None });
        }
        for (l, b) in boost.into_iter().enumerate() {
            let dt = has_t.then(|| p[l].clone());
            out.push(NodeGenerator { index: GenIndex::J(0, l + 1), op: b, dt });
        }
        for (g, (l, n)) in rot.into_iter().zip([(1, 2), (1, 3), (2, 3)]) {
            out.push(NodeGenerator { index: GenIndex::J(l, n), op: g, dt: None });
        }
        out
    }
}

/// Squared residual sums for one node: 10 motion entries then 45 closure pairs.
fn node_residuals(data: &SetData, k: [f64; 3], states: &[TestState]) -> Vec<(f64, Vec<f64>)> {
    let kj = [Jet::variable(k[0], 0), Jet::variable(k[1], 1), Jet::variable(k[2], 2)];
    let gens = data.generators(&kj);
    states.iter().map(|st| state_residuals(data, &gens, &st.at(&kj))).collect()
}

fn state_residuals(data: &SetData, gens: &[NodeGenerator], psi: &[Jet]) -> (f64, Vec<f64>) {
    let norm: f64 = psi.iter().map(|j| j.v.norm_sqr()).sum();
    let ys: Vec<Vec<Jet>> = gens.iter().map(|g| g.op.apply(psi)).collect();
    let motion = &gens[0].op;
    let hpsi = motion.apply(psi);
    let sq = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut out = Vec::with_capacity(55);
    for (g, y) in gens.iter().zip(&ys) {
        // [G, D]ψ = -i(∂ₜG)ψ - [G, p⁰]ψ
        let gh = g.op.apply_value(&hpsi);
        let hg = motion.apply_value(y);
        let dt = g.dt.as_ref().map(|d| d.apply_value(psi));
        let r: Vec<C64> = (0..psi.len())
            .map(|c| {
                let mut v = -(gh[c] - hg[c]);
                if let Some(dt) = &dt {
                    v -= I * dt[c];
                }
                v
            })
            .collect();
        out.push(sq(&r));
    }
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let ab = gens[a].op.apply_value(&ys[b]);
            let ba = gens[b].op.apply_value(&ys[a]);
            let comb = structure(gens[a].index, gens[b].index, data.opts.structure_sign);
            let r: Vec<C64> = (0..psi.len())
                .map(|c| {
                    let mut v = ab[c] - ba[c];
                    for (coef, ix) in &comb {
                        v -= coef * ys[*ix][c].v;
                    }
                    v
                })
                .collect();
            out.push(sq(&r));
        }
    }
    (norm, out)
}

/// `G ψ` at one momentum for every generator of a set, in [`GENERATORS`] order.
pub fn generator_values(
    set: GeneratorSet,
    sys: &SpinSystem,
    mass: f64,
    t: f64,
    opts: &PoincareOptions,
    state: &TestState,
    k: [f64; 3],
) -> Result<Vec<Vec<C64>>, FieldError> {
    let data = SetData::new(set, sys, mass, t, opts)?;
    let kj = [Jet::variable(k[0], 0), Jet::variable(k[1], 1), Jet::variable(k[2], 2)];
    let psi = state.at(&kj);
    Ok(data.generators(&kj).iter().map(|g| g.op.apply_value(&psi)).collect())
}

/// Relative residuals, `[G, D]` entries first (10) then closure pairs (45).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareResiduals {
    pub set: GeneratorSet,
    pub time: f64,
    pub motion: Vec<(String, f64)>,
    pub closure: Vec<(String, f64)>,
}

impl PoincareResiduals {
    pub fn max_motion(&self) -> f64 {
        self.motion.iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn max_closure(&self) -> f64 {
        self.closure.iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

/// Residuals of one set, maximized over the test states.
pub fn poincare_residuals(
    set: GeneratorSet,
    sys: &SpinSystem,
    grid: &MomentumGrid,
    states: &[TestState],
    t: f64,
    opts: &PoincareOptions,
) -> Result<PoincareResiduals, FieldError> {
    let data = SetData::new(set, sys, grid.mass, t, opts)?;
    if states.iter().any(|s| s.weights.len() != data.dim) {
        return Err(FieldError::Components { ncomp: data.dim, reason: "test state weights must match the set dimension" });
    }
    let per_node: Vec<Vec<(f64, Vec<f64>)>> =
        (0..grid.len()).into_par_iter().map(|i| node_residuals(&data, grid.node_k(i), states)).collect();
    let mut best = vec![0.0f64; 55];
    for s in 0..states.len() {
        let norm = pairwise_sum(&per_node.iter().map(|p| p[s].0).collect::<Vec<_>>());
        for (e, slot) in best.iter_mut().enumerate() {
            let r = pairwise_sum(&per_node.iter().map(|p| p[s].1[e]).collect::<Vec<_>>());
            *slot = slot.max((r / norm).sqrt());
        }
    }
    let mut motion = Vec::new();
    let mut closure = Vec::new();
    for (i, g) in GENERATORS.iter().enumerate() {
        motion.push((format!("[{},D]", g.label()), best[i]));
    }
    let mut e = GENERATORS.len();
    for a in 0..GENERATORS.len() {
        for b in a + 1..GENERATORS.len() {
            closure.push((format!("[{},{}]", GENERATORS[a].label(), GENERATORS[b].label()), best[e]));
            e += 1;
        }
    }
    Ok(PoincareResiduals { set, time: t, motion, closure })
}

impl PoincareResiduals {
    pub fn to_report(&self, tolerance: f64) -> RelationReport {
        let mut r = RelationReport::new(format!("poincare {} t={}", self.set, self.time), self.set.anchor(), tolerance);
        for (label, v) in self.motion.iter().chain(&self.closure) {
            r.push(label.clone(), self.set.anchor(), *v);
        }
        r
    }
}

/// Default test family: two generic Gaussians.
pub fn default_states(dim: usize) -> Vec<TestState> {
    vec![TestState::generic(dim, 0), TestState::generic(dim, 1)]
}

/// Default 16³ grid used by the residual suite.
pub fn default_grid(mass: f64) -> Result<MomentumGrid, FieldError> {
    MomentumGrid::cubic(16, 8.0 / mass, mass)
}

/// Maximum orbital-set residuals under each structure-constant sign, `(+1, -1)`.
pub fn structure_sign_scan(sys: &SpinSystem, grid: &MomentumGrid) -> Result<(f64, f64), FieldError> {
    let states = default_states(sys.dim());
    let run = |eps: f64| -> Result<f64, FieldError> {
        let opts = PoincareOptions { spin_sign: 1.0, structure_sign: eps };
        let r = poincare_residuals(GeneratorSet::RcqmOrbital, sys, grid, &states, 0.0, &opts)?;
        Ok(r.max_closure())
    };
    Ok((run(1.0)?, run(-1.0)?))
}

/// Maximum residuals of a set under each boost spin-term sign, `(+1, -1)`.
pub fn spin_sign_scan(set: GeneratorSet, sys: &SpinSystem, grid: &MomentumGrid) -> Result<(f64, f64), FieldError> {
    let states = default_states(sys.dim());
    let run = |s: f64| -> Result<f64, FieldError> {
        let opts = PoincareOptions { spin_sign: s, structure_sign: 1.0 };
        let r = poincare_residuals(set, sys, grid, &states, 0.0, &opts)?;
        Ok(r.max_motion().max(r.max_closure()))
    };
    Ok((run(1.0)?, run(-1.0)?))
}

/// Full suite: every primary set at `t = 0` and `t = 1/m`, plus the contrast.
pub fn poincare_suite(sys: &SpinSystem, grid: &MomentumGrid) -> Result<Vec<RelationReport>, FieldError> {
    let states = default_states(sys.dim());
    let opts = PoincareOptions::default();
    let even = sys.n % 2 == 0;
    let mut out = Vec::new();
    for set in GeneratorSet::PRIMARY {
        if set.needs_gammas() && !even {
            continue;
        }
        for t in [0.0, 1.0 / grid.mass] {
            out.push(poincare_residuals(set, sys, grid, &states, t, &opts)?.to_report(POINCARE_TOLERANCE));
        }
    }
    if even {
        out.push(covariant_contrast(sys, grid)?);
    }
    Ok(out)
}

/// `[G, D]` of the orbital and spin parts of the covariant set alone.
pub fn covariant_contrast(sys: &SpinSystem, grid: &MomentumGrid) -> Result<RelationReport, FieldError> {
    let states = default_states(sys.dim());
    let opts = PoincareOptions::default();
    let mut r = RelationReport::new("covariant contrast", "Eq.98", CONTRAST_FLOOR);
    for set in [GeneratorSet::CovariantOrbital, GeneratorSet::CovariantSpin] {
        let res = poincare_residuals(set, sys, grid, &states, 0.0, &opts)?;
        for (label, v) in res.motion.iter().skip(4) {
            r.push_at_least(format!("{} {label}", set.name()), "Eq.98", *v, CONTRAST_FLOOR);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Spin;

    #[test]
    fn structure_is_antisymmetric() {
        for &a in &GENERATORS {
            for &b in &GENERATORS {
                let ab = structure(a, b, 1.0);
                let mut ba = structure(b, a, 1.0);
                ba.iter_mut().for_each(|c| c.0 = -c.0);
                let key = |v: &Vec<(C64, usize)>| {
                    let mut acc = [C64::new(0.0, 0.0); 10];
                    for (c, i) in v {
                        acc[*i] += c;
                    }
                    acc
                };
                assert_eq!(key(&ab), key(&ba), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn rotation_commutator_with_momentum() {
        // [J¹², P¹] = i P²
        let c = structure(GenIndex::J(1, 2), GenIndex::P(1), 1.0);
        assert_eq!(c, vec![(I, GenIndex::P(2).position())]);
    }

    #[test]
    fn orbital_set_on_small_grid() {
        let sys = SpinSystem::new(Spin::from_twice(1).unwrap());
        let grid = MomentumGrid::cubic(4, 8.0, 1.0).unwrap();
        let r = poincare_residuals(
            GeneratorSet::RcqmOrbital,
            &sys,
            &grid,
            &default_states(4),
            0.7,
            &PoincareOptions::default(),
        )
        .unwrap();
        assert!(r.max_motion() < 1e-12 && r.max_closure() < 1e-12, "{r:?}");
    }
}
