//! Momentum-grid states and their evolution in the three representations.
//!
//! Data are stored in momentum space in DFT order. The position view uses the
//! continuum-normalized transform `f(x) = (2π)^{-3/2} Σ_k Δk³ e^{ik·x} f̃(k)`,
//! which is unitary between the two grid measures `Δk³` and `Δx³`.

pub mod bessel;
pub mod fft3;
pub mod kernel;
pub mod sfwf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::standard_matrices;
use crate::linalg::{pairwise_sum, pairwise_sum_c, vec_dot, ComplexMatrix, C64};
use crate::spin::{DoubletForm, SpinSystem};
use crate::transforms::{dirac_charge_sign_at_k, dirac_spin_at_k, omega, x_dirac_matrix_part, TransformError};

pub use fft3::{Direction, Fft3};

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("expected a {expected:?} state, got {got:?}")]
    WrongRepresentation { expected: StateRep, got: StateRep },
    #[error("covariant representation requires even N (got N = {0})")]
    OddMultiplicity(usize),
    #[error("component count {ncomp} is not valid here: {reason}")]
    Components { ncomp: usize, reason: &'static str },
    #[error("mass must be positive for this operation, got {0}")]
    NonPositiveMass(f64),
    #[error("kernel realization requires cubic cells")]
    NonCubicCells,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Periodic box with `n` points per axis, position lengths `l`, particle mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub n: [usize; 3],
    pub l: [f64; 3],
    pub mass: f64,
}

impl MomentumGrid {
    pub fn new(n: [usize; 3], l: [f64; 3], mass: f64) -> Result<Self, FieldError> {
        for a in 0..3 {
            if n[a] < 2 || n[a] % 2 != 0 {
                return Err(FieldError::DegenerateGrid(format!("axis {a}: point count {} must be even and >= 2", n[a])));
            }
            if !(l[a] > 0.0) || !l[a].is_finite() {
                return Err(FieldError::DegenerateGrid(format!("axis {a}: box length {} must be positive", l[a])));
            }
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(FieldError::DegenerateGrid(format!("mass {mass} must be finite and non-negative")));
        }
        Ok(Self { n, l, mass })
    }

    pub fn cubic(n: usize, l: f64, mass: f64) -> Result<Self, FieldError> {
        Self::new([n; 3], [l; 3], mass)
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dk(&self, axis: usize) -> f64 {
        TWO_PI / self.l[axis]
    }

    pub fn dx(&self, axis: usize) -> f64 {
        self.l[axis] / self.n[axis] as f64
    }

    /// Momentum-space cell volume `Δk³`.
    pub fn dk3(&self) -> f64 {
        (0..3).map(|a| self.dk(a)).product()
    }

    /// Position-space cell volume `Δx³`.
    pub fn dx3(&self) -> f64 {
        (0..3).map(|a| self.dx(a)).product()
    }

    fn signed(i: usize, n: usize) -> f64 {
        if i < n / 2 {
            i as f64
        } else {
            i as f64 - n as f64
        }
    }

    pub fn k_value(&self, axis: usize, i: usize) -> f64 {
        Self::signed(i, self.n[axis]) * self.dk(axis)
    }

    /// Wrapped coordinate in `[-L/2, L/2)`.
    pub fn x_value(&self, axis: usize, i: usize) -> f64 {
        Self::signed(i, self.n[axis]) * self.dx(axis)
    }

    pub fn k_axis(&self, axis: usize) -> Vec<f64> {
        (0..self.n[axis]).map(|i| self.k_value(axis, i)).collect()
    }

    pub fn x_axis(&self, axis: usize) -> Vec<f64> {
        (0..self.n[axis]).map(|i| self.x_value(axis, i)).collect()
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.n[1] + iy) * self.n[0] + ix
    }

    pub fn unravel(&self, flat: usize) -> [usize; 3] {
        let ix = flat % self.n[0];
        let iy = (flat / self.n[0]) % self.n[1];
        let iz = flat / (self.n[0] * self.n[1]);
        [ix, iy, iz]
    }

    /// Index of the node at `-k` (the Nyquist plane maps to itself).
    pub fn neg_index(&self, flat: usize) -> usize {
        let [ix, iy, iz] = self.unravel(flat);
        let neg = |i: usize, n: usize| (n - i) % n;
        self.index(neg(ix, self.n[0]), neg(iy, self.n[1]), neg(iz, self.n[2]))
    }

    /// Node index for a signed DFT index triple.
    pub fn index_signed(&self, k: [i64; 3]) -> usize {
        let w = |i: i64, n: usize| i.rem_euclid(n as i64) as usize;
        self.index(w(k[0], self.n[0]), w(k[1], self.n[1]), w(k[2], self.n[2]))
    }

    pub fn node_k(&self, flat: usize) -> [f64; 3] {
        let [ix, iy, iz] = self.unravel(flat);
        [self.k_value(0, ix), self.k_value(1, iy), self.k_value(2, iz)]
    }

    pub fn node_x(&self, flat: usize) -> [f64; 3] {
        let [ix, iy, iz] = self.unravel(flat);
        [self.x_value(0, ix), self.x_value(1, iy), self.x_value(2, iz)]
    }

    pub fn omega_at(&self, flat: usize) -> f64 {
        omega(self.node_k(flat), self.mass)
    }

    pub fn omega_table(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.omega_at(i)).collect()
    }

    pub fn fft(&self) -> Fft3 {
        Fft3::new(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateRep {
    Rcqm,
    Fw,
    Dirac,
}

impl std::str::FromStr for StateRep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rcqm" => Ok(Self::Rcqm),
            "fw" => Ok(Self::Fw),
            "dirac" => Ok(Self::Dirac),
            other => Err(format!("unknown representation `{other}` (expected rcqm, fw or dirac)")),
        }
    }
}

impl std::fmt::Display for StateRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Rcqm => "rcqm",
            Self::Fw => "fw",
            Self::Dirac => "dirac",
        })
    }
}

/// Multi-component momentum-space state, data indexed `(component, iz, iy, ix)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunctionK {
    pub grid: MomentumGrid,
    pub ncomp: usize,
    pub data: Vec<C64>,
    pub representation: StateRep,
    pub time: f64,
}

impl WaveFunctionK {
    pub fn zeros(grid: &MomentumGrid, ncomp: usize, representation: StateRep) -> Self {
        Self { grid: grid.clone(), ncomp, data: vec![C64::new(0.0, 0.0); ncomp * grid.len()], representation, time: 0.0 }
    }

    pub fn nodes(&self) -> usize {
        self.grid.len()
    }

    pub fn component(&self, c: usize) -> &[C64] {
        let n = self.nodes();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [C64] {
        let n = self.nodes();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn spinor_at(&self, node: usize) -> Vec<C64> {
        let n = self.nodes();
        (0..self.ncomp).map(|c| self.data[c * n + node]).collect()
    }

    pub fn set_spinor(&mut self, node: usize, v: &[C64]) {
        let n = self.nodes();
        for (c, z) in v.iter().enumerate() {
            self.data[c * n + node] = *z;
        }
    }

    /// Builds a new state of the same shape from a per-node spinor map.
    pub fn map_spinors(&self, f: impl Fn(usize, &[C64]) -> Vec<C64> + Sync) -> Self {
        let n = self.nodes();
        let spinors: Vec<Vec<C64>> = (0..n).into_par_iter().map(|node| f(node, &self.spinor_at(node))).collect();
        let mut out = self.clone();
        for (node, s) in spinors.iter().enumerate() {
            out.set_spinor(node, s);
        }
        out
    }

    /// Multiplies every component by a real per-node factor.
    pub fn scale_nodes(&self, factor: &[f64]) -> Self {
        let n = self.nodes();
        let mut out = self.clone();
        for (i, z) in out.data.iter_mut().enumerate() {
            *z *= factor[i % n];
        }
        out
    }

    /// `<self, other>` with the `Δk³` measure.
    pub fn inner(&self, other: &Self) -> C64 {
        let terms: Vec<C64> = self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).collect();
        pairwise_sum_c(&terms) * self.grid.dk3()
    }

    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self.data.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&terms) * self.grid.dk3()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// L² norm of the difference.
    pub fn l2_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "states differ in shape");
        let terms: Vec<f64> = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).collect();
        (pairwise_sum(&terms) * self.grid.dk3()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= c);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a -= b);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
        out
    }

    /// Applies a constant matrix to every spinor.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Self {
        assert_eq!(m.cols(), self.ncomp);
        self.map_spinors(|_, s| m.apply(s))
    }

    /// Multiplication by `k^axis`.
    pub fn apply_momentum(&self, axis: usize) -> Self {
        let k: Vec<f64> = (0..self.nodes()).map(|i| self.grid.node_k(i)[axis]).collect();
        self.scale_nodes(&k)
    }

    fn require(&self, rep: StateRep) -> Result<(), FieldError> {
        if self.representation != rep {
            return Err(FieldError::WrongRepresentation { expected: rep, got: self.representation });
        }
        Ok(())
    }

    fn half(&self) -> Result<usize, FieldError> {
        if self.ncomp % 2 != 0 {
            return Err(FieldError::Components { ncomp: self.ncomp, reason: "a doublet state needs an even count" });
        }
        Ok(self.ncomp / 2)
    }
}

/// Position-space values on the same grid, same component layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionField {
    pub grid: MomentumGrid,
    pub ncomp: usize,
    pub data: Vec<C64>,
}

impl PositionField {
    pub fn component(&self, c: usize) -> &[C64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self.data.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&terms) * self.grid.dx3()
    }

    pub fn l2_diff(&self, other: &Self) -> f64 {
        let terms: Vec<f64> = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).collect();
        (pairwise_sum(&terms) * self.grid.dx3()).sqrt()
    }
}

fn transform_blocks(grid: &MomentumGrid, data: &[C64], ncomp: usize, dir: Direction, scale: f64) -> Vec<C64> {
    let fft = grid.fft();
    let n = grid.len();
    let mut out = data.to_vec();
    out.par_chunks_mut(n).for_each(|blk| {
        fft.process(blk, dir);
        blk.iter_mut().for_each(|z| *z *= scale);
    });
    debug_assert_eq!(out.len(), ncomp * n);
    out
}

pub fn to_position(state: &WaveFunctionK) -> PositionField {
    let g = &state.grid;
    let scale = g.dk3() / TWO_PI.powf(1.5);
    PositionField {
        grid: g.clone(),
        ncomp: state.ncomp,
        data: transform_blocks(g, &state.data, state.ncomp, Direction::Inverse, scale),
    }
}

pub fn to_momentum(field: &PositionField, representation: StateRep, time: f64) -> WaveFunctionK {
    let g = &field.grid;
    let scale = g.dx3() / TWO_PI.powf(1.5);
    WaveFunctionK {
        grid: g.clone(),
        ncomp: field.ncomp,
        data: transform_blocks(g, &field.data, field.ncomp, Direction::Forward, scale),
        representation,
        time,
    }
}

/// Canonical position `x^axis = i ∂/∂k^axis`, applied spectrally through the
/// position view.
pub fn apply_position(state: &WaveFunctionK, axis: usize) -> WaveFunctionK {
    let mut f = to_position(state);
    let n = state.grid.len();
    for (i, z) in f.data.iter_mut().enumerate() {
        *z *= state.grid.node_x(i % n)[axis];
    }
    to_momentum(&f, state.representation, state.time)
}

/// `<x^l>` for `l = 1, 2, 3` (complex, so the imaginary residue can be checked).
pub fn mean_position(state: &WaveFunctionK) -> [C64; 3] {
    let norm = state.norm_sqr();
    [0, 1, 2].map(|a| state.inner(&apply_position(state, a)) / norm)
}

pub fn mean_momentum(state: &WaveFunctionK) -> [f64; 3] {
    let norm = state.norm_sqr();
    [0, 1, 2].map(|a| state.inner(&state.apply_momentum(a)).re / norm)
}

/// Gaussian packet parameters; `x0` shifts the packet in position space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub k0: [f64; 3],
    pub sigma: f64,
    pub weights: Vec<C64>,
    #[serde(default)]
    pub x0: [f64; 3],
}

/// `∝ exp(-(k-k₀)²/(4σ²)) · weights`, unit norm.
pub fn make_gaussian_packet(
    grid: &MomentumGrid,
    ncomp: usize,
    k0: [f64; 3],
    sigma: f64,
    weights: &[C64],
) -> Result<WaveFunctionK, FieldError> {
    let spec = PacketSpec { k0, sigma, weights: weights.to_vec(), x0: [0.0; 3] };
    make_packet(grid, ncomp, &spec, StateRep::Rcqm)
}

pub fn make_packet(grid: &MomentumGrid, ncomp: usize, spec: &PacketSpec, rep: StateRep) -> Result<WaveFunctionK, FieldError> {
    if grid.is_empty() {
        return Err(FieldError::DegenerateGrid("no nodes".into()));
    }
    if !(spec.sigma > 0.0) || !spec.sigma.is_finite() {
        return Err(FieldError::InvalidPacket(format!("width {} must be positive", spec.sigma)));
    }
    if spec.weights.len() != ncomp {
        return Err(FieldError::InvalidPacket(format!("{} weights for {ncomp} components", spec.weights.len())));
    }
    if spec.weights.iter().all(|w| w.norm() == 0.0) {
        return Err(FieldError::InvalidPacket("weights are all zero".into()));
    }
    let mut st = WaveFunctionK::zeros(grid, ncomp, rep);
    let n = grid.len();
    let profile: Vec<C64> = (0..n)
        .map(|i| {
            let k = grid.node_k(i);
            let d2: f64 = (0..3).map(|a| (k[a] - spec.k0[a]).powi(2)).sum();
            let phase = -(0..3).map(|a| k[a] * spec.x0[a]).sum::<f64>();
            C64::from_polar((-d2 / (4.0 * spec.sigma * spec.sigma)).exp(), phase)
        })
        .collect();
    for c in 0..ncomp {
        let w = spec.weights[c];
        st.component_mut(c).iter_mut().zip(&profile).for_each(|(z, p)| *z = w * p);
    }
    let norm = st.norm();
    if !(norm > 0.0) {
        return Err(FieldError::InvalidPacket("packet vanishes on this grid".into()));
    }
    Ok(st.scaled(C64::new(1.0 / norm, 0.0)))
}

/// Per-node V∓ application with cached Γ matrices.
#[derive(Clone, Debug)]
pub struct FwKit {
    n: usize,
    mass: f64,
    gamma: [ComplexMatrix; 3],
}

impl FwKit {
    pub fn new(n: usize, mass: f64) -> Result<Self, FieldError> {
        if n % 2 != 0 {
            return Err(FieldError::OddMultiplicity(n));
        }
        if !(mass > 0.0) {
            return Err(FieldError::NonPositiveMass(mass));
        }
        let g = standard_matrices(n).map_err(TransformError::from)?;
        Ok(Self { n, mass, gamma: [g[1].clone(), g[2].clone(), g[3].clone()] })
    }

    /// `V^{sign}(k) v` with `sign = -1` for V⁻ and `+1` for V⁺.
    pub fn apply(&self, k: [f64; 3], sign: f64, v: &[C64]) -> Vec<C64> {
        let w = omega(k, self.mass);
        let norm = 1.0 / (2.0 * w * (w + self.mass)).sqrt();
        let mut out: Vec<C64> = v.iter().map(|z| z * (w + self.mass)).collect();
        for j in 0..3 {
            if k[j] != 0.0 {
                let gv = self.gamma[j].apply(v);
                out.iter_mut().zip(&gv).for_each(|(o, g)| *o += g * (sign * k[j]));
            }
        }
        out.iter_mut().for_each(|z| *z *= norm);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Exact propagation by `t` (relative to the state's current time).
pub fn evolve(state: &WaveFunctionK, t: f64) -> Result<WaveFunctionK, FieldError> {
    let g = &state.grid;
    let n = g.len();
    let om = g.omega_table();
    let mut out = state.clone();
    out.time = state.time + t;
    if t == 0.0 {
        return Ok(out);
    }
    match state.representation {
        StateRep::Rcqm => {
            for (i, z) in out.data.iter_mut().enumerate() {
                *z *= C64::from_polar(1.0, -om[i % n] * t);
            }
        }
        StateRep::Fw => {
            let half = state.half()?;
            for (i, z) in out.data.iter_mut().enumerate() {
                let sign = if i / n < half { -1.0 } else { 1.0 };
                *z *= C64::from_polar(1.0, sign * om[i % n] * t);
            }
        }
        StateRep::Dirac => {
            let half = state.half()?;
            let kit = FwKit::new(half, g.mass)?;
            out = state.map_spinors(|node, s| {
                let k = g.node_k(node);
                let mut y = kit.apply(k, 1.0, s);
                for (c, z) in y.iter_mut().enumerate() {
                    let sign = if c < half { -1.0 } else { 1.0 };
                    *z *= C64::from_polar(1.0, sign * om[node] * t);
                }
                kit.apply(k, -1.0, &y)
            });
            out.time = state.time + t;
        }
    }
    Ok(out)
}

/// The representation's own Hamiltonian: `ω`, `Γ⁰ω` or `Γ⁰(Γ·k + m)`.
pub fn apply_hamiltonian(state: &WaveFunctionK) -> Result<WaveFunctionK, FieldError> {
    let g = &state.grid;
    let n = g.len();
    let om = g.omega_table();
    match state.representation {
        StateRep::Rcqm => Ok(state.scale_nodes(&om)),
        StateRep::Fw => {
            let half = state.half()?;
            let mut out = state.clone();
            for (i, z) in out.data.iter_mut().enumerate() {
                let sign = if i / n < half { 1.0 } else { -1.0 };
                *z *= sign * om[i % n];
            }
            Ok(out)
        }
        StateRep::Dirac => {
            let half = state.half()?;
            if half % 2 != 0 {
                return Err(FieldError::OddMultiplicity(half));
            }
            let gam = standard_matrices(half).map_err(TransformError::from)?;
            let m = g.mass;
            Ok(state.map_spinors(|node, s| {
                let k = g.node_k(node);
                let mut inner: Vec<C64> = s.iter().map(|z| z * m).collect();
                for j in 0..3 {
                    let gv = gam[j + 1].apply(s);
                    inner.iter_mut().zip(&gv).for_each(|(a, b)| *a += b * k[j]);
                }
                gam[0].apply(&inner)
            }))
        }
    }
}

/// `<ψ, Hψ>` with the representation's Hamiltonian.
pub fn energy(state: &WaveFunctionK) -> Result<f64, FieldError> {
    Ok(state.inner(&apply_hamiltonian(state)?).re)
}

pub fn apply_omega_spectral(state: &WaveFunctionK) -> WaveFunctionK {
    state.scale_nodes(&state.grid.omega_table())
}

/// `v` on grid states: upper components unchanged, lower components
/// conjugated in position space, i.e. `f̃(k) -> conj(f̃(-k))`.
fn apply_v(state: &WaveFunctionK, target: StateRep) -> Result<WaveFunctionK, FieldError> {
    let half = state.half()?;
    let g = &state.grid;
    let n = g.len();
    let mut out = state.clone();
    out.representation = target;
    for c in half..state.ncomp {
        let src = state.component(c);
        let dst = out.component_mut(c);
        for (i, z) in dst.iter_mut().enumerate() {
            *z = src[g.neg_index(i)].conj();
        }
    }
    debug_assert_eq!(out.data.len(), state.ncomp * n);
    Ok(out)
}

pub fn rcqm_to_fw(state: &WaveFunctionK) -> Result<WaveFunctionK, FieldError> {
    state.require(StateRep::Rcqm)?;
    apply_v(state, StateRep::Fw)
}

pub fn fw_to_rcqm(state: &WaveFunctionK) -> Result<WaveFunctionK, FieldError> {
    state.require(StateRep::Fw)?;
    apply_v(state, StateRep::Rcqm)
}

pub fn fw_to_dirac(state: &WaveFunctionK) -> Result<WaveFunctionK, FieldError> {
    state.require(StateRep::Fw)?;
    let kit = FwKit::new(state.half()?, state.grid.mass)?;
    let mut out = state.map_spinors(|node, s| kit.apply(state.grid.node_k(node), -1.0, s));
    out.representation = StateRep::Dirac;
    Ok(out)
}

pub fn dirac_to_fw(state: &WaveFunctionK) -> Result<WaveFunctionK, FieldError> {
    state.require(StateRep::Dirac)?;
    let kit = FwKit::new(state.half()?, state.grid.mass)?;
    let mut out = state.map_spinors(|node, s| kit.apply(state.grid.node_k(node), 1.0, s));
    out.representation = StateRep::Fw;
    Ok(out)
}

/// Converts between any two representations through the chain
/// RCQM ↔ FW ↔ Dirac.
pub fn convert(state: &WaveFunctionK, target: StateRep) -> Result<WaveFunctionK, FieldError> {
    use StateRep::*;
    match (state.representation, target) {
        (a, b) if a == b => Ok(state.clone()),
        (Rcqm, Fw) => rcqm_to_fw(state),
        (Fw, Rcqm) => fw_to_rcqm(state),
        (Fw, Dirac) => fw_to_dirac(state),
        (Dirac, Fw) => dirac_to_fw(state),
        (Rcqm, Dirac) => fw_to_dirac(&rcqm_to_fw(state)?),
        (Dirac, Rcqm) => fw_to_rcqm(&dirac_to_fw(state)?),
        _ => unreachable!("all pairs covered"),
    }
}

/// `‖(i∂₀ - Γ⁰ω̂)φ‖ / ‖φ‖` at the state's time, with a centered difference of
/// step `dt` for the time derivative.
pub fn fw_equation_residual(state: &WaveFunctionK, dt: f64) -> Result<f64, FieldError> {
    state.require(StateRep::Fw)?;
    let half = state.half()?;
    let fwd = evolve(state, dt)?;
    let back = evolve(state, -dt)?;
    let n = state.nodes();
    let om = state.grid.omega_table();
    let mut r = fwd.sub(&back).scaled(C64::new(0.0, 0.5 / dt));
    for (i, z) in r.data.iter_mut().enumerate() {
        let sign = if i / n < half { 1.0 } else { -1.0 };
        *z -= state.data[i] * (sign * om[i % n]);
    }
    Ok(r.norm() / state.norm())
}

/// Smallest energy density `ω|A|²` over the grid (positive for RCQM states).
pub fn min_energy_density(state: &WaveFunctionK) -> f64 {
    let n = state.nodes();
    let om = state.grid.omega_table();
    (0..n)
        .map(|i| om[i] * (0..state.ncomp).map(|c| state.data[c * n + i].norm_sqr()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Discrete de Broglie wave: momentum node and 1-based component `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneWaveSpec {
    pub k_index: [i64; 3],
    pub alpha: usize,
}

/// Unit-norm single-node state with the Cartesian ort `d_alpha`.
pub fn plane_wave(grid: &MomentumGrid, ncomp: usize, spec: PlaneWaveSpec, rep: StateRep) -> Result<WaveFunctionK, FieldError> {
    if spec.alpha == 0 || spec.alpha > ncomp {
        return Err(FieldError::InvalidPacket(format!("component {} outside 1..={ncomp}", spec.alpha)));
    }
    let mut st = WaveFunctionK::zeros(grid, ncomp, rep);
    let node = grid.index_signed(spec.k_index);
    st.component_mut(spec.alpha - 1)[node] = C64::new(1.0 / grid.dk3().sqrt(), 0.0);
    Ok(st)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveEigen {
    pub momentum: [f64; 3],
    pub spin_projection: f64,
    pub charge_sign: f64,
    /// Largest `‖Aψ - λψ‖/‖ψ‖` over the five operators.
    pub residual: f64,
}

fn rayleigh(state: &WaveFunctionK, applied: &WaveFunctionK) -> (f64, f64) {
    let norm = state.norm_sqr();
    let lam = state.inner(applied).re / norm;
    let res = applied.sub(&state.scaled(C64::new(lam, 0.0))).norm() / norm.sqrt();
    (lam, res)
}

/// Builds the de Broglie wave and measures `(p, s³, g)` on it. In the Dirac
/// representation the wave carries the spinor `V⁻(k')d_α` at the node
/// `k' = k` (particle sector) or `k' = -k` (antiparticle sector), and `s³_D`,
/// `g_D` are evaluated at `k'`.
pub fn plane_wave_eigencheck(
    spec: PlaneWaveSpec,
    sys: &SpinSystem,
    grid: &MomentumGrid,
    rep: StateRep,
) -> Result<PlaneWaveEigen, FieldError> {
    let dim = sys.dim();
    let (state, s3, g) = match rep {
        StateRep::Rcqm | StateRep::Fw => {
            let st = plane_wave(grid, dim, spec, rep)?;
            let form = if rep == StateRep::Rcqm { DoubletForm::Rcqm } else { DoubletForm::Fw };
            let s3 = st.apply_matrix(&sys.doublet(form)[2]);
            let g = st.apply_matrix(&sys.charge_sign);
            (st, s3, g)
        }
        StateRep::Dirac => {
            if sys.n % 2 != 0 {
                return Err(FieldError::OddMultiplicity(sys.n));
            }
            let idx = if spec.alpha <= sys.n { spec.k_index } else { spec.k_index.map(|i| -i) };
            let node = grid.index_signed(idx);
            let kp = grid.node_k(node);
            let base = plane_wave(grid, dim, PlaneWaveSpec { k_index: idx, alpha: spec.alpha }, rep)?;
            let kit = FwKit::new(sys.n, grid.mass)?;
            let st = base.map_spinors(|i, s| if i == node { kit.apply(kp, -1.0, s) } else { s.to_vec() });
            let s3m = dirac_spin_at_k(kp, grid.mass, sys.n)?[2].clone();
            let gm = dirac_charge_sign_at_k(kp, grid.mass, sys.n)?;
            (st.clone(), st.apply_matrix(&s3m), st.apply_matrix(&gm))
        }
    };
    let mut residual: f64 = 0.0;
    let mut momentum = [0.0; 3];
    for (a, p) in momentum.iter_mut().enumerate() {
        let (lam, res) = rayleigh(&state, &state.apply_momentum(a));
        *p = lam;
        residual = residual.max(res);
    }
    let (spin_projection, r1) = rayleigh(&state, &s3);
    let (charge_sign, r2) = rayleigh(&state, &g);
    residual = residual.max(r1).max(r2);
    Ok(PlaneWaveEigen { momentum, spin_projection, charge_sign, residual })
}

/// Result of applying the three components of `x_D`.
#[derive(Clone, Debug)]
pub struct XDiracApplied {
    pub components: [WaveFunctionK; 3],
    /// Fraction of the norm sitting on the outer position shell or the
    /// Nyquist momentum shell; large values mean the spectral derivative aliases.
    pub edge_weight: f64,
}

impl XDiracApplied {
    pub fn is_localized(&self, tol: f64) -> bool {
        self.edge_weight <= tol
    }
}

/// Fraction of the norm on the outermost position and momentum planes.
pub fn edge_weight(state: &WaveFunctionK) -> f64 {
    let g = &state.grid;
    let n = g.len();
    let on_edge = |i: usize| {
        let idx = g.unravel(i);
        (0..3).any(|a| idx[a] == g.n[a] / 2)
    };
    let total = state.norm_sqr() / g.dk3();
    let kedge: f64 = (0..n).filter(|&i| on_edge(i)).map(|i| (0..state.ncomp).map(|c| state.data[c * n + i].norm_sqr()).sum::<f64>()).sum();
    let f = to_position(state);
    let xtotal = f.norm_sqr() / g.dx3();
    let xedge: f64 = (0..n).filter(|&i| on_edge(i)).map(|i| (0..f.ncomp).map(|c| f.data[c * n + i].norm_sqr()).sum::<f64>()).sum();
    (kedge / total).max(xedge / xtotal)
}

/// `x_D = x + (matrix part)` on a Dirac-representation state.
pub fn x_dirac_apply(state: &WaveFunctionK) -> Result<XDiracApplied, FieldError> {
    state.require(StateRep::Dirac)?;
    let half = state.half()?;
    if half % 2 != 0 {
        return Err(FieldError::OddMultiplicity(half));
    }
    let m = state.grid.mass;
    if !(m > 0.0) {
        return Err(FieldError::NonPositiveMass(m));
    }
    let parts: Vec<[ComplexMatrix; 3]> = (0..state.nodes())
        .into_par_iter()
        .map(|i| x_dirac_matrix_part(state.grid.node_k(i), m, half))
        .collect::<Result<_, _>>()?;
    let components = [0usize, 1, 2].map(|a| {
        let x = apply_position(state, a);
        let mp = state.map_spinors(|i, s| parts[i][a].apply(s));
        x.add(&mp)
    });
    Ok(XDiracApplied { components, edge_weight: edge_weight(state) })
}

/// `<ψ, x_D ψ> / <ψ, ψ>` per component.
pub fn mean_x_dirac(state: &WaveFunctionK) -> Result<[C64; 3], FieldError> {
    let applied = x_dirac_apply(state)?;
    let norm = state.norm_sqr();
    Ok([0, 1, 2].map(|a| state.inner(&applied.components[a]) / norm))
}

/// `<a, b>` of two spinors (re-exported for callers building custom checks).
pub fn spinor_dot(a: &[C64], b: &[C64]) -> C64 {
    vec_dot(a, b)
}
