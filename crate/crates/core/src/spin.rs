//! SU(2) spin matrices for arbitrary spin, the particle-antiparticle doublet,
//! and the charge-sign operator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::clifford::{GammaRepresentation, GammaSet};
use crate::linalg::{AntilinearOperator, ComplexMatrix, C64, I};
use crate::report::RelationReport;

pub const SPIN_TOLERANCE: f64 = 1e-13;

/// Largest supported `2s`.
pub const MAX_TWICE_SPIN: u32 = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("unsupported spin {0}: expected a half-integer between 0 and 7/2")]
    Unsupported(String),
}

/// A non-negative half-integer stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self, SpinError> {
        if twice > MAX_TWICE_SPIN {
            return Err(SpinError::Unsupported(Self { twice }.to_string()));
        }
        Ok(Self { twice })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// Multiplicity `N = 2s + 1`.
    pub fn multiplicity(self) -> usize {
        self.twice as usize + 1
    }

    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    pub fn is_even_multiplicity(self) -> bool {
        self.multiplicity() % 2 == 0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = SpinError;

    /// Accepts `"3/2"`, `"1"`, `"1.5"`.
    fn from_str(s: &str) -> Result<Self, SpinError> {
        let bad = || SpinError::Unsupported(s.to_string());
        let t = s.trim();
        let twice = if let Some((num, den)) = t.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => num,
                "1" => 2 * num,
                _ => return Err(bad()),
            }
        } else {
            let v: f64 = t.parse().map_err(|_| bad())?;
            let tw = 2.0 * v;
            if !(tw >= 0.0) || tw.fract() != 0.0 || tw > 1e6 {
                return Err(bad());
            }
            tw as u32
        };
        Spin::from_twice(twice).map_err(|_| bad())
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let text = match Raw::deserialize(de)? {
            Raw::Text(t) => t,
            Raw::Number(v) => v.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Condon-Shortley matrices `(s¹, s², s³)` for spin `s`, basis ordered by
/// descending projection `s, s-1, ..., -s`.
pub fn su2_irrep(s: Spin) -> [ComplexMatrix; 3] {
    let n = s.multiplicity();
    let j = s.value();
    let m = |i: usize| j - i as f64;
    // <m+1| s⁺ |m> sits at (i-1, i).
    let ladder = |i: usize| (j * (j + 1.0) - m(i) * (m(i) + 1.0)).max(0.0).sqrt();
    let splus = ComplexMatrix::from_fn(n, n, |r, c| if c == r + 1 { C64::new(ladder(c), 0.0) } else { C64::new(0.0, 0.0) });
    let sminus = splus.adjoint();
    let s1 = (&splus + &sminus).scale_real(0.5);
    let s2 = (&splus - &sminus).scale(C64::new(0.0, -0.5));
    let s3 = ComplexMatrix::diag_real(&(0..n).map(m).collect::<Vec<_>>());
    [s1, s2, s3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubletForm {
    Rcqm,
    Fw,
}

/// Doublet spin: `diag(s, -conj(s))` in RCQM form, `diag(s, s)` in FW form.
pub fn doublet_spin(s: Spin, form: DoubletForm) -> [ComplexMatrix; 3] {
    su2_irrep(s).map(|m| match form {
        DoubletForm::Rcqm => ComplexMatrix::block_diag(&m, &-&m.conj()),
        DoubletForm::Fw => ComplexMatrix::block_diag(&m, &m),
    })
}

/// `(i/2)(Γ²Γ³, Γ³Γ¹, Γ¹Γ²)` from a standard or barred set.
pub fn gamma_spin(set: &GammaSet) -> [AntilinearOperator; 3] {
    assert!(
        matches!(set.representation, GammaRepresentation::Standard | GammaRepresentation::Rcqm),
        "gamma_spin expects a standard or rcqm set"
    );
    let half_i = C64::new(0.0, 0.5);
    [(2, 3), (3, 1), (1, 2)].map(|(a, b)| set.get(a).compose(set.get(b)).scale(half_i))
}

/// Charge sign `g = -Γ⁰ = diag(-I, I)`.
pub fn charge_sign(n: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(n);
    ComplexMatrix::block_diag(&-&id, &id)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinSystem {
    pub s: Spin,
    pub n: usize,
    pub singlet: [ComplexMatrix; 3],
    pub doublet_rcqm: [ComplexMatrix; 3],
    pub doublet_fw: [ComplexMatrix; 3],
    pub charge_sign: ComplexMatrix,
    pub casimir: f64,
}

impl SpinSystem {
    pub fn new(s: Spin) -> Self {
        let n = s.multiplicity();
        Self {
            s,
            n,
            singlet: su2_irrep(s),
            doublet_rcqm: doublet_spin(s, DoubletForm::Rcqm),
            doublet_fw: doublet_spin(s, DoubletForm::Fw),
            charge_sign: charge_sign(n),
            casimir: s.casimir(),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn doublet(&self, form: DoubletForm) -> &[ComplexMatrix; 3] {
        match form {
            DoubletForm::Rcqm => &self.doublet_rcqm,
            DoubletForm::Fw => &self.doublet_fw,
        }
    }

    /// Antisymmetric components `s^{ln}`: `s^{23} = s¹`, `s^{31} = s²`, `s^{12} = s³`.
    pub fn tensor(&self, form: DoubletForm, l: usize, n: usize) -> ComplexMatrix {
        spin_tensor(self.doublet(form), l, n)
    }

    /// Eigenvalue of `s³` on the Cartesian ort `d_a` (0-based) in RCQM form.
    pub fn rcqm_projection(&self, a: usize) -> f64 {
        let j = self.s.value();
        if a < self.n {
            j - a as f64
        } else {
            -(j - (a - self.n) as f64)
        }
    }
}

/// `s^{ln}` for spatial indices 1..=3 from a spin vector.
pub fn spin_tensor(s: &[ComplexMatrix; 3], l: usize, n: usize) -> ComplexMatrix {
    let dim = s[0].rows();
    match (l, n) {
        (2, 3) => s[0].clone(),
        (3, 1) => s[1].clone(),
        (1, 2) => s[2].clone(),
        (3, 2) => -&s[0],
        (1, 3) => -&s[1],
        (2, 1) => -&s[2],
        _ => ComplexMatrix::zeros(dim, dim),
    }
}

fn su2_checks(report: &mut RelationReport, s: &[ComplexMatrix; 3], casimir: f64, anchor_comm: &str, anchor_cas: &str, tag: &str) {
    let dim = s[0].rows();
    for j in 0..3 {
        let l = (j + 1) % 3;
        let n = (j + 2) % 3;
        let lhs = s[j].commutator(&s[l]);
        let rhs = s[n].scale(I);
        report.push(format!("{tag} [s{},s{}]=is{}", j + 1, l + 1, n + 1), anchor_comm, lhs.max_abs_diff(&rhs));
        report.push(format!("{tag} s{} hermitian", j + 1), anchor_comm, s[j].max_abs_diff(&s[j].adjoint()));
    }
    let sq = &(&(&s[0] * &s[0]) + &(&s[1] * &s[1])) + &(&s[2] * &s[2]);
    let expect = ComplexMatrix::identity(dim).scale_real(casimir);
    report.push(format!("{tag} s²=s(s+1)I"), anchor_cas, sq.max_abs_diff(&expect));
}

pub fn verify_spin_algebra(sys: &SpinSystem) -> RelationReport {
    let mut report = RelationReport::new(format!("spin s={}", sys.s), "Eq.16", SPIN_TOLERANCE);
    su2_checks(&mut report, &sys.singlet, sys.casimir, "Eq.18", "Eq.19", "singlet");
    su2_checks(&mut report, &sys.doublet_rcqm, sys.casimir, "Eq.16", "Eq.17", "rcqm");
    su2_checks(&mut report, &sys.doublet_fw, sys.casimir, "Eq.16", "Eq.17", "fw");
    let dim = sys.dim();
    let g = &sys.charge_sign;
    report.push("g²=I", "Eq.15", (g * g).max_abs_diff(&ComplexMatrix::identity(dim)));
    for (j, s) in sys.doublet_rcqm.iter().enumerate() {
        report.push(format!("[g,s{}]=0", j + 1), "Eq.15", g.commutator(s).max_abs());
    }
    for a in 0..dim {
        let mut d = vec![C64::new(0.0, 0.0); dim];
        d[a] = C64::new(1.0, 0.0);
        let sign = if a < sys.n { -1.0 } else { 1.0 };
        let gd = g.apply(&d);
        let res = gd.iter().zip(&d).fold(0.0f64, |m, (x, y)| m.max((x - y * sign).norm()));
        report.push(format!("g d{} = {:+} d{}", a + 1, sign, a + 1), "Eq.65", res);
        let s3d = sys.doublet_rcqm[2].apply(&d);
        let lam = sys.rcqm_projection(a);
        let res = s3d.iter().zip(&d).fold(0.0f64, |m, (x, y)| m.max((x - y * lam).norm()));
        report.push(format!("s3 d{} = {} d{}", a + 1, lam, a + 1), "Eq.64", res);
    }
    report
}
