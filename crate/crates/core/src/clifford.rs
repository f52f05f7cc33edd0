//! Clifford-Dirac generator families in dimension 2N and their relation tables.
//!
//! Three families are provided:
//!
//! * standard: `Γ⁰ = diag(I, -I)`, `Γʲ = [[0, Σʲ], [-Σʲ, 0]]`, `Γ⁴ = Γ⁰Γ¹Γ²Γ³`,
//!   with `Σʲ = I_{N/2} ⊗ σʲ`;
//! * extended: seven generators including two Ĉ-bearing ones, either in the
//!   tilde form with signature `(++++---)` or in the anti-Hermitian form;
//! * rcqm: the barred generators obtained by conjugating with `v = diag(I, Ĉ)`.
//!
//! Generator indices follow the usual labels, so `Γ⁰` sits at index 0 in the
//! standard set while the extended set starts at `Γ¹`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{al_compose, kron, pauli, AntilinearOperator, ComplexMatrix, RealLinearOperator, C64, I, ONE};
use crate::report::RelationReport;

pub const TABLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("unsupported dimension: N = {0} (N must be even with 2 <= N <= 8)")]
    UnsupportedDimension(usize),
    #[error("generator table {target:?} cannot be built from a {rep:?} set")]
    WrongRepresentation { target: SoTarget, rep: GammaRepresentation },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRepresentation {
    Standard,
    Extended,
    Rcqm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtendedForm {
    Tilde,
    AntiHermitian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    /// Conventional upper index (0..=7).
    pub index: usize,
    pub label: String,
    pub op: AntilinearOperator,
}

/// A subset of generators obeying `{Γᵃ, Γᵇ} = 2 gᵃᵇ I` with diagonal metric.
#[derive(Clone, Debug, PartialEq)]
pub struct AnticommutationTable {
    pub anchor: &'static str,
    /// Generator indices participating in the table.
    pub members: Vec<usize>,
    /// Diagonal metric entry per member.
    pub metric: Vec<f64>,
}

/// An ordered product of generators expected to equal a fixed operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductIdentity {
    pub anchor: &'static str,
    pub label: String,
    pub factors: Vec<usize>,
    pub expected: AntilinearOperator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSet {
    pub n: usize,
    pub representation: GammaRepresentation,
    pub form: Option<ExtendedForm>,
    pub generators: Vec<Generator>,
    pub tables: Vec<AnticommutationTable>,
    pub identities: Vec<ProductIdentity>,
}

impl GammaSet {
    /// Matrix dimension `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Generator with conventional index `index`. Panics if absent.
    pub fn get(&self, index: usize) -> &AntilinearOperator {
        &self
            .generators
            .iter()
            .find(|g| g.index == index)
            .unwrap_or_else(|| panic!("generator {index} not in {:?} set", self.representation))
            .op
    }

    pub fn try_get(&self, index: usize) -> Option<&AntilinearOperator> {
        self.generators.iter().find(|g| g.index == index).map(|g| &g.op)
    }

    /// Replaces one generator, keeping tables and identities (used to probe
    /// that the verifier notices broken sets).
    pub fn with_replaced(&self, index: usize, op: AntilinearOperator) -> Self {
        let mut out = self.clone();
        for g in &mut out.generators {
            if g.index == index {
                g.op = op.clone();
            }
        }
        out
    }

    /// Product `Γ^{a1} Γ^{a2} ...` in the given order.
    pub fn product(&self, factors: &[usize]) -> AntilinearOperator {
        let mut acc = AntilinearOperator::identity(self.dim());
        for &f in factors {
            acc = acc.compose(self.get(f));
        }
        acc
    }
}

fn check_n(n: usize) -> Result<(), CliffordError> {
    if n < 2 || n % 2 != 0 || 2 * n > 16 {
        return Err(CliffordError::UnsupportedDimension(n));
    }
    Ok(())
}

/// `Σʲ = I_{N/2} ⊗ σʲ` for an even N.
pub fn sigma_n(n: usize) -> [ComplexMatrix; 3] {
    let id = ComplexMatrix::identity(n / 2);
    pauli().map(|s| kron(&id, &s))
}

/// Raw matrices `[Γ⁰, Γ¹, Γ², Γ³, Γ⁴]` of the standard family.
pub fn standard_matrices(n: usize) -> Result<[ComplexMatrix; 5], CliffordError> {
    check_n(n)?;
    let id = ComplexMatrix::identity(n);
    let g0 = ComplexMatrix::block_diag(&id, &-&id);
    let [s1, s2, s3] = sigma_n(n);
    let gj = |s: &ComplexMatrix| ComplexMatrix::block_offdiag(s, &-s);
    let (g1, g2, g3) = (gj(&s1), gj(&s2), gj(&s3));
    let g4 = &(&(&g0 * &g1) * &g2) * &g3;
    Ok([g0, g1, g2, g3, g4])
}

fn gen(index: usize, label: &str, op: AntilinearOperator) -> Generator {
    Generator { index, label: label.to_string(), op }
}

pub fn build_standard_gammas(n: usize) -> Result<GammaSet, CliffordError> {
    let m = standard_matrices(n)?;
    let dim = 2 * n;
    let generators = m
        .iter()
        .enumerate()
        .map(|(i, g)| gen(i, &format!("Γ{i}"), AntilinearOperator::linear(g.clone())))
        .collect();
    Ok(GammaSet {
        n,
        representation: GammaRepresentation::Standard,
        form: None,
        generators,
        tables: vec![AnticommutationTable {
            anchor: "Eq.24",
            members: (0..5).collect(),
            metric: vec![1.0, -1.0, -1.0, -1.0, -1.0],
        }],
        identities: vec![ProductIdentity {
            anchor: "Eq.42",
            label: "Γ0Γ1Γ2Γ3Γ4 = -I".into(),
            factors: (0..5).collect(),
            expected: AntilinearOperator::identity(dim).scale_real(-1.0),
        }],
    })
}

pub fn build_extended_gammas(n: usize, form: ExtendedForm) -> Result<GammaSet, CliffordError> {
    let [g0, g1, g2, g3, g4] = standard_matrices(n)?;
    let dim = 2 * n;
    let id = ComplexMatrix::identity(dim);
    let lin = AntilinearOperator::linear;
    let anti = AntilinearOperator::antilinear;
    match form {
        ExtendedForm::Tilde => {
            let six = [
                lin(g1.scale(I)),
                lin(g3.scale(I)),
                anti(id.clone()),
                anti(id.scale(I)),
                lin(g0.scale(I)),
                lin(g2.scale_real(-1.0)),
            ];
            let mut seventh = AntilinearOperator::identity(dim);
            for g in &six {
                seventh = seventh.compose(g);
            }
            let mut generators: Vec<Generator> = six
                .into_iter()
                .enumerate()
                .map(|(i, op)| gen(i + 1, &format!("Γ̃{}", i + 1), op))
                .collect();
            generators.push(gen(7, "Γ̃7", seventh));
            Ok(GammaSet {
                n,
                representation: GammaRepresentation::Extended,
                form: Some(form),
                generators,
                tables: vec![AnticommutationTable {
                    anchor: "Eq.37",
                    members: (1..=7).collect(),
                    metric: vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
                }],
                // The six-fold product evaluates to -Γ⁴ in this realization.
                identities: vec![ProductIdentity {
                    anchor: "Eq.36",
                    label: "Γ̃1Γ̃2Γ̃3Γ̃4Γ̃5Γ̃6 = -Γ4".into(),
                    factors: (1..=6).collect(),
                    expected: lin(g4.scale_real(-1.0)),
                }],
            })
        }
        ExtendedForm::AntiHermitian => {
            let g13 = &g1 * &g3;
            let ops = [
                lin(g1),
                lin(g2),
                lin(g3),
                lin(g4),
                anti(g13.clone()),
                anti(g13.scale(I)),
                lin(g0.scale(I)),
            ];
            let generators = ops
                .into_iter()
                .enumerate()
                .map(|(i, op)| gen(i + 1, &format!("Γ{}", i + 1), op))
                .collect();
            Ok(GammaSet {
                n,
                representation: GammaRepresentation::Extended,
                form: Some(form),
                generators,
                tables: vec![AnticommutationTable {
                    anchor: "Eq.39",
                    members: (1..=7).collect(),
                    metric: vec![-1.0; 7],
                }],
                identities: vec![
                    ProductIdentity {
                        anchor: "Eq.43",
                        label: "Γ5Γ6 = i".into(),
                        factors: vec![5, 6],
                        expected: lin(id.scale(I)),
                    },
                    ProductIdentity {
                        anchor: "Eq.43",
                        label: "Γ1Γ2Γ3Γ4Γ5Γ6Γ7 = I".into(),
                        factors: (1..=7).collect(),
                        expected: lin(id.clone()),
                    },
                ],
            })
        }
    }
}

/// Barred generators `Γ̄⁰..Γ̄⁷` written out explicitly.
pub fn build_rcqm_gammas(n: usize) -> Result<GammaSet, CliffordError> {
    let [g0, g1, g2, g3, g4] = standard_matrices(n)?;
    let dim = 2 * n;
    let id = ComplexMatrix::identity(dim);
    let lin = AntilinearOperator::linear;
    let anti = AntilinearOperator::antilinear;
    let ops = [
        lin(g0.clone()),
        anti(g1.clone()),
        anti(&g0 * &g2),
        anti(g3.clone()),
        anti(&g0 * &g4),
        anti(&g1 * &g3),
        anti((&g2 * &g4).scale(-I)),
        lin(id.scale(I)),
    ];
    let generators = ops
        .into_iter()
        .enumerate()
        .map(|(i, op)| gen(i, &format!("Γ̄{i}"), op))
        .collect();
    Ok(GammaSet {
        n,
        representation: GammaRepresentation::Rcqm,
        form: None,
        generators,
        tables: vec![
            AnticommutationTable {
                anchor: "Eq.32",
                members: (0..5).collect(),
                metric: vec![1.0, -1.0, -1.0, -1.0, -1.0],
            },
            AnticommutationTable { anchor: "Eq.48", members: (1..=7).collect(), metric: vec![-1.0; 7] },
        ],
        identities: vec![
            ProductIdentity {
                anchor: "Eq.42",
                label: "Γ̄0Γ̄1Γ̄2Γ̄3Γ̄4 = -I".into(),
                factors: (0..5).collect(),
                expected: lin(id.scale_real(-1.0)),
            },
            ProductIdentity {
                anchor: "Eq.47",
                // v-conjugate of Γ⁵Γ⁶ = i: the conjugation flips i on the lower half.
                label: "Γ̄5Γ̄6 = iΓ̄0".into(),
                factors: vec![5, 6],
                expected: lin(g0.scale(I)),
            },
            ProductIdentity {
                anchor: "Eq.47",
                label: "Γ̄1Γ̄2Γ̄3Γ̄4Γ̄5Γ̄6Γ̄7 = I".into(),
                factors: (1..=7).collect(),
                expected: lin(id.clone()),
            },
        ],
    })
}

/// Checks every anticommutator of every table and every product identity.
pub fn verify_clifford_relations(set: &GammaSet) -> RelationReport {
    let form = match set.form {
        Some(ExtendedForm::Tilde) => " tilde",
        Some(ExtendedForm::AntiHermitian) => " anti-hermitian",
        None => "",
    };
    let name = format!("clifford {:?}{form} 2N={}", set.representation, set.dim());
    let anchor = set.tables.first().map_or("", |t| t.anchor);
    let mut report = RelationReport::new(name, anchor, TABLE_TOLERANCE);
    let dim = set.dim();
    for table in &set.tables {
        for (ia, &a) in table.members.iter().enumerate() {
            for (ib, &b) in table.members.iter().enumerate() {
                let (p, q) = (set.get(a), set.get(b));
                let pq = RealLinearOperator::from(&al_compose(p, q).expect("same dimension"));
                let qp = RealLinearOperator::from(&al_compose(q, p).expect("same dimension"));
                let anti = pq.add_scaled(ONE, &qp);
                let expected = if ia == ib {
                    RealLinearOperator::from(&AntilinearOperator::identity(dim).scale_real(2.0 * table.metric[ia]))
                } else {
                    RealLinearOperator::zero(dim)
                };
                report.push(format!("{{{a},{b}}}"), table.anchor, anti.max_abs_diff(&expected));
            }
        }
    }
    for id in &set.identities {
        let prod = set.product(&id.factors);
        report.push(id.label.clone(), id.anchor, prod.max_abs_diff(&id.expected));
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoTarget {
    So8,
    So6,
    Su2Pair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoGenerator {
    pub label: String,
    /// Index pair `(A, B)` with `A < B`; for the SU(2) triples `(triple, component)`.
    pub indices: (usize, usize),
    pub op: AntilinearOperator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTable {
    pub target: SoTarget,
    pub representation: GammaRepresentation,
    pub dim: usize,
    pub generators: Vec<SoGenerator>,
}

impl GeneratorTable {
    /// `s^{AB}` with antisymmetry, zero on the diagonal.
    pub fn s(&self, a: usize, b: usize) -> RealLinearOperator {
        if a == b {
            return RealLinearOperator::zero(self.dim);
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let g = self
            .generators
            .iter()
            .find(|g| g.indices == (lo, hi))
            .unwrap_or_else(|| panic!("s^({lo},{hi}) not in table"));
        RealLinearOperator::from(&g.op.scale_real(sign))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn anti_hermitian_vector(set: &GammaSet) -> Result<Vec<AntilinearOperator>, CliffordError> {
    match (set.representation, set.form) {
        (GammaRepresentation::Extended, Some(ExtendedForm::AntiHermitian)) | (GammaRepresentation::Rcqm, _) => {
            Ok((1..=7).map(|a| set.get(a).clone()).collect())
        }
        _ => Err(CliffordError::WrongRepresentation { target: SoTarget::So8, rep: set.representation }),
    }
}

fn quarter_commutator(p: &AntilinearOperator, q: &AntilinearOperator) -> AntilinearOperator {
    p.commutator(q).expect("generator products share linearity").scale_real(0.25)
}

pub fn build_so_generators(set: &GammaSet, target: SoTarget) -> Result<GeneratorTable, CliffordError> {
    let gam = anti_hermitian_vector(set).map_err(|_| CliffordError::WrongRepresentation {
        target,
        rep: set.representation,
    })?;
    let bar = if set.representation == GammaRepresentation::Rcqm { "̄" } else { "" };
    let g = |a: usize| &gam[a - 1];
    let mut generators = Vec::new();
    match target {
        SoTarget::So8 | SoTarget::So6 => {
            let top = if target == SoTarget::So8 { 8 } else { 6 };
            for a in 1..=top {
                for b in (a + 1)..=top {
                    let op = if b == 8 { g(a).scale_real(0.5) } else { quarter_commutator(g(a), g(b)) };
                    generators.push(SoGenerator { label: format!("s{bar}{a}{b}"), indices: (a, b), op });
                }
            }
        }
        SoTarget::Su2Pair => {
            let pairs = [[(2, 3), (3, 1), (1, 2)], [(5, 6), (6, 4), (4, 5)]];
            for (t, triple) in pairs.iter().enumerate() {
                for (c, &(a, b)) in triple.iter().enumerate() {
                    let op = g(a).compose(g(b)).scale_real(0.5);
                    let label = if t == 0 { format!("s{bar}{}", c + 1) } else { format!("š{bar}{}", c + 1) };
                    generators.push(SoGenerator { label, indices: (t, c), op });
                }
            }
        }
    }
    Ok(GeneratorTable { target, representation: set.representation, dim: set.dim(), generators })
}

fn commutator_rl(p: &RealLinearOperator, q: &RealLinearOperator) -> RealLinearOperator {
    let pq = p.compose(q).expect("same dimension");
    let qp = q.compose(p).expect("same dimension");
    pq.add_scaled(C64::new(-1.0, 0.0), &qp)
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

pub fn verify_so_commutations(table: &GeneratorTable) -> RelationReport {
    let name = format!("{:?} {:?} 2N={}", table.target, table.representation, table.dim);
    let anchor = if table.representation == GammaRepresentation::Rcqm { "Eq.50" } else { "Eq.41" };
    let mut report = RelationReport::new(name, anchor, TABLE_TOLERANCE);
    match table.target {
        SoTarget::So8 | SoTarget::So6 => {
            let pairs: Vec<(usize, usize)> = table.generators.iter().map(|g| g.indices).collect();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                for &(c, d) in &pairs[i..] {
                    let lhs = commutator_rl(&table.s(a, b), &table.s(c, d));
                    let mut rhs = RealLinearOperator::zero(table.dim);
                    rhs = rhs.add_scaled(C64::new(delta(a, c), 0.0), &table.s(b, d));
                    rhs = rhs.add_scaled(C64::new(delta(c, b), 0.0), &table.s(d, a));
                    rhs = rhs.add_scaled(C64::new(delta(b, d), 0.0), &table.s(a, c));
                    rhs = rhs.add_scaled(C64::new(delta(d, a), 0.0), &table.s(c, b));
                    report.push(format!("[s{a}{b},s{c}{d}]"), anchor, lhs.max_abs_diff(&rhs));
                }
            }
        }
        SoTarget::Su2Pair => {
            let anchor = if table.representation == GammaRepresentation::Rcqm { "Eq.53" } else { "Eq.45" };
            let op = |t: usize, c: usize| {
                RealLinearOperator::from(&table.generators.iter().find(|g| g.indices == (t, c)).expect("triple").op)
            };
            for t in 0..2 {
                for c in 0..3 {
                    let lhs = commutator_rl(&op(t, c), &op(t, (c + 1) % 3));
                    let label = format!("triple{t} [s{},s{}]=s{}", c + 1, (c + 1) % 3 + 1, (c + 2) % 3 + 1);
                    report.push(label, anchor, lhs.max_abs_diff(&op(t, (c + 2) % 3)));
                }
            }
            for a in 0..3 {
                for b in 0..3 {
                    let lhs = commutator_rl(&op(0, a), &op(1, b));
                    report.push(format!("[s{},š{}]=0", a + 1, b + 1), "Eq.54", lhs.max_abs_diff(&RealLinearOperator::zero(table.dim)));
                }
            }
        }
    }
    report
}

/// Checks `[G, op] = 0` (or `≠ 0` where `expect_commute` is false) for every
/// generator of a table.
pub fn verify_commutes_with(
    table: &GeneratorTable,
    op: &AntilinearOperator,
    anchor: &str,
    expect_commute: impl Fn(&SoGenerator) -> bool,
) -> RelationReport {
    let mut report = RelationReport::new(format!("{:?} invariance", table.target), anchor, TABLE_TOLERANCE);
    let h = RealLinearOperator::from(op);
    let zero = RealLinearOperator::zero(table.dim);
    for g in &table.generators {
        let c = commutator_rl(&RealLinearOperator::from(&g.op), &h).max_abs_diff(&zero);
        if expect_commute(g) {
            report.push(format!("[{}, H]=0", g.label), anchor, c);
        } else {
            report.push_at_least(format!("[{}, H]!=0", g.label), anchor, c, 0.5);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    #[test]
    fn dirac_representation_at_n2() {
        let [g0, g1, g2, g3, _] = standard_matrices(2).unwrap();
        assert_eq!(g0, ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));
        let expect_g2 = ComplexMatrix::from_rows(&[
            vec![ZERO, ZERO, ZERO, -I],
            vec![ZERO, ZERO, I, ZERO],
            vec![ZERO, I, ZERO, ZERO],
            vec![-I, ZERO, ZERO, ZERO],
        ]);
        assert_eq!(g2, expect_g2);
        assert!(g1.max_abs_diff(&-&g1.adjoint()) == 0.0);
        assert!(g3.max_abs_diff(&-&g3.adjoint()) == 0.0);
    }

    #[test]
    fn odd_or_large_n_rejected() {
        for n in [0, 1, 3, 9, 10] {
            assert_eq!(build_standard_gammas(n).unwrap_err(), CliffordError::UnsupportedDimension(n));
        }
    }

    #[test]
    fn tilde_first_generator_squares_to_plus_one() {
        let set = build_extended_gammas(2, ExtendedForm::Tilde).unwrap();
        let sq = set.get(1).compose(set.get(1));
        assert!(sq.max_abs_diff(&AntilinearOperator::identity(4)) < 1e-15);
    }

    #[test]
    fn standard_table_passes_and_corruption_fails() {
        let set = build_standard_gammas(2).unwrap();
        let rep = verify_clifford_relations(&set);
        assert_eq!(rep.entries.len(), 26);
        assert!(rep.passed());
        assert_eq!(rep.max_residual(), 0.0);
        let g1 = set.get(1);
        let bad = AntilinearOperator::linear(&g1.matrix + &ComplexMatrix::identity(4).scale_real(0.1));
        let rep = verify_clifford_relations(&set.with_replaced(1, bad));
        assert!(rep.entries.iter().any(|e| e.label == "{1,1}" && !e.pass));
    }

    #[test]
    fn wrong_representation_for_so() {
        let set = build_standard_gammas(2).unwrap();
        assert!(build_so_generators(&set, SoTarget::So8).is_err());
        let tilde = build_extended_gammas(2, ExtendedForm::Tilde).unwrap();
        assert!(build_so_generators(&tilde, SoTarget::So6).is_err());
    }

    #[test]
    fn so8_sizes() {
        let set = build_extended_gammas(2, ExtendedForm::AntiHermitian).unwrap();
        assert_eq!(build_so_generators(&set, SoTarget::So8).unwrap().len(), 28);
        assert_eq!(build_so_generators(&set, SoTarget::So6).unwrap().len(), 15);
        assert_eq!(build_so_generators(&set, SoTarget::Su2Pair).unwrap().len(), 6);
    }

    #[test]
    fn s12_s23_gives_s31() {
        let set = build_extended_gammas(4, ExtendedForm::AntiHermitian).unwrap();
        let t = build_so_generators(&set, SoTarget::So8).unwrap();
        let lhs = commutator_rl(&t.s(1, 2), &t.s(2, 3));
        assert!(lhs.max_abs_diff(&t.s(3, 1)) < 1e-15);
        let lhs = commutator_rl(&t.s(1, 2), &t.s(3, 4));
        assert_eq!(lhs.max_abs_diff(&RealLinearOperator::zero(8)), 0.0);
    }
}
