//! Dense complex matrices and the antilinear operator calculus.
//!
//! An operator carrying complex conjugation is stored as a matrix plus a flag:
//! `(M, true)` acts as `v -> M * conj(v)`. Operators that are linear on one
//! block and antilinear on another (the RCQM/FW bridge) are held by
//! [`RealLinearOperator`], which keeps the two parts separately.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("operation requires a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("cannot add a linear and an antilinear operator")]
    MixedLinearity,
}

/// Row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>7.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if rows * cols != data.len() {
            return Err(LinalgError::EntryCount { rows, cols, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |r, c| rows[r][c])
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(entries[r], 0.0) } else { ZERO })
    }

    /// Assembles `[[a, b], [c, d]]` from four square blocks of equal size.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        assert!(
            [a, b, c, d].iter().all(|m| m.rows == n && m.cols == n),
            "block2 expects equal square blocks"
        );
        Self::from_fn(2 * n, 2 * n, |r, col| {
            let blk = match (r < n, col < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(r % n, col % n)]
        })
    }

    /// `diag(a, b)` for two square blocks.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let z = Self::zeros(a.rows, a.cols);
        Self::block2(a, &z, &z, b)
    }

    /// `[[0, a], [b, 0]]`.
    pub fn block_offdiag(a: &Self, b: &Self) -> Self {
        let z = Self::zeros(a.rows, a.cols);
        Self::block2(&z, a, b, &z)
    }

    /// Extracts the `n x n` block starting at `(r0, c0)`.
    pub fn sub_block(&self, r0: usize, c0: usize, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch { op: "mul", left: self.dim(), right: rhs.dim() });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self, LinalgError> {
        if self.dim() != rhs.dim() {
            return Err(LinalgError::DimensionMismatch { op, left: self.dim(), right: rhs.dim() });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| f(*z)).collect() }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| c * z)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `AB - BA`. Panics on dimension mismatch.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    /// `AB + BA`. Panics on dimension mismatch.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &(self * rhs) + &(rhs * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest elementwise modulus of `self - rhs`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        if self.dim() != rhs.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn try_apply(&self, v: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { op: "apply", left: self.dim(), right: (v.len(), 1) });
        }
        Ok(self.apply(v))
    }

    /// Spectral norm estimate via the largest singular value (Hermitian square of `self`).
    pub fn operator_norm(&self) -> f64 {
        let g = &self.adjoint() * self;
        let (vals, _) = hermitian_eigh(&g).expect("Gram matrix is square");
        vals.iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Kronecker product; `kron(a, b)[(i*p + k, j*q + l)] = a[(i, j)] * b[(k, l)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = b.dim();
    ComplexMatrix::from_fn(a.rows * p, a.cols * q, |r, c| a[(r / p, c / q)] * b[(r % p, c % q)])
}

/// Pauli matrices `(sigma1, sigma2, sigma3)`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let s1 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let s2 = ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]);
    let s3 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    [s1, s2, s3]
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matrix whose columns are the corresponding orthonormal eigenvectors.
pub fn hermitian_eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    // Symmetrize so tiny rounding asymmetry does not leak into the solver.
    let h = nalgebra::DMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)] + m[(c, r)].conj()));
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

/// `exp(-i t H)` for Hermitian `H` through its eigen-decomposition.
pub fn hermitian_propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, LinalgError> {
    let (vals, vecs) = hermitian_eigh(h)?;
    let phases: Vec<C64> = vals.iter().map(|&e| C64::from_polar(1.0, -e * t)).collect();
    Ok(&(&vecs * &ComplexMatrix::diag(&phases)) * &vecs.adjoint())
}

/// Fixed-order pairwise summation (bit-reproducible for a given length).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_c(xs: &[C64]) -> C64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a, b>` antilinear in the first slot.
pub fn vec_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Matrix with a complex-conjugation flag.
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOperator {
    pub matrix: ComplexMatrix,
    pub conjugates: bool,
}

impl AntilinearOperator {
    pub fn new(matrix: ComplexMatrix, conjugates: bool) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare(matrix.rows, matrix.cols));
        }
        if !matrix.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { matrix, conjugates })
    }

    pub fn linear(matrix: ComplexMatrix) -> Self {
        assert!(matrix.is_square(), "operators are square");
        Self { matrix, conjugates: false }
    }

    pub fn antilinear(matrix: ComplexMatrix) -> Self {
        assert!(matrix.is_square(), "operators are square");
        Self { matrix, conjugates: true }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(ComplexMatrix::identity(n))
    }

    /// Plain complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self::antilinear(ComplexMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_linear(&self) -> bool {
        !self.conjugates
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        al_apply(self, v).expect("operator application")
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        al_compose(self, rhs).expect("operator composition")
    }

    /// Left multiplication by a scalar: `c * T`.
    pub fn scale(&self, c: C64) -> Self {
        Self { matrix: self.matrix.scale(c), conjugates: self.conjugates }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self { matrix: self.matrix.scale_real(c), conjugates: self.conjugates }
    }

    fn combine(&self, rhs: &Self, sign: f64) -> Result<Self, LinalgError> {
        if self.dim() != rhs.dim() {
            return Err(LinalgError::DimensionMismatch {
                op: "operator sum",
                left: self.matrix.dim(),
                right: rhs.matrix.dim(),
            });
        }
        // A zero operator is both linear and antilinear.
        let conjugates = if self.matrix.max_abs() == 0.0 {
            rhs.conjugates
        } else if rhs.matrix.max_abs() == 0.0 || self.conjugates == rhs.conjugates {
            self.conjugates
        } else {
            return Err(LinalgError::MixedLinearity);
        };
        let matrix = self.matrix.zip_with(&rhs.matrix, "operator sum", |a, b| a + sign * b)?;
        Ok(Self { matrix, conjugates })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.combine(rhs, 1.0)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.combine(rhs, -1.0)
    }

    /// `PQ - QP`; errors if the two products differ in linearity.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, LinalgError> {
        al_compose(self, rhs)?.try_sub(&al_compose(rhs, self)?)
    }

    pub fn anticommutator(&self, rhs: &Self) -> Result<Self, LinalgError> {
        al_compose(self, rhs)?.try_add(&al_compose(rhs, self)?)
    }

    /// Adjoint with respect to the real part of the inner product.
    /// For `M*C` this is `C*M^dagger = M^T*C`.
    pub fn adjoint(&self) -> Self {
        if self.conjugates {
            Self::antilinear(self.matrix.transpose())
        } else {
            Self::linear(self.matrix.adjoint())
        }
    }

    /// Distance between operators; a linear and an antilinear operator agree
    /// only when both vanish.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        if self.conjugates == rhs.conjugates {
            self.matrix.max_abs_diff(&rhs.matrix)
        } else {
            self.matrix.max_abs().max(rhs.matrix.max_abs())
        }
    }
}

/// `p ∘ q`: matrix `P Q` (or `P conj(Q)` when `p` conjugates), flag XOR.
pub fn al_compose(p: &AntilinearOperator, q: &AntilinearOperator) -> Result<AntilinearOperator, LinalgError> {
    if p.dim() != q.dim() {
        return Err(LinalgError::DimensionMismatch { op: "compose", left: p.matrix.dim(), right: q.matrix.dim() });
    }
    let rhs = if p.conjugates { q.matrix.conj() } else { q.matrix.clone() };
    Ok(AntilinearOperator { matrix: p.matrix.try_mul(&rhs)?, conjugates: p.conjugates ^ q.conjugates })
}

pub fn al_apply(p: &AntilinearOperator, v: &[C64]) -> Result<Vec<C64>, LinalgError> {
    if p.conjugates {
        let cv: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        p.matrix.try_apply(&cv)
    } else {
        p.matrix.try_apply(v)
    }
}

/// Real-linear operator `v -> L v + A conj(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLinearOperator {
    pub linear: ComplexMatrix,
    pub antilinear: ComplexMatrix,
}

impl RealLinearOperator {
    pub fn new(linear: ComplexMatrix, antilinear: ComplexMatrix) -> Result<Self, LinalgError> {
        if linear.dim() != antilinear.dim() {
            return Err(LinalgError::DimensionMismatch { op: "real-linear", left: linear.dim(), right: antilinear.dim() });
        }
        if !linear.is_square() {
            return Err(LinalgError::NotSquare(linear.rows, linear.cols));
        }
        Ok(Self { linear, antilinear })
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let cv: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        let a = self.linear.apply(v);
        let b = self.antilinear.apply(&cv);
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    }

    /// `(L1 + A1 C)(L2 + A2 C) = (L1 L2 + A1 conj(A2)) + (L1 A2 + A1 conj(L2)) C`.
    pub fn compose(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.dim() != rhs.dim() {
            return Err(LinalgError::DimensionMismatch {
                op: "compose",
                left: self.linear.dim(),
                right: rhs.linear.dim(),
            });
        }
        let lin = self.linear.try_mul(&rhs.linear)?.try_add(&self.antilinear.try_mul(&rhs.antilinear.conj())?)?;
        let anti = self.linear.try_mul(&rhs.antilinear)?.try_add(&self.antilinear.try_mul(&rhs.linear.conj())?)?;
        Ok(Self { linear: lin, antilinear: anti })
    }

    pub fn zero(n: usize) -> Self {
        Self { linear: ComplexMatrix::zeros(n, n), antilinear: ComplexMatrix::zeros(n, n) }
    }

    /// `self + c * rhs`. Panics on dimension mismatch.
    pub fn add_scaled(&self, c: C64, rhs: &Self) -> Self {
        Self {
            linear: &self.linear + &rhs.linear.scale(c),
            antilinear: &self.antilinear + &rhs.antilinear.scale(c),
        }
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.linear.max_abs_diff(&rhs.linear).max(self.antilinear.max_abs_diff(&rhs.antilinear))
    }

    /// Returns the purely linear or purely antilinear form if one part
    /// vanishes to within `tol`.
    pub fn to_antilinear(&self, tol: f64) -> Option<AntilinearOperator> {
        let l = self.linear.max_abs();
        let a = self.antilinear.max_abs();
        if a <= tol {
            Some(AntilinearOperator::linear(self.linear.clone()))
        } else if l <= tol {
            Some(AntilinearOperator::antilinear(self.antilinear.clone()))
        } else {
            None
        }
    }
}

impl From<&AntilinearOperator> for RealLinearOperator {
    fn from(op: &AntilinearOperator) -> Self {
        let n = op.dim();
        if op.conjugates {
            Self { linear: ComplexMatrix::zeros(n, n), antilinear: op.matrix.clone() }
        } else {
            Self { linear: op.matrix.clone(), antilinear: ComplexMatrix::zeros(n, n) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_known_products() {
        let [s1, _, s3] = pauli();
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(kron(&s3, &s3), ComplexMatrix::diag_real(&[1.0, -1.0, -1.0, 1.0]));
        let sig1_4 = kron(&i2, &s1);
        let expect = ComplexMatrix::block_diag(&s1, &s1);
        assert_eq!(sig1_4, expect);
    }

    #[test]
    fn conjugation_squares_to_identity() {
        let c = AntilinearOperator::conjugation(3);
        let cc = al_compose(&c, &c).unwrap();
        assert!(!cc.conjugates);
        assert_eq!(cc.matrix, ComplexMatrix::identity(3));
        assert_eq!(c.apply(&[I, ZERO, ZERO]), vec![-I, ZERO, ZERO]);
    }

    #[test]
    fn linear_then_conjugation() {
        let [_, s2, _] = pauli();
        let p = AntilinearOperator::linear(s2.clone());
        let q = AntilinearOperator::conjugation(2);
        let v = [C64::new(0.3, -1.2), C64::new(2.0, 0.5)];
        let lhs = al_compose(&p, &q).unwrap().apply(&v);
        let rhs = s2.apply(&[v[0].conj(), v[1].conj()]);
        assert!(vec_max_abs_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn sigma1_swaps() {
        let [s1, _, _] = pauli();
        let out = AntilinearOperator::linear(s1).apply(&[ONE, ZERO]);
        assert_eq!(out, vec![ZERO, ONE]);
    }

    #[test]
    fn dimension_errors() {
        let a = AntilinearOperator::identity(2);
        let b = AntilinearOperator::identity(3);
        assert!(al_compose(&a, &b).is_err());
        assert!(al_apply(&a, &[ONE]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn mixed_sum_rejected() {
        let a = AntilinearOperator::identity(2);
        let b = AntilinearOperator::conjugation(2);
        assert_eq!(a.try_add(&b), Err(LinalgError::MixedLinearity));
        let z = AntilinearOperator::linear(ComplexMatrix::zeros(2, 2));
        assert!(z.try_add(&b).unwrap().conjugates);
    }

    #[test]
    fn eigh_of_pauli_y() {
        let [_, s2, _] = pauli();
        let (vals, vecs) = hermitian_eigh(&s2).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let recon = &(&vecs * &ComplexMatrix::diag_real(&vals)) * &vecs.adjoint();
        assert!(recon.max_abs_diff(&s2) < 1e-14);
    }

    #[test]
    fn antilinear_adjoint_is_transpose() {
        let m = ComplexMatrix::from_rows(&[vec![ONE, I], vec![C64::new(2.0, 1.0), ZERO]]);
        let t = AntilinearOperator::antilinear(m.clone());
        assert_eq!(t.adjoint().matrix, m.transpose());
        // <x, T y> real part equals <T^dagger x, y> real part.
        let x = [C64::new(0.2, 0.7), C64::new(-1.0, 0.4)];
        let y = [C64::new(1.1, -0.3), C64::new(0.5, 0.9)];
        let lhs = vec_dot(&x, &t.apply(&y)).re;
        let rhs = vec_dot(&t.adjoint().apply(&x), &y).re;
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn real_linear_round_trip() {
        let n = 2;
        let v = RealLinearOperator::new(
            ComplexMatrix::diag_real(&[1.0, 0.0]),
            ComplexMatrix::diag_real(&[0.0, 1.0]),
        )
        .unwrap();
        let vv = v.compose(&v).unwrap();
        assert_eq!(vv.to_antilinear(0.0).unwrap(), AntilinearOperator::identity(n));
        let x = [C64::new(0.3, 0.4), C64::new(-0.2, 1.5)];
        assert_eq!(v.apply(&x), vec![x[0], x[1].conj()]);
    }
}
