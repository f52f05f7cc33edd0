//! Second-order Taylor jets in three variables.
//!
//! A jet stores a value, gradient and Hessian at one point together with the
//! highest order that is still exact. Differentiation lowers that order by
//! one, so composing two first-order differential operators on an order-2 jet
//! yields an exact value.

use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::C64;

const Z: C64 = C64::new(0.0, 0.0);

/// Symmetric index pairs in storage order.
const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

pub fn hidx(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => panic!("jet index out of range"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub g: [C64; 3],
    pub h: [C64; 6],
    /// Highest exact derivative order (0..=2).
    pub order: u8,
}

impl Jet {
    pub fn constant(v: C64) -> Self {
        Self { v, g: [Z; 3], h: [Z; 6], order: 2 }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    /// The coordinate `k_axis` evaluated at `value`.
    pub fn variable(value: f64, axis: usize) -> Self {
        let mut j = Self::real(value);
        j.g[axis] = C64::new(1.0, 0.0);
        j
    }

    pub fn is_zero(&self) -> bool {
        self.v == Z && self.g.iter().all(|x| *x == Z) && self.h.iter().all(|x| *x == Z)
    }

    pub fn scale(self, c: C64) -> Self {
        Self { v: self.v * c, g: self.g.map(|x| x * c), h: self.h.map(|x| x * c), order: self.order }
    }

    pub fn scale_real(self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Applies `φ` given `φ(v), φ'(v), φ''(v)` (chain rule to second order).
    fn compose(self, f0: C64, f1: C64, f2: C64) -> Self {
        let g = self.g.map(|x| f1 * x);
        let mut h = [Z; 6];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            h[p] = f1 * self.h[p] + f2 * self.g[i] * self.g[j];
        }
        Self { v: f0, g, h, order: self.order }
    }

    pub fn recip(self) -> Self {
        let r = C64::new(1.0, 0.0) / self.v;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    /// `∂/∂k_axis`, one order lower.
    pub fn derivative(self, axis: usize) -> Self {
        assert!(self.order > 0, "derivative of an order-0 jet is not exact");
        let g = [0, 1, 2].map(|j| self.h[hidx(axis, j)]);
        Self { v: self.g[axis], g, h: [Z; 6], order: self.order - 1 }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut g = self.g;
        let mut h = self.h;
        g.iter_mut().zip(o.g).for_each(|(a, b)| *a += b);
        h.iter_mut().zip(o.h).for_each(|(a, b)| *a += b);
        Jet { v: self.v + o.v, g, h, order: self.order.min(o.order) }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale_real(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let g = [0, 1, 2].map(|i| self.v * o.g[i] + self.g[i] * o.v);
        let mut h = [Z; 6];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            h[p] = self.v * o.h[p] + self.g[i] * o.g[j] + self.g[j] * o.g[i] + self.h[p] * o.v;
        }
        Jet { v: self.v * o.v, g, h, order: self.order.min(o.order) }
    }
}
