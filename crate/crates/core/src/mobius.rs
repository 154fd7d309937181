//! Points of CP¹ and SL(2,C) acting on them.
//!
//! A point `ζ` is the line through `(1, ζ)` in `C²`; `∞` is the line through
//! `(0, 1)`. A matrix `[[a, b], [c, d]]` acts on column vectors, hence on
//! points by `ζ ↦ (c + dζ) / (a + bζ)`.

use core::ops::Mul;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

/// `C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn zero() -> Self {
        ExtendedComplex::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    /// Image under the antipodal map `ζ ↦ −1/ζ̄`.
    pub fn antipode(&self) -> Self {
        match *self {
            ExtendedComplex::Infinity => ExtendedComplex::zero(),
            ExtendedComplex::Finite(z) if z == Complex64::new(0.0, 0.0) => {
                ExtendedComplex::Infinity
            }
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(-z.conj().inv()),
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

/// An element of SL(2,C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusElement {
    /// Checked constructor: `|ad − bc − 1| ≤ 1e−12`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let g = MobiusElement { a, b, c, d };
        let det = g.determinant();
        if (det - 1.0).norm() > 1e-12 {
            return Err(Error::invalid(
                "g",
                alloc::format!("determinant {det} is not 1"),
            ));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusElement {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// `[[0, −1], [1, 0]]`, which swaps `0` and `∞`.
    pub fn weyl() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusElement {
            a: zero,
            b: -one,
            c: one,
            d: zero,
        }
    }

    /// `diag(t, 1/t)`; panics on `t = 0`.
    pub fn diagonal(t: Complex64) -> Self {
        assert!(t.norm() > 0.0, "diagonal element needs t != 0");
        let zero = Complex64::new(0.0, 0.0);
        MobiusElement {
            a: t,
            b: zero,
            c: zero,
            d: t.inv(),
        }
    }

    /// The SU(2) element `g_q` with `g_q · 0 = q`:
    /// `(1 + |q|²)^{−1/2} [[1, −q̄], [q, 1]]`, and the Weyl element at `∞`.
    pub fn rotation_to(q: ExtendedComplex) -> Self {
        match q {
            ExtendedComplex::Infinity => Self::weyl(),
            ExtendedComplex::Finite(q) => {
                let s = Float::sqrt(1.0 + q.norm_sqr()).recip();
                MobiusElement {
                    a: Complex64::new(s, 0.0),
                    b: -q.conj() * s,
                    c: q * s,
                    d: Complex64::new(s, 0.0),
                }
            }
        }
    }

    /// An SU(2) element from a unit quaternion-like pair `(a, b)`; the input
    /// is normalised.
    pub fn su2(a: Complex64, b: Complex64) -> Self {
        let n = Float::sqrt(a.norm_sqr() + b.norm_sqr());
        let (a, b) = (a / n, b / n);
        MobiusElement {
            a,
            b,
            c: -b.conj(),
            d: a.conj(),
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        MobiusElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        (self.determinant() - 1.0).norm() <= tol
            && (self.d - self.a.conj()).norm() <= tol
            && (self.c + self.b.conj()).norm() <= tol
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        let (x, y) = match z {
            ExtendedComplex::Infinity => (self.b, self.d),
            ExtendedComplex::Finite(z) => (self.a + self.b * z, self.c + self.d * z),
        };
        if x == Complex64::new(0.0, 0.0) {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::Finite(y / x)
        }
    }
}

impl Mul for MobiusElement {
    type Output = MobiusElement;

    fn mul(self, o: MobiusElement) -> MobiusElement {
        MobiusElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}
