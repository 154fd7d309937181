//! Holomorphic sections of `O(k) ⊗ Cⁿ` over CP¹.
//!
//! A section of `O(k)` is a polynomial `Σ c_i ζ^i` of degree at most `k`,
//! equivalently the binary form `F(x, y) = Σ c_i x^{k−i} y^i` with
//! `ζ = y/x`. SL(2,C) acts by `(g·F)(v) = F(g⁻¹ v)`, so `g` carries sections
//! vanishing at `ζ` to sections vanishing at `g·ζ`, and
//!
//! ```text
//! (g·s)(g·ζ) = (a + bζ)^{−k} s(ζ).
//! ```

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::linalg::{binomial, CMat, CVec};
use crate::mobius::{ExtendedComplex, MobiusElement};
use crate::{Error, Result};

/// Polynomial of degree at most `k`; `coeffs[i]` multiplies `ζ^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a section of O(k) needs k + 1 coefficients");
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&x| Complex64::from(x)).collect())
    }

    pub fn zero(k: usize) -> Self {
        Poly::new(vec![Complex64::zero(); k + 1])
    }

    /// `ζ^i` as a section of `O(k)`.
    pub fn monomial(k: usize, i: usize) -> Self {
        let mut p = Poly::zero(k);
        p.coeffs[i] = Complex64::one();
        p
    }

    /// The degree bound `k` (not the exact degree).
    pub fn k(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn norm(&self) -> f64 {
        num_traits::Float::sqrt(self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    /// Value at `ζ`; at `∞` the top coefficient.
    pub fn eval(&self, zeta: ExtendedComplex) -> Complex64 {
        match zeta {
            ExtendedComplex::Infinity => self.coeffs[self.k()],
            ExtendedComplex::Finite(z) => self
                .coeffs
                .iter()
                .rev()
                .fold(Complex64::zero(), |acc, &c| acc * z + c),
        }
    }

    /// Product; degree bounds add.
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.k() + other.k());
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Sum; the degree bound is the larger one.
    pub fn add(&self, other: &Poly) -> Poly {
        let k = self.k().max(other.k());
        let mut out = Poly::zero(k);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        out
    }

    pub fn scale(&self, t: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * t).collect())
    }

    /// Formal derivative, degree bound `k − 1` (kept at 0 for constants).
    pub fn derivative(&self) -> Poly {
        if self.k() == 0 {
            return Poly::zero(0);
        }
        Poly::new(
            (1..=self.k())
                .map(|i| self.coeffs[i] * i as f64)
                .collect(),
        )
    }

    /// Max coefficient distance; degree bounds must agree.
    pub fn max_diff(&self, other: &Poly) -> f64 {
        assert_eq!(self.k(), other.k());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

/// An `n`-tuple of sections of `O(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionVec {
    k: usize,
    polys: Vec<Poly>,
}

impl SectionVec {
    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        let k = polys
            .first()
            .map(Poly::k)
            .ok_or_else(|| Error::invalid("polys", "need at least one component"))?;
        if polys.iter().any(|p| p.k() != k) {
            return Err(Error::DimensionMismatch(
                "all components must share the degree bound".into(),
            ));
        }
        Ok(SectionVec { k, polys })
    }

    pub fn zero(k: usize, n: usize) -> Self {
        SectionVec {
            k,
            polys: vec![Poly::zero(k); n],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn eval(&self, zeta: ExtendedComplex) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.eval(zeta)).collect()
    }

    /// Coefficients stacked component-major: index `c·(k+1) + i`.
    pub fn to_flat(&self) -> CVec {
        CVec::from_iterator(
            self.n() * (self.k + 1),
            self.polys.iter().flat_map(|p| p.coeffs.iter().copied()),
        )
    }

    pub fn from_flat(k: usize, n: usize, v: &CVec) -> Result<Self> {
        if v.len() != n * (k + 1) {
            return Err(Error::DimensionMismatch(alloc::format!(
                "flat vector has length {}, expected {}",
                v.len(),
                n * (k + 1)
            )));
        }
        let polys = (0..n)
            .map(|c| Poly::new(v.rows(c * (k + 1), k + 1).iter().copied().collect()))
            .collect();
        Ok(SectionVec { k, polys })
    }

    pub fn max_diff(&self, other: &SectionVec) -> f64 {
        assert_eq!((self.k, self.n()), (other.k, other.n()));
        self.polys
            .iter()
            .zip(&other.polys)
            .fold(0.0, |acc, (a, b)| acc.max(a.max_diff(b)))
    }
}

/// The matrix of `F ↦ F ∘ g⁻¹` on degree-`k` forms, by expanding
/// `(d x − b y)^{k−i} (−c x + a y)^i`.
pub fn sym_power_matrix(k: usize, g: &MobiusElement) -> CMat {
    let n = k + 1;
    let mut m = CMat::zeros(n, n);
    let (a, b, c, d) = (g.a, g.b, g.c, g.d);
    for i in 0..n {
        // y-power s from the first factor, t from the second.
        for s in 0..=(k - i) {
            let first = d.powi((k - i - s) as i32)
                * (-b).powi(s as i32)
                * binomial((k - i) as u64, s as u64) as f64;
            for t in 0..=i {
                let second =
                    (-c).powi((i - t) as i32) * a.powi(t as i32) * binomial(i as u64, t as u64) as f64;
                m[(s + t, i)] += first * second;
            }
        }
    }
    m
}

/// The S^k action applied to every component.
pub fn mobius_act(g: &MobiusElement, s: &SectionVec) -> SectionVec {
    let r = sym_power_matrix(s.k, g);
    let polys = s
        .polys
        .iter()
        .map(|p| {
            let v = &r * CVec::from_column_slice(&p.coeffs);
            Poly::new(v.iter().copied().collect())
        })
        .collect();
    SectionVec { k: s.k, polys }
}

/// The factor `(a + bζ)^{−k}` with `(g·s)(g·ζ) = factor · s(ζ)`, for `ζ` with
/// `g·ζ` finite.
pub fn cocycle(g: &MobiusElement, k: usize, zeta: Complex64) -> Complex64 {
    (g.a + g.b * zeta).powi(-(k as i32))
}

/// A real structure on `O(k) ⊗ Cⁿ`:
/// `τ(s)_c = signs[c] · σ(s_{perm[c]})` with `σ(p)_i = (−1)^i conj(p_{k−i})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealStructureSpec {
    pub k: usize,
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl RealStructureSpec {
    /// Identity pairing for even `k`; for odd `k` the quaternionic pairing
    /// `(s_{2j}, s_{2j+1}) ↦ (−σ(s_{2j+1}), σ(s_{2j}))`, which needs even `n`.
    pub fn standard(k: usize, n: usize) -> Result<Self> {
        if k % 2 == 0 {
            return Ok(RealStructureSpec {
                k,
                perm: (0..n).collect(),
                signs: vec![1; n],
            });
        }
        if n % 2 == 1 {
            return Err(Error::InvalidRealStructure(alloc::format!(
                "O({k}) ⊗ C^{n}: odd k needs an even number of components"
            )));
        }
        let perm = (0..n).map(|c| c ^ 1).collect();
        let signs = (0..n).map(|c| if c % 2 == 0 { -1 } else { 1 }).collect();
        Ok(RealStructureSpec { k, perm, signs })
    }

    /// Identity pairing regardless of parity; valid only for even `k`.
    pub fn identity(k: usize, n: usize) -> Self {
        RealStructureSpec {
            k,
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// `τ² = id` holds iff `perm` is an involution and
    /// `signs[c] · signs[perm[c]] · (−1)^k = 1` for every `c`.
    pub fn validate(&self, k: usize, n: usize) -> Result<()> {
        if self.k != k || self.perm.len() != n || self.signs.len() != n {
            return Err(Error::InvalidRealStructure(alloc::format!(
                "spec for O({}) with {} components applied to O({k}) ⊗ C^{n}",
                self.k,
                self.perm.len()
            )));
        }
        let parity: i8 = if k % 2 == 0 { 1 } else { -1 };
        for c in 0..n {
            let p = self.perm[c];
            if p >= n || self.perm[p] != c {
                return Err(Error::InvalidRealStructure("pairing is not an involution".into()));
            }
            if !matches!(self.signs[c], 1 | -1) {
                return Err(Error::InvalidRealStructure("signs must be ±1".into()));
            }
            if self.signs[c] * self.signs[p] * parity != 1 {
                return Err(Error::InvalidRealStructure(if k % 2 == 1 && p == c {
                    alloc::format!("O({k}) with odd k has no real structure on a single component")
                } else {
                    "sign pattern does not square to the identity".into()
                }));
            }
        }
        Ok(())
    }
}

fn sigma(p: &Poly) -> Poly {
    let k = p.k();
    Poly::new(
        (0..=k)
            .map(|i| {
                let z = p.coeffs[k - i].conj();
                if i % 2 == 0 {
                    z
                } else {
                    -z
                }
            })
            .collect(),
    )
}

pub fn apply_real_structure(s: &SectionVec, spec: &RealStructureSpec) -> Result<SectionVec> {
    spec.validate(s.k, s.n())?;
    let polys = (0..s.n())
        .map(|c| {
            let p = sigma(&s.polys[spec.perm[c]]);
            if spec.signs[c] < 0 {
                p.scale(Complex64::from(-1.0))
            } else {
                p
            }
        })
        .collect();
    Ok(SectionVec { k: s.k, polys })
}

/// `‖τ(s) − s‖_max ≤ tol`.
pub fn is_real(s: &SectionVec, spec: &RealStructureSpec, tol: f64) -> Result<bool> {
    Ok(apply_real_structure(s, spec)?.max_diff(s) <= tol)
}

/// Basis (as matrix columns, flat component-major layout) of the sections
/// of `O(k) ⊗ Cⁿ` vanishing to order at least `m` at `q`.
///
/// At `q = 0` this is the span of `ζ^m, …, ζ^k` in each component; other
/// points are reached by `g_q`.
pub fn weight_filtration_at(k: usize, n: usize, q: ExtendedComplex, m: usize) -> Result<CMat> {
    if m > k + 1 {
        return Err(Error::invalid(
            "order",
            alloc::format!("vanishing order {m} exceeds k + 1 = {}", k + 1),
        ));
    }
    let r = sym_power_matrix(k, &MobiusElement::rotation_to(q));
    let per = k + 1 - m;
    let mut basis = CMat::zeros(n * (k + 1), n * per);
    for c in 0..n {
        for (col, i) in (m..=k).enumerate() {
            basis
                .view_mut((c * (k + 1), c * per + col), (k + 1, 1))
                .copy_from(&r.column(i));
        }
    }
    Ok(basis)
}

/// The block-diagonal lift `1_n ⊗ X` of a `(k+1)×(k+1)` operator.
pub fn lift_components(n: usize, x: &CMat) -> CMat {
    CMat::identity(n, n).kronecker(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn eval_basics() {
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.eval(ExtendedComplex::finite(1.0, 0.0)), c(3.0, 0.0));
        assert_eq!(p.eval(ExtendedComplex::zero()), c(1.0, 0.0));
        assert_eq!(p.eval(ExtendedComplex::Infinity), c(0.0, 0.0));
    }

    #[test]
    fn identity_action() {
        let s = SectionVec::new(vec![Poly::from_real(&[1.0, -2.0, 0.5, 3.0])]).unwrap();
        assert_eq!(mobius_act(&MobiusElement::identity(), &s), s);
    }

    #[test]
    fn diagonal_scales_by_weight() {
        let t = c(1.3, 0.4);
        let r = sym_power_matrix(4, &MobiusElement::diagonal(t));
        for i in 0..5 {
            let expect = t.powi(2 * i as i32 - 4);
            assert!((r[(i, i)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn real_structure_k4_matches_reflection_rule() {
        // z_i = (−1)^i conj(z_{4−i}).
        let s = SectionVec::new(vec![Poly::new(vec![
            c(1.0, 2.0),
            c(0.5, -1.0),
            c(3.0, 0.0),
            c(-0.5, -1.0),
            c(1.0, -2.0),
        ])])
        .unwrap();
        let spec = RealStructureSpec::standard(4, 1).unwrap();
        assert!(is_real(&s, &spec, 1e-15).unwrap());
    }

    #[test]
    fn real_structure_k2_fixed_points() {
        let spec = RealStructureSpec::standard(2, 1).unwrap();
        let a = 0.7;
        let not_real = SectionVec::new(vec![Poly::new(vec![c(1.0, 0.0), c(0.0, a), c(-1.0, 0.0)])])
            .unwrap();
        assert!(!is_real(&not_real, &spec, 1e-12).unwrap());
        let real = SectionVec::new(vec![Poly::new(vec![c(1.0, 0.0), c(0.0, a), c(1.0, 0.0)])])
            .unwrap();
        assert!(is_real(&real, &spec, 1e-12).unwrap());
        assert!(is_real(&SectionVec::zero(2, 1), &spec, 0.0).unwrap());
    }

    #[test]
    fn odd_k_single_component_has_no_real_structure() {
        let s = SectionVec::zero(3, 1);
        let err = apply_real_structure(&s, &RealStructureSpec::identity(3, 1)).unwrap_err();
        assert!(matches!(err, Error::InvalidRealStructure(_)));
        assert!(RealStructureSpec::standard(3, 1).is_err());
        assert!(RealStructureSpec::standard(3, 2).is_ok());
    }

    #[test]
    fn filtration_edge_orders() {
        let full = weight_filtration_at(3, 2, ExtendedComplex::finite(0.5, 0.5), 0).unwrap();
        assert_eq!(full.ncols(), 8);
        let none = weight_filtration_at(3, 2, ExtendedComplex::zero(), 4).unwrap();
        assert_eq!(none.ncols(), 0);
        assert!(weight_filtration_at(3, 2, ExtendedComplex::zero(), 5).is_err());
    }

    #[test]
    fn filtration_at_zero_vanishes_at_zero() {
        let b = weight_filtration_at(4, 1, ExtendedComplex::zero(), 1).unwrap();
        for col in 0..b.ncols() {
            assert_eq!(b[(0, col)], Complex64::zero());
        }
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::from_real(&[1.0, 1.0]);
        let q = Poly::from_real(&[-1.0, 1.0]);
        assert_eq!(p.mul(&q), Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert_eq!(p.add(&q), Poly::from_real(&[0.0, 2.0]));
        assert_eq!(p.mul(&q).derivative(), Poly::from_real(&[0.0, 2.0]));
    }
}
