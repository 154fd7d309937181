//! Gauge fields on `C⁵ = S⁴C²` with matrix-valued polynomial coefficients,
//! and their restriction to α-surfaces.
//!
//! At `q = 0` the α-surfaces are the leaves `z₀ = const` and the
//! connection-plus-Higgs pair restricts to
//!
//! ```text
//! (A₁ + Φ₁)dz₁ + (A₂ + Φ₂)dz₂ + (A₃ + Φ₃)dz₃ + A₄dz₄.
//! ```
//!
//! At any other `q` the coordinates are pulled back along `z = R w` with
//! `R = ρ₄(g_q)`, so that the α-surface at `q` becomes `w₀ = const`. The
//! one-form components transform contragrediently, `A′_l = Σ_i A_i(Rw) R_il`,
//! and the Higgs triple as an element of `S²C²`. The triple is stored in
//! the coordinates paired with `dz₁, dz₂, dz₃`; these are `Φ_l = c_l φ_{3−l}`
//! in the weight basis `φ` of `S²C²`, with `c = (1, −1/3, 1/3)` coming from
//! the invariant pairing and the isomorphism `K₀/S₀ ≅ S²C²`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::linalg::{frobenius, CMat};
use crate::mobius::{ExtendedComplex, MobiusElement};
use crate::sl2_rep::irrep;
use crate::{Error, Result};

pub type Exponents = [u32; 5];

fn total_degree(e: &Exponents) -> u32 {
    e.iter().sum()
}

/// Polynomial in `z₀..z₄` with `m × m` complex matrix coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPolyField {
    m: usize,
    maxdeg: u32,
    terms: BTreeMap<Exponents, CMat>,
}

impl MatPolyField {
    pub fn zero(m: usize, maxdeg: u32) -> Self {
        MatPolyField {
            m,
            maxdeg,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(mat: CMat, maxdeg: u32) -> Result<Self> {
        let mut f = Self::zero(mat.nrows(), maxdeg);
        f.insert([0; 5], mat)?;
        Ok(f)
    }

    pub fn identity(m: usize, maxdeg: u32) -> Self {
        Self::constant(CMat::identity(m, m), maxdeg).expect("square")
    }

    /// The coordinate `z_var` times `mat`.
    pub fn linear(var: usize, mat: CMat, maxdeg: u32) -> Result<Self> {
        let mut e = [0; 5];
        e[var] = 1;
        let mut f = Self::zero(mat.nrows(), maxdeg.max(1));
        f.insert(e, mat)?;
        Ok(f)
    }

    /// Add `mat` to the coefficient of the monomial `exps`.
    pub fn insert(&mut self, exps: Exponents, mat: CMat) -> Result<()> {
        if mat.shape() != (self.m, self.m) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient is {:?}, expected {m}x{m}",
                mat.shape(),
                m = self.m
            )));
        }
        if total_degree(&exps) > self.maxdeg {
            return Err(Error::invalid(
                "exponents",
                format!("{exps:?} exceeds the degree bound {}", self.maxdeg),
            ));
        }
        self.add_term(exps, mat);
        Ok(())
    }

    fn add_term(&mut self, exps: Exponents, mat: CMat) {
        match self.terms.get_mut(&exps) {
            Some(c) => *c += mat,
            None => {
                self.terms.insert(exps, mat);
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, CMat> {
        &self.terms
    }

    /// Largest total degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(_, c)| c.iter().any(|z| !z.is_zero()))
            .map(|(e, _)| total_degree(e))
            .max()
    }

    /// Largest Frobenius norm over the monomial coefficients.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(frobenius).fold(0.0, f64::max)
    }

    fn check_m(&self, other: &Self) {
        assert_eq!(self.m, other.m, "fields of different matrix size");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_m(other);
        let mut out = self.clone();
        out.maxdeg = self.maxdeg.max(other.maxdeg);
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex64::one()))
    }

    pub fn scale(&self, t: Complex64) -> Self {
        MatPolyField {
            m: self.m,
            maxdeg: self.maxdeg,
            terms: self.terms.iter().map(|(e, c)| (*e, c * t)).collect(),
        }
    }

    /// Matrix product of fields; the degree bounds add.
    pub fn mul(&self, other: &Self) -> Self {
        self.product(other, false)
    }

    /// `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.product(other, true)
    }

    fn product(&self, other: &Self, bracket: bool) -> Self {
        self.check_m(other);
        let m = self.m;
        let maxdeg = self.maxdeg + other.maxdeg;
        let base = maxdeg as usize + 1;
        let table = base.checked_pow(5).filter(|&n| n <= 1 << 20);
        let Some(table) = table else {
            let mut out = Self::zero(m, maxdeg);
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let e = core::array::from_fn(|i| ea[i] + eb[i]);
                    let acc = out.terms.entry(e).or_insert_with(|| CMat::zeros(m, m));
                    mul_acc(acc, ca, cb, 1.0);
                    if bracket {
                        mul_acc(acc, cb, ca, -1.0);
                    }
                }
            }
            return out;
        };
        // Mixed-radix codes add under monomial multiplication.
        let code = |e: &Exponents| e.iter().rev().fold(0, |k, &p| k * base + p as usize);
        let lhs: Vec<(usize, &CMat)> = self.terms.iter().map(|(e, c)| (code(e), c)).collect();
        let rhs: Vec<(usize, &CMat)> = other.terms.iter().map(|(e, c)| (code(e), c)).collect();
        let mut slot = vec![usize::MAX; table];
        let mut keys: Vec<usize> = Vec::new();
        let mut coeffs: Vec<CMat> = Vec::new();
        for &(ka, ca) in &lhs {
            for &(kb, cb) in &rhs {
                let k = ka + kb;
                if slot[k] == usize::MAX {
                    slot[k] = coeffs.len();
                    keys.push(k);
                    coeffs.push(CMat::zeros(m, m));
                }
                let acc = &mut coeffs[slot[k]];
                mul_acc(acc, ca, cb, 1.0);
                if bracket {
                    mul_acc(acc, cb, ca, -1.0);
                }
            }
        }
        let decode = |mut k: usize| -> Exponents {
            core::array::from_fn(|_| {
                let p = (k % base) as u32;
                k /= base;
                p
            })
        };
        MatPolyField {
            m,
            maxdeg,
            terms: keys.into_iter().map(decode).zip(coeffs).collect(),
        }
    }

    /// `∂/∂z_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.m, self.maxdeg.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut d = *e;
                d[var] -= 1;
                out.add_term(d, c * Complex64::from(e[var] as f64));
            }
        }
        out
    }

    /// Left and right multiplication by constant matrices, `l · f · r`.
    pub fn sandwich(&self, l: &CMat, r: &CMat) -> Self {
        MatPolyField {
            m: l.nrows(),
            maxdeg: self.maxdeg,
            terms: self.terms.iter().map(|(e, c)| (*e, l * c * r)).collect(),
        }
    }

    /// `f(Rw)` as a polynomial in `w`.
    pub fn substitute(&self, r: &CMat) -> Self {
        let m = self.m;
        let mut out = Self::zero(m, self.maxdeg);
        let rows: [ScalarPoly; 5] = core::array::from_fn(|i| ScalarPoly::linear_row(r, i));
        let mut cache: BTreeMap<Exponents, ScalarPoly> = BTreeMap::new();
        cache.insert([0; 5], ScalarPoly::one());
        for (e, c) in &self.terms {
            let mono = monomial_image(*e, &rows, &mut cache);
            for (we, coef) in &mono.0 {
                let acc = out.terms.entry(*we).or_insert_with(|| CMat::zeros(m, m));
                acc.zip_apply(c, |x, y| *x += y * coef);
            }
        }
        out
    }

    /// Evaluate at a point of `C⁵`.
    pub fn eval(&self, z: &[Complex64; 5]) -> CMat {
        let mut acc = CMat::zeros(self.m, self.m);
        for (e, c) in &self.terms {
            let mut w = Complex64::one();
            for i in 0..5 {
                w *= z[i].powu(e[i]);
            }
            acc += c * w;
        }
        acc
    }
}

/// `acc += sign · a b` for small square matrices.
fn mul_acc(acc: &mut CMat, a: &CMat, b: &CMat, sign: f64) {
    let m = acc.nrows();
    let (sa, sb) = (a.as_slice(), b.as_slice());
    let out = acc.as_mut_slice();
    for j in 0..m {
        for k in 0..m {
            let bkj = sb[k + j * m] * sign;
            if bkj.is_zero() {
                continue;
            }
            for i in 0..m {
                out[i + j * m] += sa[i + k * m] * bkj;
            }
        }
    }
}

/// Image of the monomial `w^e` under `w ↦ Rw`, built one factor at a time.
fn monomial_image<'a>(
    e: Exponents,
    rows: &[ScalarPoly; 5],
    cache: &'a mut BTreeMap<Exponents, ScalarPoly>,
) -> &'a ScalarPoly {
    if !cache.contains_key(&e) {
        let i = e.iter().position(|&p| p > 0).expect("constant monomial is cached");
        let mut lower = e;
        lower[i] -= 1;
        let img = monomial_image(lower, rows, cache).mul(&rows[i]);
        cache.insert(e, img);
    }
    &cache[&e]
}

/// Scalar polynomial in five variables, used for substitutions.
#[derive(Debug, Clone)]
struct ScalarPoly(BTreeMap<Exponents, Complex64>);

impl ScalarPoly {
    fn one() -> Self {
        let mut m = BTreeMap::new();
        m.insert([0; 5], Complex64::one());
        ScalarPoly(m)
    }

    /// `Σ_j R_ij w_j`.
    fn linear_row(r: &CMat, i: usize) -> Self {
        let mut m = BTreeMap::new();
        for j in 0..5 {
            let c = r[(i, j)];
            if !c.is_zero() {
                let mut e = [0; 5];
                e[j] = 1;
                m.insert(e, c);
            }
        }
        ScalarPoly(m)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e = core::array::from_fn(|i| ea[i] + eb[i]);
                *m.entry(e).or_insert(Complex64::zero()) += ca * cb;
            }
        }
        ScalarPoly(m)
    }
}

/// `A₀..A₄` and the Higgs triple `Φ₁..Φ₃`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField5 {
    pub a: [MatPolyField; 5],
    pub phi: [MatPolyField; 3],
}

impl GaugeField5 {
    /// All eight fields must share the matrix size; the common degree bound
    /// is the largest of theirs.
    pub fn new(a: [MatPolyField; 5], phi: [MatPolyField; 3]) -> Result<Self> {
        let m = a[0].m;
        if let Some(f) = a.iter().chain(phi.iter()).find(|f| f.m != m) {
            return Err(Error::DimensionMismatch(format!(
                "field with {}x{} coefficients among {m}x{m} fields",
                f.m, f.m
            )));
        }
        let maxdeg = a.iter().chain(phi.iter()).map(|f| f.maxdeg).max().unwrap_or(0);
        let lift = |f: MatPolyField| MatPolyField { maxdeg, ..f };
        Ok(GaugeField5 {
            a: a.map(lift),
            phi: phi.map(lift),
        })
    }

    pub fn zero(m: usize, maxdeg: u32) -> Self {
        GaugeField5 {
            a: core::array::from_fn(|_| MatPolyField::zero(m, maxdeg)),
            phi: core::array::from_fn(|_| MatPolyField::zero(m, maxdeg)),
        }
    }

    pub fn m(&self) -> usize {
        self.a[0].m
    }

    pub fn maxdeg(&self) -> u32 {
        self.a[0].maxdeg
    }

    pub fn max_diff(&self, other: &GaugeField5) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .chain(self.phi.iter().zip(&other.phi))
            .map(|(x, y)| x.sub(y).max_coeff_norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients pairing the stored triple with the weight basis of `S²C²`.
const HIGGS_SCALE: [f64; 3] = [1.0, -1.0 / 3.0, 1.0 / 3.0];

/// Matrix of `g` on the stored Higgs coordinates.
fn higgs_matrix(g: &MobiusElement) -> CMat {
    let rho = irrep(2).group_matrix(g).expect("irreps are weight-diagonal");
    // Stored coordinate l (0-based for Φ_{l+1}) is HIGGS_SCALE[l] · φ_{2−l}.
    let cp = CMat::from_fn(3, 3, |r, c| {
        if c == 2 - r {
            Complex64::from(HIGGS_SCALE[r])
        } else {
            Complex64::zero()
        }
    });
    let cp_inv = cp.clone().try_inverse().expect("invertible");
    cp * rho * cp_inv
}

/// Pull the fields back along the linear map `z = ρ₄(g) w`.
pub fn pullback(f: &GaugeField5, g: &MobiusElement) -> GaugeField5 {
    let r = irrep(4).group_matrix(g).expect("irreps are weight-diagonal");
    let sub: Vec<MatPolyField> = f.a.iter().map(|x| x.substitute(&r)).collect();
    let m = f.m();
    let a = core::array::from_fn(|l| {
        sub.iter().enumerate().fold(MatPolyField::zero(m, f.maxdeg()), |acc, (i, x)| {
            acc.add(&x.scale(r[(i, l)]))
        })
    });
    let hinv = higgs_matrix(&g.inverse());
    let phis: Vec<MatPolyField> = f.phi.iter().map(|x| x.substitute(&r)).collect();
    let phi = core::array::from_fn(|l| {
        phis.iter().enumerate().fold(MatPolyField::zero(m, f.maxdeg()), |acc, (j, x)| {
            acc.add(&x.scale(hinv[(l, j)]))
        })
    });
    GaugeField5 { a, phi }
}

/// The SU(2)-rotated fields, transported so that their α-surface at `g·q`
/// is the image of the original one at `q`.
pub fn rotate(f: &GaugeField5, g: &MobiusElement) -> GaugeField5 {
    pullback(f, &g.inverse())
}

/// The four components of the connection on the α-surfaces at `q`, as
/// polynomials in `w₀..w₄` with `w₀` held fixed along the surface.
pub fn alpha_connection_at_q(f: &GaugeField5, q: ExtendedComplex) -> [MatPolyField; 4] {
    let p = pullback(f, &MobiusElement::rotation_to(q));
    core::array::from_fn(|l| {
        if l < 3 {
            p.a[l + 1].add(&p.phi[l])
        } else {
            p.a[4].clone()
        }
    })
}

/// `F_ij = ∂_i a_j − ∂_j a_i + [a_i, a_j]` for `1 ≤ i < j ≤ 4`.
pub fn alpha_curvature(conn: &[MatPolyField; 4]) -> Vec<((usize, usize), MatPolyField)> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let f = conn[j]
                .derivative(i + 1)
                .sub(&conn[i].derivative(j + 1))
                .add(&conn[i].bracket(&conn[j]));
            out.push(((i + 1, j + 1), f));
        }
    }
    out
}

/// Largest coefficient norm of the curvature on the α-surfaces at `q`.
pub fn curvature_residual(f: &GaugeField5, q: ExtendedComplex) -> f64 {
    alpha_curvature(&alpha_connection_at_q(f, q))
        .iter()
        .map(|(_, c)| c.max_coeff_norm())
        .fold(0.0, f64::max)
}

/// All ten components `F_ij`, `0 ≤ i < j ≤ 4`, of `Σ A_i dz_i` on `C⁵`.
pub fn full_curvature(a: &[MatPolyField; 5]) -> Vec<((usize, usize), MatPolyField)> {
    let mut out = Vec::with_capacity(10);
    for i in 0..5 {
        for j in i + 1..5 {
            let f = a[j]
                .derivative(i)
                .sub(&a[i].derivative(j))
                .add(&a[i].bracket(&a[j]));
            out.push(((i, j), f));
        }
    }
    out
}

/// `0`, `∞` and `r_j e^{2πij/23}` for `j = 0..22` with
/// `r_j = (½, 1, 2)[j mod 3]`.
pub fn default_q_samples() -> Vec<ExtendedComplex> {
    let mut out = Vec::with_capacity(25);
    out.push(ExtendedComplex::zero());
    out.push(ExtendedComplex::Infinity);
    let radii = [0.5, 1.0, 2.0];
    for j in 0..23 {
        let theta = 2.0 * core::f64::consts::PI * j as f64 / 23.0;
        out.push(ExtendedComplex::Finite(Complex64::from_polar(radii[j % 3], theta)));
    }
    out
}

/// Per-sample residuals.
pub fn residuals_at(f: &GaugeField5, q_samples: &[ExtendedComplex]) -> Vec<f64> {
    q_samples.iter().map(|&q| curvature_residual(f, q)).collect()
}

/// Maximum of [`curvature_residual`] over the samples.
pub fn monopole_residual(f: &GaugeField5, q_samples: &[ExtendedComplex]) -> Result<f64> {
    if q_samples.is_empty() {
        return Err(Error::invalid("q_samples", "need at least one sample"));
    }
    Ok(residuals_at(f, q_samples).into_iter().fold(0.0, f64::max))
}

/// Inverse of `g = 1 + N` as the terminating series `Σ_{r<m} (−N)^r`.
/// Fails unless `N^m = 0`.
pub fn unipotent_inverse(g: &MatPolyField, tol: f64) -> Result<MatPolyField> {
    let m = g.m;
    let n = g.sub(&MatPolyField::identity(m, 0));
    let neg = n.scale(-Complex64::one());
    let mut inv = MatPolyField::identity(m, 0);
    let mut power = MatPolyField::identity(m, 0);
    for _ in 1..m {
        power = power.mul(&neg);
        inv = inv.add(&power);
    }
    let top = power.mul(&neg);
    if top.max_coeff_norm() > tol {
        return Err(Error::invalid("g", "g − 1 is not nilpotent"));
    }
    Ok(inv)
}

/// `A_i ↦ gA_ig⁻¹ − (∂_i g)g⁻¹`, `Φ_j ↦ gΦ_jg⁻¹` for unipotent `g`.
pub fn gauge_act_fields(f: &GaugeField5, g: &MatPolyField) -> Result<GaugeField5> {
    if g.m != f.m() {
        return Err(Error::DimensionMismatch(format!(
            "gauge is {}x{}, fields are {m}x{m}",
            g.m,
            g.m,
            m = f.m()
        )));
    }
    let gi = unipotent_inverse(g, 1e-12)?;
    let a = core::array::from_fn(|i| {
        g.mul(&f.a[i]).mul(&gi).sub(&g.derivative(i).mul(&gi))
    });
    let phi = core::array::from_fn(|j| g.mul(&f.phi[j]).mul(&gi));
    Ok(GaugeField5 { a, phi })
}

/// `A_i = −(∂_i g)g⁻¹`, flat on all of `C⁵`, with `Φ = 0`.
pub fn pure_gauge(g: &MatPolyField) -> Result<GaugeField5> {
    let gi = unipotent_inverse(g, 1e-12)?;
    let a = core::array::from_fn(|i| g.derivative(i).mul(&gi).scale(-Complex64::one()));
    let m = g.m;
    let degree = a.iter().map(MatPolyField::maxdeg).max().unwrap_or(0);
    GaugeField5::new(a, core::array::from_fn(|_| MatPolyField::zero(m, degree)))
}

/// `max ‖F(g·f) − g F(f) g⁻¹‖` over the α-curvature at `q`.
pub fn covariance_defect(f: &GaugeField5, g: &MatPolyField, q: ExtendedComplex) -> Result<f64> {
    Ok(covariance_defects(f, g, &[q])?[0])
}

/// [`covariance_defect`] at each sample, sharing the gauge action.
pub fn covariance_defects(
    f: &GaugeField5,
    g: &MatPolyField,
    qs: &[ExtendedComplex],
) -> Result<Vec<f64>> {
    let gi = unipotent_inverse(g, 1e-12)?;
    let moved = gauge_act_fields(f, g)?;
    let rep = irrep(4);
    Ok(qs
        .iter()
        .map(|&q| {
            let r = rep
                .group_matrix(&MobiusElement::rotation_to(q))
                .expect("irreps are weight-diagonal");
            let g_w = g.substitute(&r);
            let gi_w = gi.substitute(&r);
            let before = alpha_curvature(&alpha_connection_at_q(f, q));
            let after = alpha_curvature(&alpha_connection_at_q(&moved, q));
            before
                .iter()
                .zip(&after)
                .map(|((_, x), (_, y))| y.sub(&g_w.mul(x).mul(&gi_w)).max_coeff_norm())
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Conjugate every field by a constant matrix, `f ↦ u f u⁻¹`.
pub fn conjugate_fields(f: &GaugeField5, u: &CMat) -> Result<GaugeField5> {
    let ui = u
        .clone()
        .try_inverse()
        .ok_or(Error::Singular { index: 0 })?;
    Ok(GaugeField5 {
        a: core::array::from_fn(|i| f.a[i].sandwich(u, &ui)),
        phi: core::array::from_fn(|j| f.phi[j].sandwich(u, &ui)),
    })
}
