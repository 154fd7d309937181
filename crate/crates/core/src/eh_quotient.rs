//! The k-Eguchi–Hanson quotient: quadruples `(z₁, z₂, w₁, w₂)` of sections
//! of `O(K)`, the moment map `μ = z₁w₁ + z₂w₂`, the C*-action
//! `(tz, t⁻¹w)` and the chart of the quotient by rank-one matrices.
//!
//! Indexing of the chart. With `d = K + 1` coefficients per polynomial put
//!
//! ```text
//! zvec = (z₁,₀ … z₁,K, z₂,₀ … z₂,K)      (ascending powers)
//! wvec = (w₁,K … w₁,₀, w₂,K … w₂,₀)      (descending powers)
//! ```
//!
//! and `a = zvec · wvecᵀ`, a `2d × 2d` matrix of rank one. The coefficient of
//! `ζ^m` in `μ` is the sum of the entries with `r − c = m − K` inside the two
//! diagonal `d × d` blocks. For `p = 0..K` we write `τ_p = s_{K−p}` (the
//! `p`-th superdiagonal) and `ν_p = s_{K+p}` (the `p`-th subdiagonal), so
//! `τ₀ = ν₀`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::cp1_sections::Poly;
use crate::linalg::{singular_values, CMat, CVec};
use crate::{Error, Result};

/// Default relative threshold for [`is_regular_level`].
pub const REGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EHPoint {
    z1: Poly,
    z2: Poly,
    w1: Poly,
    w2: Poly,
}

impl EHPoint {
    pub fn new(z1: Poly, z2: Poly, w1: Poly, w2: Poly) -> Result<Self> {
        let k = z1.k();
        if z2.k() != k || w1.k() != k || w2.k() != k {
            return Err(Error::DimensionMismatch(format!(
                "degree bounds {}, {}, {}, {} differ",
                z1.k(),
                z2.k(),
                w1.k(),
                w2.k()
            )));
        }
        Ok(EHPoint { z1, z2, w1, w2 })
    }

    pub fn zero(k: usize) -> Self {
        EHPoint {
            z1: Poly::zero(k),
            z2: Poly::zero(k),
            w1: Poly::zero(k),
            w2: Poly::zero(k),
        }
    }

    /// The common degree bound `K`.
    pub fn k(&self) -> usize {
        self.z1.k()
    }

    pub fn z1(&self) -> &Poly {
        &self.z1
    }

    pub fn z2(&self) -> &Poly {
        &self.z2
    }

    pub fn w1(&self) -> &Poly {
        &self.w1
    }

    pub fn w2(&self) -> &Poly {
        &self.w2
    }

    /// `zvec` of the chart (ascending powers of `z₁` then `z₂`).
    pub fn z_vector(&self) -> CVec {
        CVec::from_iterator(
            2 * (self.k() + 1),
            self.z1.coeffs().iter().chain(self.z2.coeffs()).copied(),
        )
    }

    /// `wvec` of the chart (descending powers of `w₁` then `w₂`).
    pub fn w_vector(&self) -> CVec {
        CVec::from_iterator(
            2 * (self.k() + 1),
            self.w1
                .coeffs()
                .iter()
                .rev()
                .chain(self.w2.coeffs().iter().rev())
                .copied(),
        )
    }

    /// Inverse of [`EHPoint::z_vector`] / [`EHPoint::w_vector`].
    pub fn from_chart_vectors(z: &CVec, w: &CVec) -> Result<Self> {
        if z.len() != w.len() || z.len() < 2 || z.len() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "chart vectors of lengths {} and {}",
                z.len(),
                w.len()
            )));
        }
        let d = z.len() / 2;
        let asc = |v: &CVec, off: usize| Poly::new((0..d).map(|i| v[off + i]).collect());
        let desc = |v: &CVec, off: usize| Poly::new((0..d).map(|i| v[off + d - 1 - i]).collect());
        EHPoint::new(asc(z, 0), asc(z, d), desc(w, 0), desc(w, d))
    }
}

/// `z₁w₁ + z₂w₂`, a section of `O(2K)`.
pub fn moment(pt: &EHPoint) -> Poly {
    pt.z1.mul(&pt.w1).add(&pt.z2.mul(&pt.w2))
}

/// `(tz₁, tz₂, t⁻¹w₁, t⁻¹w₂)`.
pub fn circle_act(t: Complex64, pt: &EHPoint) -> Result<EHPoint> {
    if t.is_zero() || !t.is_finite() {
        return Err(Error::invalid("t", "must be a finite nonzero complex number"));
    }
    let ti = t.inv();
    Ok(EHPoint {
        z1: pt.z1.scale(t),
        z2: pt.z2.scale(t),
        w1: pt.w1.scale(ti),
        w2: pt.w2.scale(ti),
    })
}

/// Representative of the C*-orbit: `‖z‖ = ‖w‖` and the first nonzero
/// coefficient of `zvec` real positive. The zero point is returned as is.
pub fn gauge_fix(pt: &EHPoint) -> Result<EHPoint> {
    let (z, w) = (pt.z_vector(), pt.w_vector());
    let (nz, nw) = (z.norm(), w.norm());
    if nz == 0.0 && nw == 0.0 {
        return Ok(pt.clone());
    }
    if nz == 0.0 || nw == 0.0 {
        return Err(Error::invalid(
            "pt",
            "the C*-orbit of a point with z = 0 or w = 0 has no balanced representative",
        ));
    }
    let first = z.iter().find(|c| !c.is_zero()).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let t = Complex64::from_polar(Float::sqrt(nw / nz), -first.arg());
    circle_act(t, pt)
}

/// Level data read off `s` in the chart convention; `tau[p] = s_{K−p}` and
/// `nu[p] = s_{K+p}` for `p = 0..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentData {
    pub s: Poly,
    pub tau: Vec<Complex64>,
    pub nu: Vec<Complex64>,
}

impl MomentData {
    /// `s` must have degree bound at most `2K`; it is padded to `2K`.
    pub fn from_level(s: &Poly, k: usize) -> Result<Self> {
        let s = pad(s, 2 * k)?;
        let c = s.coeffs();
        let tau = (0..=k).map(|p| c[k - p]).collect();
        let nu = (0..=k).map(|p| c[k + p]).collect();
        Ok(MomentData { s, tau, nu })
    }

    /// Rebuild `s` from `tau` and `nu`.
    pub fn reconstruct(&self) -> Result<Poly> {
        let k = self.tau.len().saturating_sub(1);
        if self.tau.is_empty() || self.nu.len() != self.tau.len() {
            return Err(Error::DimensionMismatch("tau and nu lengths differ".into()));
        }
        let mut c = alloc::vec![Complex64::zero(); 2 * k + 1];
        for p in 0..=k {
            c[k - p] = self.tau[p];
            c[k + p] = self.nu[p];
        }
        Ok(Poly::new(c))
    }
}

fn pad(s: &Poly, k: usize) -> Result<Poly> {
    if s.k() > k {
        return Err(Error::DimensionMismatch(format!(
            "level has degree bound {}, expected at most {k}",
            s.k()
        )));
    }
    let mut c = s.coeffs().to_vec();
    c.resize(k + 1, Complex64::zero());
    Ok(Poly::new(c))
}

/// Resultant of two binary forms of degree `n` given by full coefficient
/// lists `f = Σ f_i x^{n−i} y^i`; the Sylvester determinant.
pub fn form_resultant(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut syl = CMat::zeros(size, size);
    for r in 0..n {
        for (i, &c) in f.iter().enumerate() {
            syl[(r, r + i)] = c;
        }
    }
    for r in 0..m {
        for (i, &c) in g.iter().enumerate() {
            syl[(n + r, r + i)] = c;
        }
    }
    syl.lu().determinant()
}

/// Normalized homogeneous discriminant of `s` as a binary form of degree
/// `n = s.k()`: `|Res(F_x, F_y)| / n^{n−2} / ‖s‖^{2n−2}`. It vanishes
/// exactly when `s` has a repeated zero on CP¹, counting `ζ = ∞` when the
/// top two coefficients vanish. Forms of degree 0 and 1 get 1.
pub fn normalized_discriminant(s: &Poly) -> Result<f64> {
    if s.is_zero() {
        return Err(Error::invalid("s", "the zero section has no regular level"));
    }
    let n = s.k();
    if n < 2 {
        return Ok(1.0);
    }
    let c = s.coeffs();
    let fx: Vec<Complex64> = (0..n).map(|i| c[i] * (n - i) as f64).collect();
    let fy: Vec<Complex64> = (1..=n).map(|i| c[i] * i as f64).collect();
    let res = form_resultant(&fx, &fy).norm();
    let norm = s.norm();
    Ok(res / Float::powi(n as f64, n as i32 - 2) / Float::powi(norm, 2 * n as i32 - 2))
}

/// Whether the section `s` of `O(s.k())` has only simple zeros, ∞ included.
pub fn is_regular_level(s: &Poly, tol: f64) -> Result<bool> {
    Ok(normalized_discriminant(s)? > tol)
}

/// Minimum-norm `(w₁, w₂)` with `z₁w₁ + z₂w₂ = s`.
///
/// The level is padded to degree bound `2K`. Fails with
/// [`Error::IrregularLevel`] on a level with repeated zeros and with
/// [`Error::NoSolution`] when the least-squares residual exceeds `tol`.
pub fn solve_fiber_sample(s: &Poly, z1: &Poly, z2: &Poly, tol: f64) -> Result<EHPoint> {
    let k = z1.k();
    if z2.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "z1 has degree bound {k}, z2 has {}",
            z2.k()
        )));
    }
    let disc = normalized_discriminant(s)?;
    if disc <= REGULAR_TOL {
        return Err(Error::IrregularLevel { discriminant: disc });
    }
    let level = pad(s, 2 * k)?;
    let d = k + 1;
    let m = fiber_system(z1, z2);
    let b = CVec::from_column_slice(level.coeffs());
    let top = singular_values(&m).first().copied().unwrap_or(0.0);
    let x = if top == 0.0 {
        CVec::zeros(2 * d)
    } else {
        m.clone()
            .svd(true, true)
            .solve(&b, top * 1e-12)
            .map_err(|_| Error::Singular { index: 0 })?
    };
    let residual = (&m * &x - &b).norm();
    if !(residual < tol) {
        return Err(Error::NoSolution { residual });
    }
    let w1 = Poly::new(x.rows(0, d).iter().copied().collect());
    let w2 = Poly::new(x.rows(d, d).iter().copied().collect());
    EHPoint::new(z1.clone(), z2.clone(), w1, w2)
}

/// A point of the rank-one chart, `a = u vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Point {
    pub dim: usize,
    pub a: CMat,
    pub u: Option<CVec>,
    pub v: Option<CVec>,
}

impl Rank1Point {
    /// Wrap a matrix without known factors.
    pub fn from_matrix(a: CMat) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "chart matrix must be square of even size, got {:?}",
                a.shape()
            )));
        }
        Ok(Rank1Point {
            dim: a.nrows(),
            a,
            u: None,
            v: None,
        })
    }

    /// `σ₂/σ₁`, or 0 for the zero matrix.
    pub fn singular_ratio(&self) -> f64 {
        let sv = singular_values(&self.a);
        match (sv.first(), sv.get(1)) {
            (Some(&s1), Some(&s2)) if s1 > 0.0 => s2 / s1,
            _ => 0.0,
        }
    }
}

/// `a_{rc} = zvec_r · wvec_c`.
pub fn rank1_chart(pt: &EHPoint) -> Rank1Point {
    let z = pt.z_vector();
    let w = pt.w_vector();
    let a = &z * w.transpose();
    Rank1Point {
        dim: z.len(),
        a,
        u: Some(z),
        v: Some(w),
    }
}

/// Sum of the entries with `r − c = offset` inside the diagonal blocks.
fn block_diagonal_sum(a: &CMat, d: usize, offset: i64) -> Complex64 {
    let mut acc = Complex64::zero();
    for block in 0..2 {
        let base = block * d;
        for r in 0..d {
            let c = r as i64 - offset;
            if (0..d as i64).contains(&c) {
                acc += a[(base + r, base + c as usize)];
            }
        }
    }
    acc
}

/// The block sums of `r` as level data.
pub fn chart_moment(r: &Rank1Point) -> MomentData {
    let d = r.dim / 2;
    let k = d - 1;
    let tau: Vec<Complex64> = (0..=k).map(|p| block_diagonal_sum(&r.a, d, -(p as i64))).collect();
    let nu: Vec<Complex64> = (0..=k).map(|p| block_diagonal_sum(&r.a, d, p as i64)).collect();
    let data = MomentData {
        s: Poly::zero(2 * k),
        tau,
        nu,
    };
    let s = data.reconstruct().expect("tau and nu have equal length");
    MomentData { s, ..data }
}

/// Largest violation of `τ_p`, `ν_p` (`p = 0..K`) by the block sums of `r`.
pub fn constraints_residual(r: &Rank1Point, s: &Poly) -> Result<f64> {
    if r.dim < 2 || r.dim % 2 != 0 || r.a.shape() != (r.dim, r.dim) {
        return Err(Error::DimensionMismatch(format!(
            "chart matrix of shape {:?} with dim {}",
            r.a.shape(),
            r.dim
        )));
    }
    let k = r.dim / 2 - 1;
    let target = MomentData::from_level(s, k)?;
    let got = chart_moment(r);
    Ok(target
        .tau
        .iter()
        .zip(&got.tau)
        .chain(target.nu.iter().zip(&got.nu))
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm())))
}

/// `conj(wvec_i) = zvec_i` for all `i`, within `tol`.
pub fn check_reality(pt: &EHPoint, tol: f64) -> bool {
    let z = pt.z_vector();
    let w = pt.w_vector();
    z.iter().zip(w.iter()).all(|(zi, wi)| (wi.conj() - zi).norm() <= tol)
}

/// The real point with the given `zvec` (`wvec = conj(zvec)`).
pub fn real_point(z: &CVec) -> Result<EHPoint> {
    EHPoint::from_chart_vectors(z, &z.map(|x| x.conj()))
}

/// Matrix of the linear map `(w₁, w₂) ↦ z₁w₁ + z₂w₂` on coefficients.
pub fn fiber_system(z1: &Poly, z2: &Poly) -> CMat {
    let d = z1.k() + 1;
    let mut m = CMat::zeros(2 * d - 1, 2 * d);
    for j in 0..d {
        for i in 0..d {
            m[(i + j, j)] = z1.coeffs()[i];
            m[(i + j, d + j)] = z2.coeffs()[i];
        }
    }
    m
}
