//! Small complex-matrix helpers shared by the modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &CMat) -> f64 {
    Float::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// `max_abs(a - b)` without allocating.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> alloc::vec::Vec<f64> {
    if m.is_empty() {
        return alloc::vec::Vec::new();
    }
    let mut sv: alloc::vec::Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    sv
}

/// Numerical rank with a threshold relative to the largest singular value.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        None => 0,
        Some(&top) if top == 0.0 => 0,
        Some(&top) => sv.iter().filter(|&&s| s > rel_tol * top).count(),
    }
}

/// `exp(N)` for nilpotent `N` (finite sum up to the matrix size).
pub fn exp_nilpotent(n: &CMat) -> CMat {
    let dim = n.nrows();
    let mut out = CMat::identity(dim, dim);
    let mut term = CMat::identity(dim, dim);
    for r in 1..=dim {
        term = &term * n / Complex64::from(r as f64);
        if max_abs(&term) == 0.0 {
            break;
        }
        out += &term;
    }
    out
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::from(0.5)
}

/// Anti-hermitian part `(M − M†)/2`.
pub fn antihermitian_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * Complex64::from(0.5)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
