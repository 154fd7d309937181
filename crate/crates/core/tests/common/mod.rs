#![allow(dead_code)]

use ghc_core::cp1_sections::Poly;
use ghc_core::linalg::{antihermitian_part, CMat};
use ghc_core::nahm_flow::NahmState;
use ghc_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn cmat(rng: &mut impl Rng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| complex(rng))
}

pub fn poly(rng: &mut impl Rng, k: usize) -> Poly {
    Poly::new((0..=k).map(|_| complex(rng)).collect())
}

/// Random state rescaled to total Frobenius norm `norm`.
pub fn state(rng: &mut impl Rng, n: usize, norm: f64) -> NahmState {
    let st = NahmState::new(cmat(rng, n, n), cmat(rng, n, n), cmat(rng, n, n)).unwrap();
    let s = Complex64::from(norm / st.norm());
    NahmState::new(&st.alpha * s, &st.beta * s, &st.gamma * s).unwrap()
}

/// Unitary factor of a random complex matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> CMat {
    cmat(rng, n, n).qr().q()
}

/// Random anti-hermitian matrix.
pub fn antihermitian(rng: &mut impl Rng, n: usize) -> CMat {
    antihermitian_part(&cmat(rng, n, n))
}

/// `exp(M)` by scaling and squaring of a Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.norm();
    let mut squarings = 0;
    let mut scaled = m.clone();
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
        scaled = m / Complex64::from(2f64.powi(squarings as i32));
    }
    let mut out = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for r in 1..30 {
        term = &term * &scaled / Complex64::from(r as f64);
        out += &term;
    }
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}
