//! The split sequence `0 → H* → Ĥ → H′ → 0` of sl2-modules attached to
//! `O(k)` on CP¹, in exact rational arithmetic, together with the cohomology
//! and rank bookkeeping around it.
//!
//! `H = S^k C²`, `H′ = H¹(O(−k)) ≅ S^{k−2} C²` and `Ĥ = H⁰(K*)` where
//! `0 → K → H ⊗ O → O(k) → 0`. Ĥ is modelled as `H* ⊕ H′` in a weight-ordered
//! basis: `i` includes the first `k+1` coordinates, `j` and `p` project onto
//! the last `k−1` and the first `k+1`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{One, Zero};

use num_complex::Complex64;

use crate::sl2_rep::{lowering_constant, raising_constant, Sl2Module};
use crate::{Error, Result};

pub type QMat = DMatrix<Rational64>;

fn q(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Exact rank by Gaussian elimination over Q.
pub fn rank_exact(m: &QMat) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(rank, piv);
        let inv = a[(rank, col)].recip();
        for r in 0..rows {
            if r != rank && !a[(r, col)].is_zero() {
                let factor = a[(r, col)] * inv;
                for c in col..cols {
                    let v = a[(rank, c)];
                    a[(r, c)] -= factor * v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// An sl2-module with rational structure matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactModule {
    pub e: QMat,
    pub f: QMat,
    pub h: QMat,
    pub weights: Vec<i64>,
}

impl ExactModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `S^k C²` with the same structure constants as
    /// [`crate::sl2_rep::irrep`].
    pub fn irrep(k: u32) -> Self {
        let n = k as usize + 1;
        let mut e = QMat::zeros(n, n);
        let mut f = QMat::zeros(n, n);
        let mut h = QMat::zeros(n, n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let w = 2 * i as i64 - k as i64;
            h[(i, i)] = q(w);
            weights.push(w);
            if i + 1 < n {
                e[(i + 1, i)] = q(raising_constant(k, i as u32));
            }
            if i > 0 {
                f[(i - 1, i)] = q(lowering_constant(k, i as u32));
            }
        }
        ExactModule { e, f, h, weights }
    }

    /// The zero module.
    pub fn zero() -> Self {
        ExactModule {
            e: QMat::zeros(0, 0),
            f: QMat::zeros(0, 0),
            h: QMat::zeros(0, 0),
            weights: Vec::new(),
        }
    }

    /// Dual module `X ↦ −Xᵀ`, with the dual basis reversed so that weights
    /// ascend.
    pub fn dual(&self) -> Self {
        let n = self.dim();
        let rev = |m: &QMat| QMat::from_fn(n, n, |r, c| -m[(n - 1 - c, n - 1 - r)]);
        ExactModule {
            e: rev(&self.e),
            f: rev(&self.f),
            h: rev(&self.h),
            weights: self.weights.iter().rev().map(|w| -w).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim() + other.dim();
        let block = |x: &QMat, y: &QMat| {
            let mut m = QMat::zeros(n, n);
            m.view_mut((0, 0), x.shape()).copy_from(x);
            m.view_mut((x.nrows(), x.ncols()), y.shape()).copy_from(y);
            m
        };
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        ExactModule {
            e: block(&self.e, &other.e),
            f: block(&self.f, &other.f),
            h: block(&self.h, &other.h),
            weights,
        }
    }

    /// Floating-point copy.
    pub fn to_module(&self) -> Sl2Module {
        let conv = |m: &QMat| m.map(|x| Complex64::new(*x.numer() as f64 / *x.denom() as f64, 0.0));
        Sl2Module::from_parts(conv(&self.e), conv(&self.f), conv(&self.h), self.weights.clone())
            .expect("square matrices of matching size")
    }

    fn triple(&self) -> [&QMat; 3] {
        [&self.e, &self.f, &self.h]
    }

    /// Whether `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h` hold exactly.
    pub fn relations_hold(&self) -> bool {
        let comm = |a: &QMat, b: &QMat| a * b - b * a;
        comm(&self.h, &self.e) == &self.e * q(2)
            && comm(&self.h, &self.f) == &self.f * q(-2)
            && comm(&self.e, &self.f) == self.h
    }
}

/// `A: V → W` intertwines iff `X_W A = A X_V` for `X ∈ {e, f, h}`.
pub fn intertwines(map: &QMat, source: &ExactModule, target: &ExactModule) -> bool {
    source
        .triple()
        .into_iter()
        .zip(target.triple())
        .all(|(xs, xt)| xt * map == map * xs)
}

/// The split sequence `0 → H* →i Ĥ →j H′ → 0` with left inverse `p` of `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuillenSplit {
    pub k: u32,
    pub hstar: ExactModule,
    pub hprime: ExactModule,
    pub hhat: ExactModule,
    pub i: QMat,
    pub j: QMat,
    pub p: QMat,
}

/// Outcome of the exact checks on a [`QuillenSplit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitReport {
    pub left_inverse: bool,
    pub composite_zero: bool,
    pub i_injective: bool,
    pub j_surjective: bool,
    pub exact_in_middle: bool,
    pub equivariant: bool,
    pub dim_hhat: usize,
}

impl SplitReport {
    pub fn all_pass(&self) -> bool {
        self.left_inverse
            && self.composite_zero
            && self.i_injective
            && self.j_surjective
            && self.exact_in_middle
            && self.equivariant
    }
}

impl QuillenSplit {
    pub fn verify(&self) -> SplitReport {
        let n_star = self.hstar.dim();
        let n_prime = self.hprime.dim();
        let n_hat = self.hhat.dim();
        let rank_i = rank_exact(&self.i);
        let rank_j = rank_exact(&self.j);
        SplitReport {
            left_inverse: &self.p * &self.i == QMat::identity(n_star, n_star),
            composite_zero: (&self.j * &self.i).iter().all(Zero::is_zero),
            i_injective: rank_i == n_star,
            j_surjective: rank_j == n_prime,
            // j·i = 0 gives im i ⊂ ker j; equal dimensions give equality.
            exact_in_middle: (&self.j * &self.i).iter().all(Zero::is_zero)
                && rank_i == n_hat - rank_j,
            equivariant: intertwines(&self.i, &self.hstar, &self.hhat)
                && intertwines(&self.j, &self.hhat, &self.hprime)
                && intertwines(&self.p, &self.hhat, &self.hstar),
            dim_hhat: n_hat,
        }
    }
}

/// Build the split for `k ≥ 1`; for `k = 1` the quotient `H′` is zero.
pub fn hhat_split(k: u32) -> Result<QuillenSplit> {
    if k < 1 {
        return Err(Error::invalid("k", "the split sequence needs k >= 1"));
    }
    let hstar = ExactModule::irrep(k).dual();
    let hprime = if k >= 2 {
        ExactModule::irrep(k - 2)
    } else {
        ExactModule::zero()
    };
    let hhat = hstar.direct_sum(&hprime);
    let (ns, np) = (hstar.dim(), hprime.dim());
    let nh = ns + np;
    let i = QMat::from_fn(nh, ns, |r, c| if r == c { Rational64::one() } else { Rational64::zero() });
    let j = QMat::from_fn(np, nh, |r, c| {
        if c == ns + r {
            Rational64::one()
        } else {
            Rational64::zero()
        }
    });
    let p = QMat::from_fn(ns, nh, |r, c| if r == c { Rational64::one() } else { Rational64::zero() });
    Ok(QuillenSplit {
        k,
        hstar,
        hprime,
        hhat,
        i,
        j,
        p,
    })
}

/// `(h⁰(O(m)), h¹(O(m)))`.
pub fn cohomology_dims(m: i64) -> (u64, u64) {
    ((m + 1).max(0) as u64, (-m - 1).max(0) as u64)
}

/// `χ(O(m)) = m + 1`.
pub fn euler_characteristic(degrees: &[i64]) -> i64 {
    degrees
        .iter()
        .map(|&m| {
            let (h0, h1) = cohomology_dims(m);
            h0 as i64 - h1 as i64
        })
        .sum()
}

/// Splitting type of the kernel bundle `K` of `H ⊗ O → O(k)`.
///
/// Rank `k` and degree `−k` follow from the sequence; the evaluation map is an
/// isomorphism on `H⁰`, so all cohomology of `K` vanishes, and `O(−1)` is the
/// only line bundle with no cohomology.
pub fn k_bundle_split_type(k: u32) -> Result<Vec<i64>> {
    if k < 1 {
        return Err(Error::invalid("k", "need k >= 1"));
    }
    let rank = (k as i64 + 1) - 1;
    let degree = -(k as i64);
    let (h0_l, _) = cohomology_dims(k as i64);
    let (_, h1_trivial) = cohomology_dims(0);
    debug_assert_eq!(h0_l, k as u64 + 1);
    debug_assert_eq!(h1_trivial, 0);
    let acyclic: Vec<i64> = (-(k as i64) - 2..=k as i64 + 2)
        .filter(|&m| cohomology_dims(m) == (0, 0))
        .collect();
    let [a] = acyclic[..] else {
        unreachable!("exactly one acyclic line bundle");
    };
    if a * rank != degree {
        unreachable!("degree of K is -k");
    }
    Ok(vec![a; rank as usize])
}

/// Euler characteristics `(left, middle, right)` of a short exact sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCheck {
    pub sequence: &'static str,
    pub left: i64,
    pub middle: i64,
    pub right: i64,
}

impl EulerCheck {
    pub fn additive(&self) -> bool {
        self.middle == self.left + self.right
    }
}

/// Euler characteristics along `0 → K → H⊗O → O(k) → 0`, the `H⁰` sequence
/// `0 → H* → Ĥ → H′ → 0` and `0 → (K/S)* → K* → S* → 0` (`S = O(−k)` the
/// highest-weight line, `K/S` trivial).
pub fn euler_checks(k: u32) -> Result<Vec<EulerCheck>> {
    let kk = k as i64;
    let split = k_bundle_split_type(k)?;
    let dual: Vec<i64> = split.iter().map(|m| -m).collect();
    let split_dims = hhat_split(k)?;
    Ok(vec![
        EulerCheck {
            sequence: "K",
            left: euler_characteristic(&split),
            middle: euler_characteristic(&vec![0; k as usize + 1]),
            right: euler_characteristic(&[kk]),
        },
        EulerCheck {
            sequence: "H0",
            left: split_dims.hstar.dim() as i64,
            middle: euler_characteristic(&dual),
            right: split_dims.hprime.dim() as i64,
        },
        EulerCheck {
            sequence: "split2",
            left: euler_characteristic(&vec![0; (kk - 1).max(0) as usize]),
            middle: euler_characteristic(&dual),
            right: euler_characteristic(&[kk]),
        },
    ])
}

/// The diagonal isomorphism `K₀/S₀ → S^{k−2} C²` of modules over the Borel
/// subalgebra `⟨h, e⟩` at `ζ = 0`.
///
/// `K₀` (sections vanishing at 0) is spanned by `v_1, …, v_k` and the
/// highest-weight line `S₀` by `v_k`, so `K₀/S₀` has basis `v_1, …, v_{k−1}`;
/// `v_i ↦ t_i u_{i−1}` with `t_1 = 1`, `t_{i+1} = t_i (k−1−i)/(k−i)`.
pub fn k_mod_s_isomorphism(k: u32) -> Result<QMat> {
    if k < 2 {
        return Err(Error::invalid("k", "K/S is zero for k < 2"));
    }
    let n = k as usize - 1;
    let mut t = QMat::zeros(n, n);
    let mut cur = Rational64::one();
    for idx in 0..n {
        t[(idx, idx)] = cur;
        let i = idx as i64 + 1;
        if idx + 1 < n {
            cur *= Rational64::new(raising_constant(k - 2, idx as u32), raising_constant(k, i as u32));
        }
    }
    Ok(t)
}

/// The Borel action `(e, h)` of `S^k C²` induced on `K₀/S₀`.
pub fn k_mod_s_borel(k: u32) -> Result<(QMat, QMat)> {
    if k < 2 {
        return Err(Error::invalid("k", "K/S is zero for k < 2"));
    }
    let full = ExactModule::irrep(k);
    let n = k as usize - 1;
    let sub = |m: &QMat| QMat::from_fn(n, n, |r, c| m[(r + 1, c + 1)]);
    Ok((sub(&full.e), sub(&full.h)))
}

/// Check that [`k_mod_s_isomorphism`] intertwines `e` and `h`, that `K₀` is
/// Borel-stable and that `S₀ ⊂ K₀` is killed by `e`.
pub fn verify_k_mod_s(k: u32) -> Result<bool> {
    let full = ExactModule::irrep(k);
    let kk = k as usize;
    // e maps span(v_1..v_k) into itself and kills v_k; h is diagonal.
    let k0_stable = (1..=kk).all(|c| full.e[(0, c)].is_zero());
    let s0_highest = (0..=kk).all(|r| full.e[(r, kk)].is_zero());
    let (e_q, h_q) = k_mod_s_borel(k)?;
    let t = k_mod_s_isomorphism(k)?;
    let target = ExactModule::irrep(k - 2);
    Ok(k0_stable && s0_highest && &t * e_q == &target.e * &t && &t * h_q == &target.h * &t)
}

/// One row of the dimension table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionEntry {
    pub quantity: &'static str,
    pub value: u64,
}

/// Fibre dimensions of the direct images on a `k`-hypercomplex manifold of
/// dimension `n(k+1)`.
///
/// * `omega1_mc`: `Ω¹M^C`, rank `n(k+1)`.
/// * `e_star_h_prime`: `E* ⊗ H′`, rank `n(k−1)`.
/// * `tau_omega1_eta`: `τ_*Ω¹_η ≅ E* ⊗ Ĥ`, rank `2nk`, the sum of the two above.
/// * `h_minus`, `h_plus`: `H⁰(Λ²K*)`, `H⁰(S²K*)` with `K* = O(1)^k`.
/// * `tau_omega2_eta`: `(S²E* ⊗ H₋) ⊕ (Λ²E* ⊗ H₊)`.
/// * `s2e_lambda2h`, `lambda2e_s2h`: the two summands of `Λ²T*M`.
pub fn direct_image_dims(k: u32, n: u32) -> Result<Vec<DimensionEntry>> {
    if k < 1 || n < 1 {
        return Err(Error::invalid("k, n", "need k >= 1 and n >= 1"));
    }
    let (k, n) = (k as u64, n as u64);
    let split = k_bundle_split_type(k as u32)?;
    let hhat = split.iter().map(|&m| cohomology_dims(-m).0).sum::<u64>();
    let (h0_o2, _) = cohomology_dims(2);
    let h_minus = h0_o2 * k * (k - 1) / 2;
    let h_plus = h0_o2 * k * (k + 1) / 2;
    let s2 = |d: u64| d * (d + 1) / 2;
    let l2 = |d: u64| d * d.saturating_sub(1) / 2;
    let rows = [
        ("omega1_mc", n * (k + 1)),
        ("e_star_h_prime", n * (k - 1)),
        ("tau_omega1_eta", n * hhat),
        ("h_minus", h_minus),
        ("h_plus", h_plus),
        ("tau_omega2_eta", s2(n) * h_minus + l2(n) * h_plus),
        ("s2e_lambda2h", s2(n) * l2(k + 1)),
        ("lambda2e_s2h", l2(n) * s2(k + 1)),
        ("lambda2_t_star", l2(n * (k + 1))),
    ];
    Ok(rows
        .into_iter()
        .map(|(quantity, value)| DimensionEntry { quantity, value })
        .collect())
}

/// Look up one quantity of a dimension table.
pub fn lookup(table: &[DimensionEntry], quantity: &str) -> Option<u64> {
    table.iter().find(|e| e.quantity == quantity).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohomology_examples() {
        assert_eq!(cohomology_dims(4), (5, 0));
        assert_eq!(cohomology_dims(-4), (0, 3));
        assert_eq!(cohomology_dims(-1), (0, 0));
    }

    #[test]
    fn split_k1_is_degenerate() {
        let s = hhat_split(1).unwrap();
        assert_eq!(s.hprime.dim(), 0);
        assert_eq!(s.hhat.dim(), 2);
        assert!(s.verify().all_pass());
        assert!(hhat_split(0).is_err());
    }

    #[test]
    fn dual_module_relations() {
        for k in 0..6 {
            let d = ExactModule::irrep(k).dual();
            assert!(d.relations_hold());
            let expect: Vec<i64> = (0..=k as i64).map(|i| 2 * i - k as i64).collect();
            assert_eq!(d.weights, expect);
        }
    }

    #[test]
    fn k_split_type_k2() {
        assert_eq!(k_bundle_split_type(2).unwrap(), vec![-1, -1]);
    }

    #[test]
    fn k_mod_s_matches_hand_computation() {
        let t = k_mod_s_isomorphism(4).unwrap();
        assert_eq!(t[(0, 0)], Rational64::one());
        assert_eq!(t[(1, 1)], Rational64::new(2, 3));
        assert_eq!(t[(2, 2)], Rational64::new(1, 3));
        for k in 2..=9 {
            assert!(verify_k_mod_s(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn dims_k1() {
        let t = direct_image_dims(1, 3).unwrap();
        assert_eq!(lookup(&t, "h_minus"), Some(0));
        assert_eq!(lookup(&t, "h_plus"), Some(3));
        assert_eq!(lookup(&t, "tau_omega2_eta"), lookup(&t, "lambda2e_s2h"));
    }

    #[test]
    fn rank_exact_small() {
        let m = QMat::from_row_slice(2, 2, &[q(1), q(2), q(2), q(4)]);
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(rank_exact(&QMat::identity(3, 3)), 3);
        assert_eq!(rank_exact(&QMat::zeros(2, 3)), 0);
    }
}
