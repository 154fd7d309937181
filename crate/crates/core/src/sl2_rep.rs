//! sl2-modules: the irreducibles `S^k C²`, Cartan frames at a point of CP¹,
//! Clebsch–Gordan multiplicities by weight counting, isotypic projectors and
//! the invariant bilinear forms.
//!
//! Basis convention: in `S^k C²` the vector `v_i` is the coefficient of `ζ^i`
//! of a degree-`k` section and has weight `2i − k`. The module structure is
//! the derivative of the action `F ↦ F ∘ g⁻¹` on binary forms
//! `F(x, y) = Σ c_i x^{k−i} y^i` (see [`crate::cp1_sections::sym_power_matrix`]),
//! which gives
//!
//! ```text
//! e v_i = −(k − i) v_{i+1},   f v_i = −i v_{i−1},   h v_i = (2i − k) v_i.
//! ```

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::linalg::{commutator, exp_nilpotent, max_abs, max_abs_diff, rank, CMat};
use crate::mobius::{ExtendedComplex, MobiusElement};
use crate::{Error, Result};

/// `e v_i = raising_constant(k, i) v_{i+1}` in `S^k C²`.
pub fn raising_constant(k: u32, i: u32) -> i64 {
    -((k - i) as i64)
}

/// `f v_i = lowering_constant(k, i) v_{i−1}` in `S^k C²`.
pub fn lowering_constant(_k: u32, i: u32) -> i64 {
    -(i as i64)
}

/// A finite-dimensional sl2-module given by the matrices of `e, f, h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Module {
    e: CMat,
    f: CMat,
    h: CMat,
    weights: Vec<i64>,
}

impl Sl2Module {
    /// Build from matrices. `weights` lists the diagonal of `h` when `h` is
    /// diagonal, and the `h`-spectrum in some order otherwise.
    pub fn from_parts(e: CMat, f: CMat, h: CMat, weights: Vec<i64>) -> Result<Self> {
        let n = weights.len();
        for (name, m) in [("e", &e), ("f", &f), ("h", &h)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(alloc::format!(
                    "{name} is {:?}, expected {n}x{n}",
                    m.shape()
                )));
            }
        }
        Ok(Sl2Module { e, f, h, weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn e(&self) -> &CMat {
        &self.e
    }

    pub fn f(&self) -> &CMat {
        &self.f
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Max-norm violation of `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn relations_residual(&self) -> f64 {
        let two = Complex64::from(2.0);
        let r1 = max_abs_diff(&commutator(&self.h, &self.e), &(&self.e * two));
        let r2 = max_abs_diff(&commutator(&self.h, &self.f), &(&self.f * -two));
        let r3 = max_abs_diff(&commutator(&self.e, &self.f), &self.h);
        r1.max(r2).max(r3)
    }

    /// Whether `h` is exactly `diag(weights)`.
    pub fn is_weight_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let expect = if i == j { self.weights[i] as f64 } else { 0.0 };
                self.h[(i, j)] == Complex64::from(expect)
            })
        })
    }

    /// `X ↦ X ⊗ 1 + 1 ⊗ X`; index `(a, b)` maps to `a · dim(other) + b`.
    pub fn tensor(&self, other: &Sl2Module) -> Sl2Module {
        let i1 = CMat::identity(self.dim(), self.dim());
        let i2 = CMat::identity(other.dim(), other.dim());
        let lift = |x: &CMat, y: &CMat| x.kronecker(&i2) + i1.kronecker(y);
        let mut weights = Vec::with_capacity(self.dim() * other.dim());
        for &w1 in &self.weights {
            for &w2 in &other.weights {
                weights.push(w1 + w2);
            }
        }
        Sl2Module {
            e: lift(&self.e, &other.e),
            f: lift(&self.f, &other.f),
            h: lift(&self.h, &other.h),
            weights,
        }
    }

    /// The dual module `X ↦ −Xᵀ` in the dual basis.
    pub fn dual(&self) -> Sl2Module {
        Sl2Module {
            e: -self.e.transpose(),
            f: -self.f.transpose(),
            h: -self.h.transpose(),
            weights: self.weights.iter().map(|w| -w).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Sl2Module) -> Sl2Module {
        let n = self.dim() + other.dim();
        let block = |x: &CMat, y: &CMat| {
            let mut m = CMat::zeros(n, n);
            m.view_mut((0, 0), x.shape()).copy_from(x);
            m.view_mut((x.nrows(), x.ncols()), y.shape()).copy_from(y);
            m
        };
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Sl2Module {
            e: block(&self.e, &other.e),
            f: block(&self.f, &other.f),
            h: block(&self.h, &other.h),
            weights,
        }
    }

    /// Casimir `ef + fe + h²/2`; acts on `S^j` by `j(j+2)/2`.
    pub fn casimir(&self) -> CMat {
        &self.e * &self.f + &self.f * &self.e + &self.h * &self.h * Complex64::from(0.5)
    }

    /// The group element `ρ(g)` integrating this module.
    ///
    /// Uses the Gauss factorisation `g = L(c/a) · diag(a, 1/a) · U(b/a)`, whose
    /// factors exponentiate the nilpotent `f`, the weights, and the nilpotent
    /// `e`; when `|a| < |c|` the Weyl element is split off first. Requires a
    /// weight-diagonal `h`.
    pub fn group_matrix(&self, g: &MobiusElement) -> Result<CMat> {
        if !self.is_weight_diagonal() {
            return Err(Error::invalid(
                "module",
                "group action needs a weight-diagonal h",
            ));
        }
        if g.a.norm() >= g.c.norm() {
            Ok(self.gauss_factor(g))
        } else {
            // g = w · (w⁻¹ g), w⁻¹ g = [[c, d], [−a, −b]].
            let rest = MobiusElement {
                a: g.c,
                b: g.d,
                c: -g.a,
                d: -g.b,
            };
            Ok(self.weyl_matrix() * self.gauss_factor(&rest))
        }
    }

    fn gauss_factor(&self, g: &MobiusElement) -> CMat {
        let lower = exp_nilpotent(&(&self.f * (g.c / g.a)));
        let upper = exp_nilpotent(&(&self.e * (g.b / g.a)));
        let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.weights.iter().map(|&w| g.a.powi(w as i32)),
        ));
        lower * diag * upper
    }

    /// `ρ([[0, −1], [1, 0]]) = exp(−e) exp(f) exp(−e)`.
    fn weyl_matrix(&self) -> CMat {
        let m = exp_nilpotent(&-&self.e);
        &m * exp_nilpotent(&self.f) * &m
    }
}

/// `S^k C²` in the weight-ordered monomial basis.
pub fn irrep(k: u32) -> Sl2Module {
    let n = k as usize + 1;
    let mut e = CMat::zeros(n, n);
    let mut f = CMat::zeros(n, n);
    let mut h = CMat::zeros(n, n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let w = 2 * i as i64 - k as i64;
        h[(i, i)] = Complex64::from(w as f64);
        weights.push(w);
        if i + 1 < n {
            e[(i + 1, i)] = Complex64::from(raising_constant(k, i as u32) as f64);
        }
        if i > 0 {
            f[(i - 1, i)] = Complex64::from(lowering_constant(k, i as u32) as f64);
        }
    }
    Sl2Module { e, f, h, weights }
}

/// `(e_q, f_q, h_q)`: the sl2-triple adapted to the Borel subgroup at `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanFrame {
    pub e: CMat,
    pub f: CMat,
    pub h: CMat,
}

/// Conjugate the module's triple by `ρ(g_q)`, `g_q` from
/// [`MobiusElement::rotation_to`].
pub fn cartan_at(module: &Sl2Module, q: ExtendedComplex) -> Result<CartanFrame> {
    let g = MobiusElement::rotation_to(q);
    let r = module.group_matrix(&g)?;
    let r_inv = module.group_matrix(&g.inverse())?;
    Ok(CartanFrame {
        e: &r * module.e() * &r_inv,
        f: &r * module.f() * &r_inv,
        h: &r * module.h() * &r_inv,
    })
}

/// Which piece of `S^{k1} ⊗ S^{k2}` to decompose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Full,
    Sym2,
    Alt2,
}

impl Part {
    pub fn name(self) -> &'static str {
        match self {
            Part::Full => "full",
            Part::Sym2 => "sym2",
            Part::Alt2 => "alt2",
        }
    }
}

impl core::str::FromStr for Part {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Part::Full),
            "sym2" => Ok(Part::Sym2),
            "alt2" => Ok(Part::Alt2),
            other => Err(Error::invalid(
                "part",
                alloc::format!("expected full, sym2 or alt2, got {other:?}"),
            )),
        }
    }
}

fn check_part(k1: u32, k2: u32, part: Part) -> Result<()> {
    if part != Part::Full && k1 != k2 {
        return Err(Error::invalid(
            "part",
            alloc::format!("{} needs k1 = k2 (got {k1}, {k2})", part.name()),
        ));
    }
    Ok(())
}

/// Weights of the basis of the chosen part, with repetition.
pub fn weight_multiset(k1: u32, k2: u32, part: Part) -> Result<Vec<i64>> {
    check_part(k1, k2, part)?;
    let w = |k: u32, i: u32| 2 * i as i64 - k as i64;
    let mut out = Vec::new();
    for a in 0..=k1 {
        for b in 0..=k2 {
            let keep = match part {
                Part::Full => true,
                Part::Sym2 => a <= b,
                Part::Alt2 => a < b,
            };
            if keep {
                out.push(w(k1, a) + w(k2, b));
            }
        }
    }
    Ok(out)
}

/// Multiplicities of `S^j` in the chosen part, highest `j` first; zero
/// multiplicities are omitted.
///
/// Counts weights: `mult(j) = #(weight j) − #(weight j + 2)`.
pub fn clebsch_multiplicities(k1: u32, k2: u32, part: Part) -> Result<Vec<(u32, usize)>> {
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for w in weight_multiset(k1, k2, part)? {
        *count.entry(w).or_default() += 1;
    }
    let n = |w: i64| count.get(&w).copied().unwrap_or(0);
    let top = (k1 + k2) as i64;
    let mut out = Vec::new();
    let mut j = top;
    while j >= 0 {
        let m = n(j) - n(j + 2);
        if m > 0 {
            out.push((j as u32, m));
        }
        j -= 1;
    }
    Ok(out)
}

/// The flip `u ⊗ v ↦ v ⊗ u` on `S^k ⊗ S^k`.
pub fn swap_matrix(k: u32) -> CMat {
    let n = k as usize + 1;
    let mut s = CMat::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            s[(b * n + a, a * n + b)] = Complex64::from(1.0);
        }
    }
    s
}

/// The projector of `S^{k1} ⊗ S^{k2}` onto the `S^j`-isotypic component of
/// the chosen part, as a matrix on the full tensor space.
///
/// Built as a Lagrange polynomial in the Casimir; for `sym2`/`alt2` it is
/// multiplied by `(1 ± swap)/2`, which commutes with it.
pub fn isotypic_projector(k1: u32, k2: u32, j: u32, part: Part) -> Result<CMat> {
    let mults = clebsch_multiplicities(k1, k2, part)?;
    if !mults.iter().any(|&(jj, m)| jj == j && m > 0) {
        return Err(Error::ZeroMultiplicity {
            j,
            part: part.name(),
        });
    }
    let module = irrep(k1).tensor(&irrep(k2));
    let cas = module.casimir();
    let dim = module.dim();
    let eig = |j: u32| (j as f64) * (j as f64 + 2.0) / 2.0;
    let mut p = CMat::identity(dim, dim);
    for (other, _) in clebsch_multiplicities(k1, k2, Part::Full)? {
        if other == j {
            continue;
        }
        let shifted = &cas - CMat::identity(dim, dim) * Complex64::from(eig(other));
        p = p * shifted / Complex64::from(eig(j) - eig(other));
    }
    let half = Complex64::from(0.5);
    match part {
        Part::Full => Ok(p),
        Part::Sym2 => Ok(p * (CMat::identity(dim, dim) + swap_matrix(k1)) * half),
        Part::Alt2 => Ok(p * (CMat::identity(dim, dim) - swap_matrix(k1)) * half),
    }
}

/// An sl2-invariant bilinear form on `S^k C²`, `B(u, v) = uᵀ M v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingForm {
    pub k: u32,
    pub matrix: CMat,
}

impl PairingForm {
    pub fn is_symmetric(&self, tol: f64) -> bool {
        max_abs_diff(&self.matrix, &self.matrix.transpose()) <= tol
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        max_abs_diff(&self.matrix, &-self.matrix.transpose()) <= tol
    }

    /// Max over `X ∈ {e, f, h}` of `|Xᵀ M + M X|`.
    pub fn invariance_residual(&self, module: &Sl2Module) -> f64 {
        invariance_residual(&self.matrix, module)
    }
}

/// Max over `X ∈ {e, f, h}` of `|Xᵀ M + M X|` for the bilinear form `M`.
pub fn invariance_residual(m: &CMat, module: &Sl2Module) -> f64 {
    [module.e(), module.f(), module.h()]
        .into_iter()
        .map(|x| max_abs(&(x.transpose() * m + m * x)))
        .fold(0.0, f64::max)
}

/// The invariant form with `B(v_i, v_{k−i}) = (−1)^i / C(k, i)`, so the two
/// extreme weight vectors pair to 1.
pub fn invariant_pairing(k: u32) -> PairingForm {
    let n = k as usize + 1;
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        m[(i, n - 1 - i)] =
            Complex64::from(sign / crate::linalg::binomial(k as u64, i as u64) as f64);
    }
    PairingForm { k, matrix: m }
}

fn check_fibre_form(n: usize, omega_e: &CMat) -> Result<()> {
    if omega_e.shape() != (n, n) {
        return Err(Error::DimensionMismatch(alloc::format!(
            "omega_E is {:?}, expected {n}x{n}",
            omega_e.shape()
        )));
    }
    if n % 2 == 1 {
        return Err(Error::invalid("n", "odd fibre dimension carries no symplectic form"));
    }
    if max_abs_diff(omega_e, &-omega_e.transpose()) > crate::EXACT_TOL {
        return Err(Error::invalid("omega_E", "not antisymmetric"));
    }
    if rank(omega_e, 1e-12) < n {
        return Err(Error::invalid("omega_E", "degenerate"));
    }
    Ok(())
}

/// `ω_E ⊗ ω_H` on `Cⁿ ⊗ S^k C²` for odd `k`: a symmetric nondegenerate form.
pub fn canonical_metric(k: u32, n: usize, omega_e: &CMat) -> Result<CMat> {
    if k % 2 == 0 {
        return Err(Error::invalid(
            "k",
            "even k gives a 2-form; use canonical_symplectic",
        ));
    }
    check_fibre_form(n, omega_e)?;
    Ok(omega_e.kronecker(&invariant_pairing(k).matrix))
}

/// `ω_E ⊗ ω_H` on `Cⁿ ⊗ S^k C²` for even `k`: an antisymmetric nondegenerate
/// form.
pub fn canonical_symplectic(k: u32, n: usize, omega_e: &CMat) -> Result<CMat> {
    if k % 2 == 1 {
        return Err(Error::invalid(
            "k",
            "odd k gives a symmetric form; use canonical_metric",
        ));
    }
    check_fibre_form(n, omega_e)?;
    Ok(omega_e.kronecker(&invariant_pairing(k).matrix))
}

/// The standard symplectic form on `Cⁿ` (blocks `[[0, 1], [−1, 0]]`).
pub fn standard_symplectic(n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for b in 0..n / 2 {
        m[(2 * b, 2 * b + 1)] = Complex64::from(1.0);
        m[(2 * b + 1, 2 * b)] = Complex64::from(-1.0);
    }
    m
}

/// The module on the middle weight band of `S^k C²` obtained by dropping the
/// `l` highest and `l` lowest weight spaces.
///
/// It carries the standard structure constants of `S^{k−2l} C²`: restricting
/// `e, f` to the band breaks `[e, f] = h` at its edges.
pub fn truncate_module(k: u32, l: u32) -> Result<Sl2Module> {
    if 2 * l > k {
        return Err(Error::invalid(
            "l",
            alloc::format!("need 2l <= k, got k = {k}, l = {l}"),
        ));
    }
    Ok(irrep(k - 2 * l))
}

/// Indices of the basis vectors of `S^k C²` kept by [`truncate_module`].
pub fn weight_band(k: u32, l: u32) -> core::ops::Range<usize> {
    l as usize..(k - l) as usize + 1
}

/// Rank of a projector, read off its trace.
pub fn projector_rank(p: &CMat) -> usize {
    Float::round(p.trace().re) as usize
}

/// Identity matrix of the given size (convenience for completeness checks).
pub fn identity(n: usize) -> CMat {
    DMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::Zero;

    #[test]
    fn irrep_k1_is_the_dual_standard_pair() {
        let m = irrep(1);
        assert_eq!(m.weights(), &[-1, 1]);
        assert_eq!(m.e()[(1, 0)], Complex64::from(-1.0));
        assert_eq!(m.f()[(0, 1)], Complex64::from(-1.0));
        assert_eq!(m.f(), &m.e().transpose());
        assert_eq!(m.relations_residual(), 0.0);
    }

    #[test]
    fn irrep_relations_exact() {
        for k in 0..=10 {
            assert_eq!(irrep(k).relations_residual(), 0.0, "k = {k}");
        }
        assert_eq!(irrep(2).weights(), &[-2, 0, 2]);
    }

    #[test]
    fn cartan_at_zero_is_identity_and_infinity_negates_h() {
        let m = irrep(3);
        let f0 = cartan_at(&m, ExtendedComplex::zero()).unwrap();
        assert!(max_abs_diff(&f0.h, m.h()) < 1e-15);
        assert!(max_abs_diff(&f0.e, m.e()) < 1e-15);
        let finf = cartan_at(&m, ExtendedComplex::Infinity).unwrap();
        assert!(max_abs_diff(&finf.h, &-m.h()) < 1e-12);
    }

    #[test]
    fn casimir_on_irreducible() {
        for k in 0..6u32 {
            let m = irrep(k);
            let c = m.casimir();
            let expect = CMat::identity(m.dim(), m.dim())
                * Complex64::from(k as f64 * (k as f64 + 2.0) / 2.0);
            assert!(max_abs_diff(&c, &expect) < 1e-12);
        }
    }

    #[test]
    fn clebsch_small_cases() {
        assert_eq!(
            clebsch_multiplicities(1, 1, Part::Full).unwrap(),
            vec![(2, 1), (0, 1)]
        );
        assert_eq!(clebsch_multiplicities(1, 1, Part::Sym2).unwrap(), vec![(2, 1)]);
        assert_eq!(clebsch_multiplicities(1, 1, Part::Alt2).unwrap(), vec![(0, 1)]);
        assert!(clebsch_multiplicities(1, 2, Part::Sym2).is_err());
    }

    #[test]
    fn projector_errors_on_missing_component() {
        let err = isotypic_projector(1, 1, 2, Part::Alt2).unwrap_err();
        assert!(matches!(err, Error::ZeroMultiplicity { j: 2, .. }));
        assert!(isotypic_projector(2, 2, 1, Part::Full).is_err());
    }

    #[test]
    fn alt2_invariant_line() {
        let p = isotypic_projector(1, 1, 0, Part::Alt2).unwrap();
        assert_eq!(projector_rank(&p), 1);
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
    }

    #[test]
    fn pairing_k1_is_epsilon() {
        let p = invariant_pairing(1);
        let mut eps = CMat::zeros(2, 2);
        eps[(0, 1)] = Complex64::from(1.0);
        eps[(1, 0)] = Complex64::from(-1.0);
        assert_eq!(p.matrix, eps);
        assert_eq!(p.invariance_residual(&irrep(1)), 0.0);
    }

    #[test]
    fn metric_rejects_even_k_and_bad_forms() {
        let eps = standard_symplectic(2);
        assert!(canonical_metric(2, 2, &eps).is_err());
        assert!(canonical_symplectic(1, 2, &eps).is_err());
        assert!(canonical_metric(1, 2, &CMat::identity(2, 2)).is_err());
        assert!(canonical_metric(1, 2, &CMat::zeros(2, 2)).is_err());
        assert!(canonical_metric(1, 3, &standard_symplectic(3)).is_err());
    }

    #[test]
    fn metric_smallest_case() {
        let g = canonical_metric(1, 2, &standard_symplectic(2)).unwrap();
        assert_eq!(rank(&g, 1e-12), 4);
        assert!(max_abs_diff(&g, &g.transpose()) == 0.0);
        let w = canonical_symplectic(2, 2, &standard_symplectic(2)).unwrap();
        assert!(max_abs_diff(&w, &-w.transpose()) == 0.0);
        assert_eq!(rank(&w, 1e-12), 6);
    }

    #[test]
    fn truncation() {
        let t = truncate_module(3, 1).unwrap();
        assert_eq!(t.weights(), &[-1, 1]);
        let t = truncate_module(4, 2).unwrap();
        assert_eq!(t.dim(), 1);
        assert!(t.e()[(0, 0)].is_zero() && t.h()[(0, 0)].is_zero());
        assert_eq!(truncate_module(5, 0).unwrap(), irrep(5));
        assert!(truncate_module(3, 2).is_err());
        assert_eq!(weight_band(6, 2), 2..5);
    }

    #[test]
    fn group_matrix_needs_diagonal_h() {
        let m = irrep(2);
        let frame = cartan_at(&m, ExtendedComplex::finite(1.0, 0.0)).unwrap();
        let rotated =
            Sl2Module::from_parts(frame.e, frame.f, frame.h, m.weights().to_vec()).unwrap();
        assert!(rotated.group_matrix(&MobiusElement::identity()).is_err());
    }
}
