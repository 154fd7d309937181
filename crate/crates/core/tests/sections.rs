mod common;

use ghc_core::cp1_sections::*;
use ghc_core::linalg::{max_abs_diff, rank, CMat};
use ghc_core::sl2_rep::{cartan_at, irrep};
use ghc_core::{Complex64, ExtendedComplex, MobiusElement};
use proptest::prelude::*;
use rand::Rng;

/// `(g·s)(w) = F(g⁻¹(1, w))` with `F(x, y) = Σ c_i x^{k−i} y^i` and `g` acting
/// on column vectors `(x, y)`.
fn homogeneous_oracle(g: &MobiusElement, p: &Poly, w: Complex64) -> Complex64 {
    let x = g.d - g.b * w;
    let y = -g.c + g.a * w;
    let k = p.k() as i32;
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * x.powi(k - i as i32) * y.powi(i as i32))
        .sum()
}

fn random_section(rng: &mut impl Rng, k: usize, n: usize) -> SectionVec {
    SectionVec::new((0..n).map(|_| common::poly(rng, k)).collect()).unwrap()
}

fn random_sl2(rng: &mut impl Rng) -> MobiusElement {
    let (a, b, c) = (common::complex(rng) + 1.5, common::complex(rng), common::complex(rng));
    MobiusElement::new(a, b, c, (Complex64::from(1.0) + b * c) / a).unwrap()
}

#[test]
fn evaluation_examples() {
    let s = SectionVec::new(vec![Poly::from_real(&[1.0, 2.0, 0.0])]).unwrap();
    assert_eq!(s.eval(ExtendedComplex::finite(1.0, 0.0)), vec![Complex64::from(3.0)]);
    assert_eq!(s.eval(ExtendedComplex::zero()), vec![Complex64::from(1.0)]);
    assert_eq!(s.eval(ExtendedComplex::Infinity), vec![Complex64::from(0.0)]);
}

#[test]
fn action_matches_homogeneous_model() {
    let mut rng = common::rng(31);
    for k in 0..=5 {
        for _ in 0..4 {
            let g = random_sl2(&mut rng);
            let s = random_section(&mut rng, k, 2);
            let moved = mobius_act(&g, &s);
            for _ in 0..3 {
                let z = common::complex(&mut rng);
                let w = match g.apply(ExtendedComplex::Finite(z)) {
                    ExtendedComplex::Finite(w) => w,
                    ExtendedComplex::Infinity => continue,
                };
                for c in 0..2 {
                    let direct = moved.polys()[c].eval(ExtendedComplex::Finite(w));
                    let oracle = homogeneous_oracle(&g, &s.polys()[c], w);
                    assert!((direct - oracle).norm() < 1e-10 * (1.0 + oracle.norm()));
                    let via_cocycle = cocycle(&g, k, z) * s.polys()[c].eval(ExtendedComplex::Finite(z));
                    assert!((direct - via_cocycle).norm() < 1e-9 * (1.0 + direct.norm()));
                }
            }
        }
    }
}

#[test]
fn action_is_a_homomorphism() {
    let mut rng = common::rng(32);
    for k in 1..=4 {
        let (g, h) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let s = random_section(&mut rng, k, 3);
        let lhs = mobius_act(&g, &mobius_act(&h, &s));
        let rhs = mobius_act(&(g * h), &s);
        assert!(lhs.max_diff(&rhs) < 1e-10);
        assert!(mobius_act(&MobiusElement::identity(), &s).max_diff(&s) == 0.0);
    }
}

#[test]
fn action_agrees_with_lie_algebra_integration() {
    let mut rng = common::rng(33);
    for k in 0..=5 {
        for _ in 0..3 {
            let g = random_sl2(&mut rng);
            let a = sym_power_matrix(k, &g);
            let b = irrep(k as u32).group_matrix(&g).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-9 * (1.0 + b.norm()));
        }
    }
}

#[test]
fn real_structure_examples() {
    // k = 4: real iff z_i = (−1)^i conj(z_{4−i}).
    let spec = RealStructureSpec::standard(4, 1).unwrap();
    let z = |re: f64, im: f64| Complex64::new(re, im);
    let real = Poly::new(vec![z(1.0, 2.0), z(0.5, -1.0), z(3.0, 0.0), z(-0.5, -1.0), z(1.0, -2.0)]);
    assert!(is_real(&SectionVec::new(vec![real]).unwrap(), &spec, 1e-14).unwrap());
    // k = 2: real iff z₂ = conj(z₀) and z₁ is imaginary.
    let spec2 = RealStructureSpec::standard(2, 1).unwrap();
    let not_real = Poly::new(vec![z(1.0, 0.0), z(0.0, 0.7), z(-1.0, 0.0)]);
    assert!(!is_real(&SectionVec::new(vec![not_real]).unwrap(), &spec2, 1e-14).unwrap());
    let real2 = Poly::new(vec![z(1.0, 0.3), z(0.0, 0.7), z(1.0, -0.3)]);
    assert!(is_real(&SectionVec::new(vec![real2]).unwrap(), &spec2, 1e-14).unwrap());
    assert!(is_real(&SectionVec::zero(3, 2), &RealStructureSpec::standard(3, 2).unwrap(), 0.0).unwrap());
    let mut rng = common::rng(34);
    assert!(!is_real(&random_section(&mut rng, 2, 1), &spec2, 1e-6).unwrap());
    assert!(apply_real_structure(&SectionVec::zero(3, 1), &RealStructureSpec::identity(3, 1)).is_err());
}

#[test]
fn real_structure_is_an_involution_commuting_with_su2() {
    let mut rng = common::rng(35);
    for k in 2..=5 {
        let n = if k % 2 == 0 { 3 } else { 2 };
        let spec = RealStructureSpec::standard(k, n).unwrap();
        for _ in 0..3 {
            let s = random_section(&mut rng, k, n);
            let twice = apply_real_structure(&apply_real_structure(&s, &spec).unwrap(), &spec).unwrap();
            assert!(twice.max_diff(&s) < 1e-15);
            let g = MobiusElement::su2(common::complex(&mut rng), common::complex(&mut rng));
            let lhs = apply_real_structure(&mobius_act(&g, &s), &spec).unwrap();
            let rhs = mobius_act(&g, &apply_real_structure(&s, &spec).unwrap());
            assert!(lhs.max_diff(&rhs) < 1e-10);
        }
    }
}

#[test]
fn filtration_dimensions_and_nesting() {
    let mut rng = common::rng(36);
    for k in 1..=4 {
        for n in 1..=2 {
            let qs = [
                ExtendedComplex::zero(),
                ExtendedComplex::Infinity,
                ExtendedComplex::Finite(common::complex(&mut rng)),
            ];
            for q in qs {
                let frame = cartan_at(&irrep(k as u32), q).unwrap();
                let (eq, hq) = (lift_components(n, &frame.e), lift_components(n, &frame.h));
                for m in 0..=k + 1 {
                    let b = weight_filtration_at(k, n, q, m).unwrap();
                    assert_eq!(b.ncols(), n * (k + 1 - m));
                    if b.ncols() == 0 {
                        continue;
                    }
                    assert_eq!(rank(&b, 1e-10), b.ncols());
                    for x in [&eq, &hq] {
                        let joined = CMat::from_columns(
                            &b.column_iter().chain((x * &b).column_iter()).collect::<Vec<_>>(),
                        );
                        assert_eq!(rank(&joined, 1e-9), b.ncols(), "k={k} n={n} m={m}");
                    }
                    if m > 0 {
                        let bigger = weight_filtration_at(k, n, q, m - 1).unwrap();
                        let joined = CMat::from_columns(
                            &bigger.column_iter().chain(b.column_iter()).collect::<Vec<_>>(),
                        );
                        assert_eq!(rank(&joined, 1e-9), bigger.ncols());
                    }
                }
                // Order one at q: the sections vanishing at q.
                let b = weight_filtration_at(k, n, q, 1).unwrap();
                for col in b.column_iter() {
                    let s = SectionVec::from_flat(k, n, &col.into_owned()).unwrap();
                    assert!(s.eval(q).iter().all(|v| v.norm() < 1e-10));
                }
            }
        }
    }
    assert!(weight_filtration_at(2, 1, ExtendedComplex::zero(), 4).is_err());
}

proptest! {
    #[test]
    fn diagonal_scales_by_weights(k in 0usize..7, re in 0.2f64..3.0, im in -2.0f64..2.0) {
        let t = Complex64::new(re, im);
        let g = MobiusElement::diagonal(t);
        let s = SectionVec::new(vec![Poly::new((0..=k).map(|i| Complex64::new(i as f64 + 1.0, 0.5)).collect())]).unwrap();
        let moved = mobius_act(&g, &s);
        for i in 0..=k {
            let expect = s.polys()[0].coeffs()[i] * t.powi(2 * i as i32 - k as i32);
            prop_assert!((moved.polys()[0].coeffs()[i] - expect).norm() < 1e-9 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn flat_layout_round_trips(seed in 0u64..500, k in 0usize..5, n in 1usize..4) {
        let mut rng = common::rng(seed);
        let s = random_section(&mut rng, k, n);
        let back = SectionVec::from_flat(k, n, &s.to_flat()).unwrap();
        prop_assert_eq!(back, s);
    }
}
