mod common;

use ghc_core::linalg::{max_abs_diff, CMat};
use ghc_core::monopole_r5::*;
use ghc_core::{Complex64, ExtendedComplex, MobiusElement};
use rand::Rng;

fn monomials(maxdeg: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for a in 0..=maxdeg {
        for b in 0..=maxdeg - a {
            for c in 0..=maxdeg - a - b {
                for d in 0..=maxdeg - a - b - c {
                    for e in 0..=maxdeg - a - b - c - d {
                        out.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    out
}

fn random_field(rng: &mut impl Rng, m: usize, maxdeg: u32) -> MatPolyField {
    let mut f = MatPolyField::zero(m, maxdeg);
    for e in monomials(maxdeg) {
        f.insert(e, common::cmat(rng, m, m)).unwrap();
    }
    f
}

fn random_fields(rng: &mut impl Rng, m: usize, maxdeg: u32) -> GaugeField5 {
    GaugeField5::new(
        core::array::from_fn(|_| random_field(rng, m, maxdeg)),
        core::array::from_fn(|_| random_field(rng, m, maxdeg)),
    )
    .unwrap()
}

/// `1 + N` with `N` strictly upper triangular and polynomial of degree
/// `deg`.
fn random_unipotent(rng: &mut impl Rng, m: usize, deg: u32) -> MatPolyField {
    let mut n = random_field(rng, m, deg);
    let mask = CMat::from_fn(m, m, |r, c| Complex64::from(if c > r { 1.0 } else { 0.0 }));
    let terms: Vec<(Exponents, CMat)> = n.terms().iter().map(|(e, c)| (*e, c.component_mul(&mask))).collect();
    n = MatPolyField::zero(m, deg);
    for (e, c) in terms {
        n.insert(e, c).unwrap();
    }
    MatPolyField::identity(m, deg).add(&n)
}

fn same_up_to_sign(a: &MatPolyField, b: &MatPolyField) -> bool {
    a.sub(b).max_coeff_norm() < 1e-12 || a.add(b).max_coeff_norm() < 1e-12
}

#[test]
fn zero_and_constant_abelian_fields_are_flat() {
    let qs = default_q_samples();
    assert_eq!(monopole_residual(&GaugeField5::zero(2, 2), &qs).unwrap(), 0.0);
    let mut rng = common::rng(41);
    let konst = |rng: &mut rand_chacha::ChaCha8Rng| MatPolyField::constant(common::cmat(rng, 1, 1), 2).unwrap();
    let f = GaugeField5::new(
        core::array::from_fn(|_| konst(&mut rng)),
        core::array::from_fn(|_| konst(&mut rng)),
    )
    .unwrap();
    for r in residuals_at(&f, &qs) {
        assert_eq!(r, 0.0);
    }
    assert!(monopole_residual(&f, &[]).is_err());
}

#[test]
fn q0_formula() {
    let mut rng = common::rng(42);
    let f = random_fields(&mut rng, 2, 2);
    let no_phi = GaugeField5::new(f.a.clone(), core::array::from_fn(|_| MatPolyField::zero(2, 2))).unwrap();
    let conn = alpha_connection_at_q(&no_phi, ExtendedComplex::zero());
    for l in 0..4 {
        assert_eq!(conn[l].sub(&f.a[l + 1]).max_coeff_norm(), 0.0);
    }
    let phi: [MatPolyField; 3] = core::array::from_fn(|_| MatPolyField::constant(common::cmat(&mut rng, 2, 2), 0).unwrap());
    let only_phi = GaugeField5::new(core::array::from_fn(|_| MatPolyField::zero(2, 0)), phi.clone()).unwrap();
    let conn = alpha_connection_at_q(&only_phi, ExtendedComplex::zero());
    for l in 0..3 {
        assert!(conn[l].sub(&phi[l]).max_coeff_norm() < 1e-15);
    }
    assert_eq!(conn[3].max_coeff_norm(), 0.0);
}

#[test]
fn infinity_mirrors_zero() {
    let mut rng = common::rng(43);
    let konst = |rng: &mut rand_chacha::ChaCha8Rng| MatPolyField::constant(common::cmat(rng, 2, 2), 0).unwrap();
    let a: [MatPolyField; 5] = core::array::from_fn(|_| konst(&mut rng));
    let phi: [MatPolyField; 3] = core::array::from_fn(|_| konst(&mut rng));
    let zero = || MatPolyField::zero(2, 0);
    let conn = alpha_connection_at_q(&GaugeField5::new(a.clone(), core::array::from_fn(|_| zero())).unwrap(), ExtendedComplex::Infinity);
    for l in 0..4 {
        assert!(same_up_to_sign(&conn[l], &a[3 - l]), "component {l}");
    }
    // The Weyl element reverses the Higgs triple and rescales it through
    // the pairing coefficients (1, −1/3, 1/3).
    let conn = alpha_connection_at_q(&GaugeField5::new(core::array::from_fn(|_| zero()), phi.clone()).unwrap(), ExtendedComplex::Infinity);
    let expect = [
        phi[2].scale(Complex64::from(3.0)),
        phi[1].clone(),
        phi[0].scale(Complex64::from(1.0 / 3.0)),
    ];
    for l in 0..3 {
        assert!(same_up_to_sign(&conn[l], &expect[l]), "component {l}");
    }
    assert_eq!(conn[3].max_coeff_norm(), 0.0);
}

#[test]
fn pure_gauge_is_flat_everywhere() {
    let mut rng = common::rng(44);
    let qs = default_q_samples();
    for (m, deg) in [(2, 1), (2, 2), (3, 1)] {
        let g = random_unipotent(&mut rng, m, deg);
        let f = pure_gauge(&g).unwrap();
        assert!(full_curvature(&f.a).iter().all(|(_, c)| c.max_coeff_norm() < 1e-12));
        let r = monopole_residual(&f, &qs).unwrap();
        assert!(r < 1e-10, "m={m} deg={deg}: {r:e}");
    }
}

#[test]
fn generic_fields_are_not_flat() {
    let mut rng = common::rng(45);
    let f = random_fields(&mut rng, 2, 2);
    assert!(monopole_residual(&f, &default_q_samples()).unwrap() > 1e-3);
}

#[test]
fn gauge_action_group_law_and_identity() {
    let mut rng = common::rng(46);
    let f = random_fields(&mut rng, 3, 1);
    let id = MatPolyField::identity(3, 0);
    assert!(gauge_act_fields(&f, &id).unwrap().max_diff(&f) < 1e-15);
    let g = random_unipotent(&mut rng, 3, 1);
    let gi = unipotent_inverse(&g, 1e-12).unwrap();
    let back = gauge_act_fields(&gauge_act_fields(&f, &g).unwrap(), &gi).unwrap();
    assert!(back.max_diff(&f) < 1e-12);
    let not_unipotent = MatPolyField::identity(3, 0).scale(Complex64::from(2.0));
    assert!(gauge_act_fields(&f, &not_unipotent).is_err());
}

#[test]
fn curvature_is_gauge_covariant() {
    let mut rng = common::rng(47);
    let qs = default_q_samples();
    for m in [2, 3] {
        let f = random_fields(&mut rng, m, 1);
        let g = random_unipotent(&mut rng, m, 1);
        let defects = covariance_defects(&f, &g, &qs).unwrap();
        for (q, d) in qs.iter().zip(&defects) {
            assert!(*d < 1e-9, "m={m} q={q:?}: {d:e}");
        }
        assert_eq!(covariance_defect(&f, &g, qs[3]).unwrap(), defects[3]);
        // Flat fields stay flat.
        let flat = pure_gauge(&random_unipotent(&mut rng, m, 1)).unwrap();
        let moved = gauge_act_fields(&flat, &g).unwrap();
        assert!(monopole_residual(&moved, &qs).unwrap() < 1e-10);
        // Constant unitary gauge leaves the residual unchanged.
        let u = common::unitary(&mut rng, m);
        let conj = conjugate_fields(&f, &u).unwrap();
        for &q in &qs[..6] {
            let (a, b) = (curvature_residual(&f, q), curvature_residual(&conj, q));
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }
}

#[test]
fn su2_covariance() {
    let mut rng = common::rng(48);
    for m in [1, 2, 3] {
        let f = random_fields(&mut rng, m, 2);
        for _ in 0..3 {
            let g = MobiusElement::su2(common::complex(&mut rng), common::complex(&mut rng));
            for &q in default_q_samples().iter().step_by(4) {
                let a = curvature_residual(&rotate(&f, &g), g.apply(q));
                let b = curvature_residual(&f, q);
                assert!((a - b).abs() < 1e-9 * b.max(1.0), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn flat_full_connection_restricts_flat() {
    let mut rng = common::rng(49);
    let g = random_unipotent(&mut rng, 2, 2);
    let f = pure_gauge(&g).unwrap();
    for &q in &default_q_samples() {
        let conn = alpha_connection_at_q(&f, q);
        for (_, c) in alpha_curvature(&conn) {
            assert!(c.max_coeff_norm() < 1e-10);
        }
    }
    let _ = max_abs_diff;
}
