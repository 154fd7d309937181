use ghc_core::quillen::*;
use ghc_core::sl2_rep::{clebsch_multiplicities, Part};
use num_rational::Rational64;
use num_traits::{One, Zero};

fn part_dim(k: u32, part: Part) -> u64 {
    clebsch_multiplicities(k, k, part)
        .unwrap()
        .iter()
        .map(|&(j, m)| m as u64 * (j as u64 + 1))
        .sum()
}

#[test]
fn split_holds_exactly() {
    for k in 2..=8 {
        let s = hhat_split(k).unwrap();
        let report = s.verify();
        assert!(report.all_pass(), "k = {k}: {report:?}");
        assert_eq!(report.dim_hhat, 2 * k as usize);
        assert_eq!(s.hstar.dim(), k as usize + 1);
        assert_eq!(s.hprime.dim(), k as usize - 1);
        assert!(s.hhat.relations_hold());
        assert_eq!(rank_exact(&s.i) + rank_exact(&s.j), 2 * k as usize);
        assert_eq!(s.hhat.to_module().relations_residual(), 0.0);
    }
}

#[test]
fn hstar_is_the_dual_of_h() {
    // ⟨Xφ, v⟩ + ⟨φ, Xv⟩ = 0 for the pairing of v_i with the basis vector at
    // position k − i.
    for k in 1..=8 {
        let h = ExactModule::irrep(k);
        let d = h.dual();
        let n = k as usize + 1;
        let j = QMat::from_fn(n, n, |r, c| if r + c == n - 1 { Rational64::one() } else { Rational64::zero() });
        for (xd, x) in [(&d.e, &h.e), (&d.f, &h.f), (&d.h, &h.h)] {
            let lhs = xd.transpose() * &j + &j * x;
            assert!(lhs.iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn broken_maps_fail_verification() {
    let mut s = hhat_split(3).unwrap();
    s.p[(0, 0)] = Rational64::new(1, 2);
    let r = s.verify();
    assert!(!r.left_inverse && !r.all_pass());
    let mut s = hhat_split(3).unwrap();
    s.j[(0, 0)] = Rational64::one();
    assert!(!s.verify().composite_zero);
}

#[test]
fn cohomology_table() {
    for m in -10i64..=10 {
        let (h0, h1) = cohomology_dims(m);
        assert_eq!(h0 as i64, (m + 1).max(0));
        assert_eq!(h1 as i64, (-m - 1).max(0));
        // Serre duality on CP¹.
        assert_eq!(cohomology_dims(-m - 2), (h1, h0));
    }
    for k in 2..=10u32 {
        assert_eq!(cohomology_dims(-(k as i64)).1, k as u64 - 1);
        assert_eq!(hhat_split(k).unwrap().hprime.dim(), k as usize - 1);
    }
}

#[test]
fn kernel_bundle() {
    for k in 1..=10u32 {
        let t = k_bundle_split_type(k).unwrap();
        assert_eq!(t, vec![-1; k as usize]);
        assert_eq!(t.iter().sum::<i64>(), -(k as i64));
        let (h0, h1): (u64, u64) = t.iter().fold((0, 0), |(a, b), &m| {
            let (x, y) = cohomology_dims(m);
            (a + x, b + y)
        });
        assert_eq!((h0, h1), (0, 0));
    }
    assert!(k_bundle_split_type(0).is_err());
}

#[test]
fn euler_additivity() {
    for k in 1..=10 {
        for check in euler_checks(k).unwrap() {
            assert!(check.additive(), "k = {k}: {check:?}");
        }
    }
}

#[test]
fn k_mod_s_is_an_isomorphism() {
    for k in 2..=10 {
        assert!(verify_k_mod_s(k).unwrap());
        assert_eq!(rank_exact(&k_mod_s_isomorphism(k).unwrap()), k as usize - 1);
    }
}

#[test]
fn direct_images() {
    let t = direct_image_dims(2, 1).unwrap();
    assert_eq!(lookup(&t, "tau_omega1_eta"), Some(4));
    assert_eq!(
        lookup(&t, "tau_omega1_eta"),
        Some(lookup(&t, "omega1_mc").unwrap() + lookup(&t, "e_star_h_prime").unwrap())
    );
    for k in 1..=6u32 {
        for n in 1..=4u32 {
            let t = direct_image_dims(k, n).unwrap();
            let (kk, nn) = (k as u64, n as u64);
            assert_eq!(lookup(&t, "tau_omega1_eta"), Some(2 * kk * nn));
            assert_eq!(lookup(&t, "h_minus"), Some(3 * kk * (kk - 1) / 2));
            assert_eq!(lookup(&t, "h_plus"), Some(3 * kk * (kk + 1) / 2));
            // Λ²K* and S²K* with K* = O(1)^k: ranks are Λ², S² of C^k, i.e.
            // of S^{k−1}C² as a vector space.
            let (alt_k, sym_k) = (part_dim(k - 1, Part::Alt2), part_dim(k - 1, Part::Sym2));
            assert_eq!(lookup(&t, "h_minus"), Some(3 * alt_k));
            assert_eq!(lookup(&t, "h_plus"), Some(3 * sym_k));
            let s2n = nn * (nn + 1) / 2;
            let l2n = nn * (nn - 1) / 2;
            assert_eq!(lookup(&t, "s2e_lambda2h"), Some(s2n * part_dim(k, Part::Alt2)));
            assert_eq!(lookup(&t, "lambda2e_s2h"), Some(l2n * part_dim(k, Part::Sym2)));
            assert_eq!(
                lookup(&t, "lambda2_t_star"),
                Some(lookup(&t, "s2e_lambda2h").unwrap() + lookup(&t, "lambda2e_s2h").unwrap())
            );
        }
    }
    let t1 = direct_image_dims(1, 2).unwrap();
    assert_eq!(lookup(&t1, "h_minus"), Some(0));
    assert_eq!(lookup(&t1, "h_plus"), Some(3));
    assert!(direct_image_dims(0, 1).is_err());
}
