mod common;

use ghc_core::linalg::{antihermitian_part, max_abs, max_abs_diff, CMat};
use ghc_core::nahm_flow::*;
use ghc_core::Complex64;

fn zetas() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-0.6, 0.8),
        Complex64::new(0.5, -0.5),
    ]
}

#[test]
fn isospectral_and_lax_at_default_steps() {
    let mut rng = common::rng(7);
    for trial in 0..10 {
        let n = 2 + trial % 2;
        let st = common::state(&mut rng, n, 1.0);
        let path = integrate(&st, 1000).unwrap();
        let drift = invariant_drift(&path, n).unwrap();
        let lax = lax_residual(&path, &zetas()).unwrap();
        println!("n={n} drift={drift:e} lax={lax:e}");
        assert!(drift < 1e-8);
        assert!(lax < 1e-6);
    }
}

#[test]
fn fourth_order_convergence() {
    let mut rng = common::rng(11);
    for trial in 0..10 {
        let n = 2 + trial % 2;
        let st = common::state(&mut rng, n, 1.0);
        // At N = 1000 the drift is already at rounding level, so the order
        // is measured on a coarse grid.
        let r = convergence_study(&st, n, 20).unwrap();
        assert!((12.0..=20.0).contains(&r.ratio), "ratio {}", r.ratio);
    }
}

#[test]
fn reality_along_pencil_flow() {
    let mut rng = common::rng(3);
    for n in [2, 3] {
        let st = common::state(&mut rng, n, 1.0);
        let pencil = build_pencil(&st);
        let path = integrate_pencil(&pencil.bcoeffs, &antihermitian_part(&st.alpha), 1000).unwrap();
        let worst = path.iter().map(coeffs_reality_residual).fold(0.0, f64::max);
        println!("reality {worst:e}");
        assert!(worst < 1e-8);
        // Agrees with the state flow.
        let states = integrate(&st, 1000).unwrap();
        let end = build_pencil(states.last());
        for i in 0..5 {
            assert!(max_abs_diff(&end.bcoeffs[i], &path[1000][i]) < 1e-10);
        }
    }
}

#[test]
fn unitary_gauge_preserves_invariants() {
    let mut rng = common::rng(5);
    for n in [2, 3] {
        let st = common::state(&mut rng, n, 1.0);
        let path = integrate(&st, 1000).unwrap();
        let x = common::antihermitian(&mut rng, n);
        let y = common::antihermitian(&mut rng, n);
        let gpath: Vec<CMat> = path
            .grid
            .iter()
            .map(|&t| common::expm(&(&x * Complex64::from(t) + &y * Complex64::from((3.0 * t).sin()))))
            .collect();
        let gauged = gauge_transform(&path, &gpath).unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in path.states.iter().zip(&gauged.states) {
            let (ia, ib) = (spectral_invariants(a, n).unwrap(), spectral_invariants(b, n).unwrap());
            for (ra, rb) in ia.iter().zip(&ib) {
                for (ca, cb) in ra.iter().zip(rb) {
                    worst = worst.max((ca - cb).norm());
                }
            }
        }
        println!("gauge invariants {worst:e}");
        assert!(worst < 1e-8);
    }
}

#[test]
fn hermitian_gauge_and_boundary() {
    let mut rng = common::rng(9);
    for n in [2, 3] {
        let st = common::state(&mut rng, n, 1.0);
        let path = integrate(&st, 1000).unwrap();
        let (gauged, gs) = hermitian_gauge(&path).unwrap();
        let unit = gs
            .iter()
            .map(|g| max_abs(&(g * g.adjoint() - CMat::identity(n, n))))
            .fold(0.0, f64::max);
        let ah = gauged
            .states
            .iter()
            .map(|s| max_abs(&antihermitian_part(&s.alpha)))
            .fold(0.0, f64::max);
        println!("unitarity {unit:e} antiherm {ah:e}");
        assert!(unit < 1e-8 && ah < 1e-8);

        let x = common::antihermitian(&mut rng, n);
        let u: Vec<CMat> = path
            .grid
            .iter()
            .map(|&t| common::expm(&(&x * Complex64::from((std::f64::consts::PI * t).sin()))))
            .collect();
        let other = gauge_transform(&path, &u).unwrap();
        let (b1, b2) = (boundary_data(&path).unwrap(), boundary_data(&other).unwrap());
        println!("boundary diff {:e}", b1.max_diff(&b2));
        assert!(b1.max_diff(&b2) < 1e-6);
        assert!(max_abs(&(&b1.a0 - b1.a0.adjoint())) < 1e-8);

        let orbit = complex_gauge_orbit(&path).unwrap();
        let cg = orbit.iter().map(|m| max_abs_diff(m, &st.beta)).fold(0.0, f64::max);
        println!("complex gauge {cg:e}");
        assert!(cg < 1e-6);
    }
}
