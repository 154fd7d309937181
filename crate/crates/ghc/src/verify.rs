//! The eleven acceptance checks, each runnable as `ghc verify --criterion N`.
//!
//! Every check has a fixed size, tolerance and time budget. Random inputs come
//! from one ChaCha stream seeded from the command line.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use ghc_core::cp1_sections::Poly;
use ghc_core::eh_quotient::{
    circle_act, constraints_residual, is_regular_level, moment, rank1_chart, solve_fiber_sample,
    REGULAR_TOL,
};
use ghc_core::linalg::{antihermitian_part, max_abs, max_abs_diff, rank, CMat};
use ghc_core::monopole_r5::{
    conjugate_fields, covariance_defects, curvature_residual, default_q_samples,
    monopole_residual, pure_gauge, rotate, GaugeField5, MatPolyField,
};
use ghc_core::nahm_flow::{
    boundary_data, build_pencil, coeffs_reality_residual, complex_gauge_orbit, convergence_study,
    gauge_transform, integrate, integrate_pencil, invariant_drift, lax_residual,
    spectral_invariants, NahmState,
};
use ghc_core::quillen::{cohomology_dims, hhat_split};
use ghc_core::sl2_rep::{
    clebsch_multiplicities, invariant_pairing, irrep, isotypic_projector, projector_rank, Part,
};
use ghc_core::{Complex64, MobiusElement};
use nalgebra::Schur;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    /// The report without timings, which vary between runs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let status = if self.pass() { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {} {status}: {}", self.id, self.title).unwrap();
        for c in &self.checks {
            writeln!(out, "  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name).unwrap();
        }
        out
    }
}

pub const CRITERIA: u32 = 11;

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new() }
    }

    fn check(&mut self, pass: bool, name: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
        });
    }

    fn below(&mut self, what: &str, value: f64, limit: f64) {
        self.check(value < limit, format!("{what}: {value:.3e} < {limit:e}"));
    }
}

pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut b = Builder::new();
    let (title, budget) = match id {
        1 => (quillen_split(&mut b), 1.0),
        2 => (cohomology(&mut b), 1.0),
        3 => (top_component(&mut b), 1.0),
        4 => (pairing(&mut b), 1.0),
        5 => (eh_chart(&mut b, &mut rng), 5.0),
        6 => (regularity(&mut b, &mut rng), 1.0),
        7 => (nahm_isospectral(&mut b, &mut rng), 10.0),
        8 => (nahm_reality_gauge(&mut b, &mut rng), 10.0),
        9 => (nahm_boundary(&mut b, &mut rng), 10.0),
        10 => (monopole(&mut b, &mut rng), 10.0),
        11 => (determinism(&mut b, seed), 60.0),
        _ => return None,
    };
    Some(CriterionReport {
        id,
        title,
        checks: b.checks,
        elapsed: start.elapsed(),
        budget: Some(Duration::from_secs_f64(budget)),
    })
}

fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn cmat(rng: &mut impl Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| complex(rng))
}

fn poly(rng: &mut impl Rng, k: usize) -> Poly {
    Poly::new((0..=k).map(|_| complex(rng)).collect())
}

fn state(rng: &mut impl Rng, n: usize) -> NahmState {
    let st = NahmState::new(cmat(rng, n), cmat(rng, n), cmat(rng, n)).expect("square");
    let s = Complex64::from(1.0 / st.norm());
    NahmState::new(&st.alpha * s, &st.beta * s, &st.gamma * s).expect("square")
}

/// `exp(M)` by scaling and squaring.
fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let squarings = (m.norm() / 0.5).log2().ceil().max(0.0) as i32;
    let scaled = m / Complex64::from(2f64.powi(squarings));
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

fn quillen_split(b: &mut Builder) -> &'static str {
    for k in 2..=8 {
        match hhat_split(k) {
            Ok(s) => {
                let r = s.verify();
                b.check(r.left_inverse, format!("k = {k}: p∘i = id"));
                b.check(r.composite_zero, format!("k = {k}: j∘i = 0"));
                b.check(r.equivariant, format!("k = {k}: i, j, p intertwine e, f, h"));
                b.check(r.exact_in_middle, format!("k = {k}: exact at Ĥ"));
            }
            Err(e) => b.check(false, format!("k = {k}: {e}")),
        }
    }
    "exact split sequence"
}

fn cohomology(b: &mut Builder) -> &'static str {
    let mut table_ok = true;
    let mut serre_ok = true;
    for m in -10i64..=10 {
        let (h0, h1) = cohomology_dims(m);
        table_ok &= h0 == (m + 1).max(0) as u64 && h1 == (-m - 1).max(0) as u64;
        // Serre duality with K = O(-2).
        serre_ok &= h1 == cohomology_dims(-2 - m).0;
    }
    b.check(table_ok, "h0, h1 of O(m) for m in [-10, 10]");
    b.check(serre_ok, "h1(O(m)) = h0(O(-2-m))");
    for k in 2..=8 {
        let ok = hhat_split(k).is_ok_and(|s| {
            s.hprime.dim() == k as usize - 1 && s.hprime.weights == irrep(k - 2).weights()
        });
        b.check(ok, format!("k = {k}: H' = S^{} with dim k - 1", k - 2));
    }
    "cohomology of O(m) and H'"
}

/// Rank of the `S^j` isotypic part of `Λ²(S¹ ⊕ S¹)`, from the Casimir.
fn alt2_doubled_rank(j: u32) -> usize {
    let h = irrep(1).direct_sum(&irrep(1));
    let t = h.tensor(&h);
    let dim = t.dim();
    let n = h.dim();
    let swap = CMat::from_fn(dim, dim, |r, c| {
        let (a, bb) = (c / n, c % n);
        Complex64::from(if r == bb * n + a { 1.0 } else { 0.0 })
    });
    let alt = (CMat::identity(dim, dim) - swap) * Complex64::from(0.5);
    let eig = (j as f64) * (j as f64 + 2.0) / 2.0;
    let shifted = t.casimir() - CMat::identity(dim, dim) * Complex64::from(eig);
    rank(&alt, 1e-10) - rank(&(shifted * &alt), 1e-10)
}

fn top_component(b: &mut Builder) -> &'static str {
    for k in 1..=6 {
        let sym = clebsch_multiplicities(k, k, Part::Sym2).unwrap_or_default();
        let mult = sym.iter().find(|e| e.0 == 2 * k).map_or(0, |e| e.1);
        let rank = isotypic_projector(k, k, 2 * k, Part::Sym2).map_or(0, |p| projector_rank(&p));
        b.check(
            mult == 1 && rank == 2 * k as usize + 1,
            format!("k = {k}: S^{} occurs once in S²(S^{k}), projector rank {rank}", 2 * k),
        );
    }
    // Λ²(H ⊗ E), E = C²: S²H ⊗ Λ²E and Λ²H ⊗ S²E.
    let mult = |part, j| {
        clebsch_multiplicities(1, 1, part)
            .unwrap_or_default()
            .iter()
            .find(|e| e.0 == j)
            .map_or(0, |e| e.1)
    };
    let predicted_sd = mult(Part::Sym2, 2) * 3;
    let predicted_asd = mult(Part::Alt2, 0) * 3;
    let (sd, asd) = (alt2_doubled_rank(2), alt2_doubled_rank(0));
    b.check(
        sd == predicted_sd && asd == predicted_asd && sd + asd == 6,
        format!("k = 1: Λ² of H ⊗ C² has ranks {sd} + {asd}, predicted {predicted_sd} + {predicted_asd}"),
    );
    "top component of S²(S^k)"
}

fn pairing(b: &mut Builder) -> &'static str {
    for k in 0..=8 {
        let f = invariant_pairing(k);
        let sym = if k % 2 == 0 {
            f.is_symmetric(0.0) && (k == 0 || !f.is_antisymmetric(0.0))
        } else {
            f.is_antisymmetric(0.0) && !f.is_symmetric(0.0)
        };
        let res = f.invariance_residual(&irrep(k));
        b.check(
            sym && res < 1e-12,
            format!(
                "k = {k}: {} form, invariance residual {res:.1e}",
                if k % 2 == 0 { "symmetric" } else { "antisymmetric" }
            ),
        );
    }
    "invariant pairing"
}

fn eh_chart(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let mut worst_rank: f64 = 0.0;
    let mut worst_block: f64 = 0.0;
    let mut worst_moment: f64 = 0.0;
    let mut invariant = true;
    let mut regular = true;
    let mut failures = 0;
    for i in 0..100 {
        let k = 1 + i % 4;
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        c[0] = Complex64::from(-1.0);
        c[2 * k] = Complex64::from(1.0);
        let s = Poly::new(c);
        regular &= is_regular_level(&s, REGULAR_TOL).unwrap_or(false);
        let pt = match solve_fiber_sample(&s, &poly(rng, k), &poly(rng, k), 1e-10) {
            Ok(p) => p,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let chart = rank1_chart(&pt);
        worst_rank = worst_rank.max(chart.singular_ratio());
        worst_block = worst_block.max(constraints_residual(&chart, &s).unwrap_or(f64::INFINITY));
        worst_moment = worst_moment.max(moment(&pt).max_diff(&s));
        for t in [Complex64::from(2.0), Complex64::new(0.0, 1.0), Complex64::from(0.125)] {
            invariant &= circle_act(t, &pt).is_ok_and(|q| rank1_chart(&q).a == chart.a);
        }
    }
    b.check(regular, "levels ζ^2k - 1 are regular for k = 1..4");
    b.check(failures == 0, format!("100 fibre samples solved ({failures} failures)"));
    b.below("rank ratio σ2/σ1", worst_rank, 1e-9);
    b.below("block-sum constraints", worst_block, 1e-10);
    b.below("moment map residual", worst_moment, 1e-10);
    b.check(invariant, "chart exactly invariant under t = 2, i, 1/8");
    "Eguchi-Hanson chart"
}

/// Simple zeros on `CP¹` from companion-matrix eigenvalues.
fn simple_zeros(s: &Poly) -> bool {
    let c = s.coeffs();
    let at_infinity = c.iter().rev().take_while(|x| x.norm() == 0.0).count();
    if at_infinity > 1 {
        return false;
    }
    let deg = s.k() - at_infinity;
    if deg < 2 {
        return true;
    }
    let lead = c[deg];
    let comp = CMat::from_fn(deg, deg, |r, col| {
        if col == deg - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            Complex64::from(1.0)
        } else {
            Complex64::from(0.0)
        }
    });
    let roots: Vec<Complex64> = Schur::new(comp).eigenvalues().map_or(Vec::new(), |e| e.iter().copied().collect());
    if roots.len() != deg {
        return false;
    }
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    (0..deg).all(|i| (i + 1..deg).all(|j| (roots[i] - roots[j]).norm() >= 1e-5 * scale))
}

fn regularity(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let zeta2 = Poly::from_real(&[0.0, 0.0, 1.0]);
    b.check(
        is_regular_level(&zeta2, REGULAR_TOL) == Ok(false),
        "ζ² rejected",
    );
    for k in 1..=4 {
        let mut c = vec![0.0; 2 * k + 1];
        c[0] = -1.0;
        c[2 * k] = 1.0;
        b.check(
            is_regular_level(&Poly::from_real(&c), REGULAR_TOL) == Ok(true),
            format!("ζ^{} - 1 accepted", 2 * k),
        );
    }
    let mut agree = 0;
    for i in 0..50 {
        let deg = 2 + i % 7;
        let s = match i % 3 {
            0 => poly(rng, deg),
            1 => {
                let r = complex(rng);
                poly(rng, deg - 2).mul(&Poly::new(vec![r * r, -r * 2.0, Complex64::from(1.0)]))
            }
            _ => {
                let mut c = poly(rng, deg - 2).into_coeffs();
                c.extend([Complex64::from(0.0); 2]);
                Poly::new(c)
            }
        };
        if is_regular_level(&s, REGULAR_TOL).is_ok_and(|r| r == simple_zeros(&s)) {
            agree += 1;
        }
    }
    b.check(agree == 50, format!("agrees with root check on {agree}/50 forms of degree <= 8"));
    "regularity of levels"
}

fn nahm_isospectral(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let (mut drift, mut lax) = (0.0f64, 0.0f64);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut failures = 0;
    for trial in 0..10 {
        let n = 2 + trial % 2;
        let st = state(rng, n);
        let Ok(path) = integrate(&st, 1000) else {
            failures += 1;
            continue;
        };
        drift = drift.max(invariant_drift(&path, n).unwrap_or(f64::INFINITY));
        lax = lax.max(lax_residual(&path, &commands::default_zetas()).unwrap_or(f64::INFINITY));
        match convergence_study(&st, n, 20) {
            Ok(r) => {
                lo = lo.min(r.ratio);
                hi = hi.max(r.ratio);
            }
            Err(_) => failures += 1,
        }
    }
    b.check(failures == 0, "10 integrations finite");
    b.below("invariant drift, N = 1000", drift, 1e-8);
    b.below("Lax residual", lax, 1e-6);
    b.check(
        (12.0..=20.0).contains(&lo) && (12.0..=20.0).contains(&hi),
        format!("drift ratio N = 20 vs 40 in [{lo:.2}, {hi:.2}] within [12, 20]"),
    );
    "isospectral Nahm flow"
}

fn nahm_reality_gauge(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let (mut reality, mut gauge, mut cgauge) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2, 3] {
        let st = state(rng, n);
        let pencil = build_pencil(&st);
        match integrate_pencil(&pencil.bcoeffs, &antihermitian_part(&st.alpha), 1000) {
            Ok(p) => reality = reality.max(p.iter().map(coeffs_reality_residual).fold(0.0, f64::max)),
            Err(_) => reality = f64::INFINITY,
        }
        let Ok(path) = integrate(&st, 1000) else {
            gauge = f64::INFINITY;
            continue;
        };
        let x = antihermitian_part(&cmat(rng, n));
        let y = antihermitian_part(&cmat(rng, n));
        let gpath: Vec<CMat> = path
            .grid
            .iter()
            .map(|&t| expm(&(&x * Complex64::from(t) + &y * Complex64::from((3.0 * t).sin()))))
            .collect();
        match gauge_transform(&path, &gpath) {
            Ok(g) => {
                for (s0, s1) in path.states.iter().zip(&g.states) {
                    let (a, c) = (spectral_invariants(s0, n), spectral_invariants(s1, n));
                    if let (Ok(a), Ok(c)) = (a, c) {
                        for (u, v) in a.concat().iter().zip(&c.concat()) {
                            gauge = gauge.max((u - v).norm());
                        }
                    }
                }
            }
            Err(_) => gauge = f64::INFINITY,
        }
        match complex_gauge_orbit(&path) {
            Ok(orbit) => cgauge = cgauge.max(orbit.iter().map(|m| max_abs_diff(m, &st.beta)).fold(0.0, f64::max)),
            Err(_) => cgauge = f64::INFINITY,
        }
    }
    b.below("pencil reality residual", reality, 1e-8);
    b.below("spectral invariants under unitary gauge", gauge, 1e-8);
    b.below("complex gauge invariant drift", cgauge, 1e-6);
    "reality and gauge invariance of the flow"
}

fn nahm_boundary(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let (mut diff, mut herm) = (0.0f64, 0.0f64);
    for n in [2, 3] {
        let st = state(rng, n);
        let Ok(path) = integrate(&st, 1000) else {
            diff = f64::INFINITY;
            continue;
        };
        let x = antihermitian_part(&cmat(rng, n));
        let u: Vec<CMat> = path
            .grid
            .iter()
            .map(|&t| expm(&(&x * Complex64::from((std::f64::consts::PI * t).sin()))))
            .collect();
        let bd = gauge_transform(&path, &u).and_then(|o| Ok((boundary_data(&path)?, boundary_data(&o)?)));
        match bd {
            Ok((b1, b2)) => {
                diff = diff.max(b1.max_diff(&b2));
                herm = herm.max(max_abs(&(&b1.a0 - b1.a0.adjoint())));
            }
            Err(_) => diff = f64::INFINITY,
        }
    }
    b.below("boundary data of gauge-equivalent paths", diff, 1e-6);
    b.below("α(0) + α†(0) hermitian", herm, 1e-8);
    "boundary map"
}

fn random_fields(rng: &mut ChaCha8Rng, m: usize, maxdeg: u32) -> GaugeField5 {
    let mut field = || {
        let mut f = MatPolyField::zero(m, maxdeg);
        for e in monomials(maxdeg) {
            f.insert(e, cmat(rng, m)).expect("degree within bound");
        }
        f
    };
    let a = core::array::from_fn(|_| field());
    let phi = core::array::from_fn(|_| field());
    GaugeField5::new(a, phi).expect("shared size")
}

fn monomials(maxdeg: u32) -> Vec<[u32; 5]> {
    let mut out = Vec::new();
    let d = maxdeg + 1;
    for code in 0..d.pow(5) {
        let e: [u32; 5] = core::array::from_fn(|i| code / d.pow(i as u32) % d);
        if e.iter().sum::<u32>() <= maxdeg {
            out.push(e);
        }
    }
    out
}

fn unipotent(rng: &mut ChaCha8Rng, m: usize) -> MatPolyField {
    let mut g = MatPolyField::identity(m, 1);
    for var in 0..5 {
        let n = CMat::from_fn(m, m, |r, c| if c > r { complex(rng) } else { Complex64::from(0.0) });
        g = g.add(&MatPolyField::linear(var, n, 1).expect("degree 1"));
    }
    g
}

fn monopole(b: &mut Builder, rng: &mut ChaCha8Rng) -> &'static str {
    let qs = default_q_samples();
    b.check(qs.len() == 25, "25 default q samples");
    let zero = monopole_residual(&GaugeField5::zero(2, 2), &qs);
    b.check(zero == Ok(0.0), "zero fields: residual 0");
    let konst = |rng: &mut ChaCha8Rng| MatPolyField::constant(cmat(rng, 1), 2).expect("1x1");
    let abelian = GaugeField5::new(
        core::array::from_fn(|_| konst(rng)),
        core::array::from_fn(|_| konst(rng)),
    )
    .expect("shared size");
    b.check(monopole_residual(&abelian, &qs) == Ok(0.0), "constant abelian fields: residual 0");
    let mut pure: f64 = 0.0;
    for m in [2, 3] {
        pure = pure.max(pure_gauge(&unipotent(rng, m)).and_then(|f| monopole_residual(&f, &qs)).unwrap_or(f64::INFINITY));
    }
    b.below("pure gauge, m = 2, 3", pure, 1e-10);
    let (mut cov, mut unitary, mut su2) = (0.0f64, 0.0f64, 0.0f64);
    for m in [2, 3] {
        let f = random_fields(rng, m, 1);
        let g = unipotent(rng, m);
        cov = cov.max(
            covariance_defects(&f, &g, &qs).map_or(f64::INFINITY, |d| d.into_iter().fold(0.0, f64::max)),
        );
        let u = cmat(rng, m).qr().q();
        let f2 = random_fields(rng, m, 2);
        let conj = conjugate_fields(&f2, &u);
        let rot = MobiusElement::su2(complex(rng), complex(rng));
        let rotated = rotate(&f2, &rot);
        for &q in qs.iter().step_by(3) {
            let base = curvature_residual(&f2, q);
            let rel = |x: f64| (x - base).abs() / base.max(1.0);
            unitary = unitary.max(conj.as_ref().map_or(f64::INFINITY, |c| rel(curvature_residual(c, q))));
            su2 = su2.max(rel(curvature_residual(&rotated, rot.apply(q))));
        }
    }
    b.below("gauge covariance of the curvature", cov, 1e-9);
    b.below("residual under constant unitary gauge (relative)", unitary, 1e-9);
    b.below("SU(2) covariance of the residual (relative)", su2, 1e-9);
    "monopole flatness residual"
}

/// Run a fixed set of commands twice and compare bytes.
pub fn determinism_outputs(seed: u64) -> Result<Vec<(String, String)>, crate::CliError> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
    out.push(("eh sample".into(), commands::eh_sample(2, &s, 5, 1e-10, &mut rng)?));
    out.push(("quillen".into(), commands::quillen_report(4, 2)?));
    out.push(("quillen csv".into(), commands::quillen_csv(4, 2)?));
    out.push(("rep".into(), commands::rep(3, 3, Part::Sym2)?));
    let st = state(&mut rng, 2);
    let run = commands::nahm_run(&st, 200, 2, &commands::default_zetas())?;
    out.push(("nahm run csv".into(), run.csv));
    out.push(("nahm run summary".into(), run.summary));
    let fields = commands::monopole_pure_gauge(2, &mut rng)?;
    out.push(("monopole pure-gauge".into(), fields));
    out.push(("monopole residual".into(), commands::monopole_residual(&random_fields(&mut rng, 2, 1), None, 1e-10)?));
    Ok(out)
}

fn determinism(b: &mut Builder, seed: u64) -> &'static str {
    match (determinism_outputs(seed), determinism_outputs(seed)) {
        (Ok(first), Ok(second)) => {
            for ((name, x), (_, y)) in first.iter().zip(&second) {
                b.check(x == y, format!("{name}: {} bytes identical", x.len()));
            }
        }
        (Err(e), _) | (_, Err(e)) => b.check(false, format!("command failed: {e}")),
    }
    "byte-identical repeated runs"
}
