//! One function per subcommand. Each renders its output to a string so that
//! the driver decides where it goes and repeated runs can be compared.

use std::fmt::Write as _;

use ghc_core::cp1_sections::Poly;
use ghc_core::eh_quotient::{
    chart_moment, constraints_residual, moment, rank1_chart, solve_fiber_sample, EHPoint,
};
use ghc_core::linalg::{max_abs, max_abs_diff, CMat};
use ghc_core::monopole_r5::{default_q_samples, pure_gauge, residuals_at, GaugeField5, MatPolyField};
use ghc_core::nahm_flow::{
    boundary_data, build_pencil, complex_gauge_orbit, convergence_study, integrate,
    invariant_drift_series, lax_residual_series, NahmState,
};
use ghc_core::quillen::{
    cohomology_dims, direct_image_dims, euler_checks, hhat_split, k_bundle_split_type,
    verify_k_mod_s,
};
use ghc_core::sl2_rep::{
    clebsch_multiplicities, invariant_pairing, irrep, isotypic_projector, projector_rank, Part,
};
use ghc_core::{Complex64, ExtendedComplex};
use rand::Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::io::{format_point, matrix_to_json, FieldsJson, JsonMatrix, PointJson};

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Multiplicity table of `S^{k1} ⊗ S^{k2}` (or its symmetric/alternating
/// part) with the ranks of the isotypic projectors, and the invariant
/// pairing on `S^{k1}`.
pub fn rep(k1: u32, k2: u32, part: Part) -> Result<String, CliError> {
    let table = clebsch_multiplicities(k1, k2, part)?;
    let mut out = String::new();
    writeln!(out, "S^{k1} x S^{k2}, part {}", part.name()).unwrap();
    writeln!(out, "j\tmultiplicity\tprojector_rank\tidempotence_residual").unwrap();
    for &(j, mult) in &table {
        let p = isotypic_projector(k1, k2, j, part)?;
        let idem = max_abs(&(&p * &p - &p));
        writeln!(out, "{j}\t{mult}\t{}\t{idem:e}", projector_rank(&p)).unwrap();
    }
    let form = invariant_pairing(k1);
    let kind = if k1 % 2 == 0 { "symmetric" } else { "antisymmetric" };
    let ok = if k1 % 2 == 0 {
        form.is_symmetric(0.0)
    } else {
        form.is_antisymmetric(0.0)
    };
    writeln!(
        out,
        "invariant pairing on S^{k1}: {kind}: {}, invariance residual {:e}",
        pass(ok),
        form.invariance_residual(&irrep(k1))
    )
    .unwrap();
    Ok(out)
}

/// Verification report for the split sequence, cohomology and the direct
/// image dimensions.
pub fn quillen_report(k: u32, n: u32) -> Result<String, CliError> {
    let split = hhat_split(k)?;
    let r = split.verify();
    let mut out = String::new();
    writeln!(out, "split sequence 0 -> H* -> Ĥ -> H' -> 0 for k = {k}").unwrap();
    writeln!(
        out,
        "dim H* = {}, dim H' = {}, dim Ĥ = {}",
        split.hstar.dim(),
        split.hprime.dim(),
        r.dim_hhat
    )
    .unwrap();
    writeln!(out, "p∘i = id: {}", pass(r.left_inverse)).unwrap();
    writeln!(out, "j∘i = 0: {}", pass(r.composite_zero)).unwrap();
    writeln!(out, "i injective: {}", pass(r.i_injective)).unwrap();
    writeln!(out, "j surjective: {}", pass(r.j_surjective)).unwrap();
    writeln!(out, "exact at Ĥ: {}", pass(r.exact_in_middle)).unwrap();
    writeln!(out, "i, j, p intertwine e, f, h: {}", pass(r.equivariant)).unwrap();
    writeln!(
        out,
        "dim H' = k - 1: {}",
        pass(split.hprime.dim() as i64 == k as i64 - 1)
    )
    .unwrap();
    if k >= 2 {
        writeln!(out, "K/S = S^(k-2) over the Borel at 0: {}", pass(verify_k_mod_s(k)?)).unwrap();
    }
    let split_type = k_bundle_split_type(k)?;
    let parts: Vec<String> = split_type.iter().map(|m| format!("O({m})")).collect();
    writeln!(out, "K = {}", parts.join(" + ")).unwrap();
    for c in euler_checks(k)? {
        writeln!(
            out,
            "euler {}: {} = {} + {}: {}",
            c.sequence,
            c.middle,
            c.left,
            c.right,
            pass(c.additive())
        )
        .unwrap();
    }
    writeln!(out, "m\th0\th1").unwrap();
    for m in -10..=10 {
        let (h0, h1) = cohomology_dims(m);
        writeln!(out, "{m}\t{h0}\t{h1}").unwrap();
    }
    writeln!(out, "direct images, n = {n}").unwrap();
    for e in direct_image_dims(k, n)? {
        writeln!(out, "{}\t{}", e.quantity, e.value).unwrap();
    }
    Ok(out)
}

pub fn quillen_csv(k: u32, n: u32) -> Result<String, CliError> {
    let mut out = String::from("k,n,quantity,value\n");
    for e in direct_image_dims(k, n)? {
        writeln!(out, "{k},{n},{},{}", e.quantity, e.value).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct SampleLine {
    sample: usize,
    point: PointJson,
    moment_residual: f64,
    constraints_residual: f64,
    rank_ratio: f64,
}

fn moment_residual(pt: &EHPoint, s: &Poly) -> Result<f64, CliError> {
    let mu = moment(pt);
    let k = pt.k();
    if s.k() > 2 * k {
        return Err(CliError::schema(
            "level.k",
            &format!("is {}, more than 2k = {}", s.k(), 2 * k),
        ));
    }
    let worst = (0..=2 * k)
        .map(|i| {
            let target = s.coeffs().get(i).copied().unwrap_or_default();
            (mu.coeffs()[i] - target).norm()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// `count` points of the fibre over `s`, with random `z₁, z₂` of degree `k`.
pub fn eh_sample(
    k: usize,
    s: &Poly,
    count: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<String, CliError> {
    if s.k() > 2 * k {
        return Err(CliError::schema(
            "level.k",
            &format!("is {}, more than 2k = {}", s.k(), 2 * k),
        ));
    }
    let mut out = String::new();
    let random_poly = |rng: &mut dyn rand::RngCore| {
        Poly::new(
            (0..=k)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    };
    for i in 0..count {
        let z1 = random_poly(rng);
        let z2 = random_poly(rng);
        let pt = solve_fiber_sample(s, &z1, &z2, tol)?;
        let chart = rank1_chart(&pt);
        let line = SampleLine {
            sample: i,
            point: PointJson::from_point(&pt),
            moment_residual: moment_residual(&pt, s)?,
            constraints_residual: constraints_residual(&chart, s)?,
            rank_ratio: chart.singular_ratio(),
        };
        out.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
        out.push('\n');
    }
    Ok(out)
}

pub fn eh_check(pt: &EHPoint, s: &Poly, tol: f64) -> Result<String, CliError> {
    let res = moment_residual(pt, s)?;
    let chart = rank1_chart(pt);
    let block = constraints_residual(&chart, s)?;
    let recon = chart_moment(&chart).s;
    let mut out = String::new();
    writeln!(out, "moment residual {res:e}").unwrap();
    writeln!(out, "block-sum residual {block:e}").unwrap();
    writeln!(out, "rank ratio {:e}", chart.singular_ratio()).unwrap();
    writeln!(out, "chart degree bound {}", recon.k()).unwrap();
    writeln!(out, "on the level within {tol:e}: {}", pass(res < tol && block < tol)).unwrap();
    Ok(out)
}

#[derive(Serialize)]
struct BoundaryJson {
    g1: JsonMatrix,
    alpha0_plus_adjoint: JsonMatrix,
    beta0: JsonMatrix,
    gamma0: JsonMatrix,
}

#[derive(Serialize)]
struct NahmSummary {
    n: usize,
    steps: usize,
    invariants: usize,
    max_drift: f64,
    max_lax_residual: f64,
    max_reality_residual: f64,
    complex_gauge_drift: f64,
    boundary: BoundaryJson,
}

/// Sample points for the Lax residual when none are given.
pub fn default_zetas() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-0.6, 0.8),
        Complex64::new(0.5, -0.5),
    ]
}

/// CSV time series and JSON summary of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NahmRun {
    pub csv: String,
    pub summary: String,
}

pub fn nahm_run(
    init: &NahmState,
    steps: usize,
    m_max: usize,
    zetas: &[Complex64],
) -> Result<NahmRun, CliError> {
    if m_max == 0 {
        return Err(CliError::schema("invariants", "must be at least 1"));
    }
    if steps < 2 {
        return Err(CliError::schema("steps", "need at least 2 steps"));
    }
    let path = integrate(init, steps)?;
    let drift = invariant_drift_series(&path, m_max)?;
    let lax = lax_residual_series(&path, zetas)?;
    let mut csv = String::from("t");
    for m in 1..=m_max {
        for c in 0..=4 * m {
            write!(csv, ",drift_m{m}_c{c}").unwrap();
        }
    }
    csv.push_str(",lax_residual\n");
    for ((t, row), l) in path.grid.iter().zip(&drift).zip(&lax) {
        write!(csv, "{t}").unwrap();
        for d in row {
            write!(csv, ",{d:e}").unwrap();
        }
        match l {
            Some(v) => writeln!(csv, ",{v:e}").unwrap(),
            None => csv.push_str(",\n"),
        }
    }
    let b = boundary_data(&path)?;
    let beta0 = &path.states[0].beta;
    let summary = NahmSummary {
        n: init.n(),
        steps,
        invariants: m_max,
        max_drift: drift.iter().flatten().copied().fold(0.0, f64::max),
        max_lax_residual: lax.iter().flatten().copied().fold(0.0, f64::max),
        max_reality_residual: path
            .states
            .iter()
            .map(|s| build_pencil(s).reality_residual())
            .fold(0.0, f64::max),
        complex_gauge_drift: complex_gauge_orbit(&path)?
            .iter()
            .map(|m| max_abs_diff(m, beta0))
            .fold(0.0, f64::max),
        boundary: BoundaryJson {
            g1: matrix_to_json(&b.g1),
            alpha0_plus_adjoint: matrix_to_json(&b.a0),
            beta0: matrix_to_json(&b.b0),
            gamma0: matrix_to_json(&b.c0),
        },
    };
    let mut summary = serde_json::to_string(&summary).expect("plain data serializes");
    summary.push('\n');
    Ok(NahmRun { csv, summary })
}

pub fn nahm_convergence(init: &NahmState, steps: usize, m_max: usize) -> Result<String, CliError> {
    if m_max == 0 {
        return Err(CliError::schema("invariants", "must be at least 1"));
    }
    let r = convergence_study(init, m_max, steps)?;
    let mut out = String::new();
    writeln!(out, "invariant drift at t = 1, N = {}: {:e}", r.steps, r.drift_coarse).unwrap();
    writeln!(out, "invariant drift at t = 1, N = {}: {:e}", 2 * r.steps, r.drift_fine).unwrap();
    writeln!(out, "ratio {}", r.ratio).unwrap();
    writeln!(out, "fourth order (ratio in [12, 20]): {}", pass((12.0..=20.0).contains(&r.ratio))).unwrap();
    Ok(out)
}

pub fn monopole_residual(
    f: &GaugeField5,
    qs: Option<&[ExtendedComplex]>,
    tol: f64,
) -> Result<String, CliError> {
    let default;
    let qs = match qs {
        Some(q) => q,
        None => {
            default = default_q_samples();
            &default
        }
    };
    let res = residuals_at(f, qs);
    let mut out = String::new();
    for (q, r) in qs.iter().zip(&res) {
        writeln!(out, "q = {}\tresidual {r:e}", format_point(*q)).unwrap();
    }
    let worst = res.iter().copied().fold(0.0, f64::max);
    writeln!(out, "max residual {worst:e}").unwrap();
    writeln!(out, "flat on all alpha-surfaces within {tol:e}: {}", pass(worst < tol)).unwrap();
    Ok(out)
}

/// Pure-gauge fields `A = −(∂g)g⁻¹` for a random unipotent `g = 1 + N(z)`,
/// `N` strictly upper triangular and linear in `z`.
pub fn monopole_pure_gauge(m: usize, rng: &mut impl Rng) -> Result<String, CliError> {
    if m == 0 {
        return Err(CliError::schema("m", "must be positive"));
    }
    let mut g = MatPolyField::identity(m, 1);
    for var in 0..5 {
        let n = CMat::from_fn(m, m, |r, c| {
            if c > r {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        g = g.add(&MatPolyField::linear(var, n, 1)?);
    }
    let f = pure_gauge(&g)?;
    let mut out = serde_json::to_string(&FieldsJson::from_fields(&f)).expect("plain data serializes");
    out.push('\n');
    Ok(out)
}
