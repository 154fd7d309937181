//! The Nahm-type system as a Lax equation `Ḃ(ζ) = [B(ζ), A(ζ)]` with
//!
//! ```text
//! B(ζ) = β + γζ + (α + α†)ζ² − γ†ζ³ + β†ζ⁴,
//! A(ζ) = α − γ†ζ + β†ζ².
//! ```
//!
//! Expanding coefficientwise gives
//!
//! ```text
//! β̇ = [β, α],
//! γ̇ = [γ, α] − [β, γ†],
//! (α + α†)˙ = [α†, α] + [β, β†] − [γ, γ†],
//! ```
//!
//! and the ζ³, ζ⁴ coefficients are the adjoints of the first two. The
//! anti-hermitian part of α is pure gauge and is kept constant.
//!
//! Paths live on the uniform grid `t_i = i/N` of `[0, 1]` and are produced by
//! classical RK4.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::linalg::{antihermitian_part, commutator, frobenius, hermitian_part, is_finite, CMat};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NahmState {
    pub alpha: CMat,
    pub beta: CMat,
    pub gamma: CMat,
}

impl NahmState {
    pub fn new(alpha: CMat, beta: CMat, gamma: CMat) -> Result<Self> {
        let n = alpha.nrows();
        for (name, m) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {:?}, expected {n}x{n}",
                    m.shape()
                )));
            }
        }
        if n == 0 {
            return Err(Error::invalid("n", "matrices must be at least 1x1"));
        }
        Ok(NahmState { alpha, beta, gamma })
    }

    pub fn zero(n: usize) -> Self {
        NahmState {
            alpha: CMat::zeros(n, n),
            beta: CMat::zeros(n, n),
            gamma: CMat::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.nrows()
    }

    /// `sqrt(‖α‖² + ‖β‖² + ‖γ‖²)` with Frobenius norms.
    pub fn norm(&self) -> f64 {
        let f = |m: &CMat| frobenius(m) * frobenius(m);
        Float::sqrt(f(&self.alpha) + f(&self.beta) + f(&self.gamma))
    }

    pub fn is_finite(&self) -> bool {
        is_finite(&self.alpha) && is_finite(&self.beta) && is_finite(&self.gamma)
    }

    fn axpy(&self, t: f64, d: &NahmState) -> NahmState {
        let t = Complex64::from(t);
        NahmState {
            alpha: &self.alpha + &d.alpha * t,
            beta: &self.beta + &d.beta * t,
            gamma: &self.gamma + &d.gamma * t,
        }
    }

    /// `(gαg⁻¹, gβg⁻¹, gγg⁻¹)`.
    pub fn conjugate(&self, g: &CMat, g_inv: &CMat) -> NahmState {
        NahmState {
            alpha: g * &self.alpha * g_inv,
            beta: g * &self.beta * g_inv,
            gamma: g * &self.gamma * g_inv,
        }
    }

    /// Largest entrywise difference over the three matrices.
    pub fn max_diff(&self, other: &NahmState) -> f64 {
        use crate::linalg::max_abs_diff;
        max_abs_diff(&self.alpha, &other.alpha)
            .max(max_abs_diff(&self.beta, &other.beta))
            .max(max_abs_diff(&self.gamma, &other.gamma))
    }
}

/// Coefficients `b₀..b₄` of `B(ζ)` and `a₀..a₂` of `A(ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxPencil {
    pub bcoeffs: [CMat; 5],
    pub acoeffs: [CMat; 3],
}

impl LaxPencil {
    pub fn n(&self) -> usize {
        self.bcoeffs[0].nrows()
    }

    /// `max_i max|b_{4−i} − (−1)^i b_i†|`.
    pub fn reality_residual(&self) -> f64 {
        (0..5)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let target = self.bcoeffs[i].adjoint() * Complex64::from(sign);
                crate::linalg::max_abs_diff(&self.bcoeffs[4 - i], &target)
            })
            .fold(0.0, f64::max)
    }

    pub fn b_at(&self, zeta: Complex64) -> CMat {
        horner(&self.bcoeffs, zeta)
    }

    pub fn a_at(&self, zeta: Complex64) -> CMat {
        horner(&self.acoeffs, zeta)
    }
}

fn horner(coeffs: &[CMat], zeta: Complex64) -> CMat {
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * zeta + c;
    }
    acc
}

pub fn build_pencil(st: &NahmState) -> LaxPencil {
    let (a, b, g) = (&st.alpha, &st.beta, &st.gamma);
    LaxPencil {
        bcoeffs: [
            b.clone(),
            g.clone(),
            a + a.adjoint(),
            -g.adjoint(),
            b.adjoint(),
        ],
        acoeffs: [a.clone(), -g.adjoint(), b.adjoint()],
    }
}

/// Time derivative of the state.
pub fn rhs(st: &NahmState) -> NahmState {
    let (a, b, g) = (&st.alpha, &st.beta, &st.gamma);
    let (ad, bd, gd) = (a.adjoint(), b.adjoint(), g.adjoint());
    let half = Complex64::from(0.5);
    NahmState {
        alpha: (commutator(&ad, a) + commutator(b, &bd) - commutator(g, &gd)) * half,
        beta: commutator(b, a),
        gamma: commutator(g, a) - commutator(b, &gd),
    }
}

/// Coefficients of `[B(ζ), A(ζ)]`, degree 6.
pub fn lax_bracket_coeffs(p: &LaxPencil) -> Vec<CMat> {
    let n = p.n();
    let mut out = vec![CMat::zeros(n, n); 7];
    for (i, b) in p.bcoeffs.iter().enumerate() {
        for (j, a) in p.acoeffs.iter().enumerate() {
            out[i + j] += commutator(b, a);
        }
    }
    out
}

fn rk4_step<T, F>(x: &T, h: f64, f: F, axpy: impl Fn(&T, f64, &T) -> T, combine: impl Fn(&T, f64, [&T; 4]) -> T) -> T
where
    F: Fn(&T, f64) -> T,
{
    let k1 = f(x, 0.0);
    let k2 = f(&axpy(x, h / 2.0, &k1), 0.5);
    let k3 = f(&axpy(x, h / 2.0, &k2), 0.5);
    let k4 = f(&axpy(x, h, &k3), 1.0);
    combine(x, h, [&k1, &k2, &k3, &k4])
}

/// A state sampled on `t_i = i/N`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NahmPath {
    pub grid: Vec<f64>,
    pub states: Vec<NahmState>,
}

impl NahmPath {
    pub fn steps(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn h(&self) -> f64 {
        1.0 / self.steps() as f64
    }

    pub fn n(&self) -> usize {
        self.states[0].n()
    }

    pub fn last(&self) -> &NahmState {
        &self.states[self.states.len() - 1]
    }
}

fn uniform_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// RK4 with `N` steps on `[0, 1]`.
pub fn integrate(initial: &NahmState, steps: usize) -> Result<NahmPath> {
    if steps == 0 {
        return Err(Error::invalid("steps", "need at least one step"));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    let h = 1.0 / steps as f64;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial.clone());
    for step in 1..=steps {
        let next = rk4_step(
            &states[step - 1],
            h,
            |x, _| rhs(x),
            |x, t, d| x.axpy(t, d),
            |x, h, [k1, k2, k3, k4]| {
                x.axpy(h / 6.0, k1)
                    .axpy(h / 3.0, k2)
                    .axpy(h / 3.0, k3)
                    .axpy(h / 6.0, k4)
            },
        );
        if !next.is_finite() {
            return Err(Error::NonFinite { step });
        }
        states.push(next);
    }
    Ok(NahmPath {
        grid: uniform_grid(steps),
        states,
    })
}

/// `max ‖(B_{i+1} − B_{i−1})/2h − [B_i, A_i]‖` (Frobenius) over interior
/// grid points and the sample points `ζ`.
pub fn lax_residual(path: &NahmPath, zetas: &[Complex64]) -> Result<f64> {
    let series = lax_residual_series(path, zetas)?;
    Ok(series.into_iter().flatten().fold(0.0, f64::max))
}

/// Per-grid-point Lax residual; `None` at the two endpoints.
pub fn lax_residual_series(path: &NahmPath, zetas: &[Complex64]) -> Result<Vec<Option<f64>>> {
    if path.states.len() < 3 {
        return Err(Error::invalid("path", "need at least 3 grid points"));
    }
    let h = path.h();
    let pencils: Vec<LaxPencil> = path.states.iter().map(build_pencil).collect();
    let mut out = vec![None; pencils.len()];
    for i in 1..pencils.len() - 1 {
        let mut worst: f64 = 0.0;
        for &z in zetas {
            let db = (pencils[i + 1].b_at(z) - pencils[i - 1].b_at(z)) / Complex64::from(2.0 * h);
            let lax = commutator(&pencils[i].b_at(z), &pencils[i].a_at(z));
            worst = worst.max(frobenius(&(db - lax)));
        }
        out[i] = Some(worst);
    }
    Ok(out)
}

fn mat_poly_mul(a: &[CMat], b: &[CMat]) -> Vec<CMat> {
    let n = a[0].nrows();
    let mut out = vec![CMat::zeros(n, n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `tr(B(ζ)^m)` for `m = 1..=m_max`; entry `m − 1` has
/// length `4m + 1`.
pub fn spectral_invariants(st: &NahmState, m_max: usize) -> Result<Vec<Vec<Complex64>>> {
    pencil_invariants(&build_pencil(st), m_max)
}

/// [`spectral_invariants`] for an arbitrary pencil.
pub fn pencil_invariants(p: &LaxPencil, m_max: usize) -> Result<Vec<Vec<Complex64>>> {
    if m_max > p.n() {
        return Err(Error::invalid("m_max", format!("must be at most n = {}", p.n())));
    }
    let mut out = Vec::with_capacity(m_max);
    let mut power: Vec<CMat> = p.bcoeffs.to_vec();
    for m in 1..=m_max {
        if m > 1 {
            power = mat_poly_mul(&power, &p.bcoeffs);
        }
        out.push(power.iter().map(|c| c.trace()).collect());
    }
    Ok(out)
}

/// `max |c(t) − c(0)|` over grid points and invariant coefficients.
pub fn invariant_drift(path: &NahmPath, m_max: usize) -> Result<f64> {
    let series = invariant_drift_series(path, m_max)?;
    Ok(series.into_iter().flatten().fold(0.0, f64::max))
}

/// Row `i` holds `|c(t_i) − c(0)|` for each coefficient, `m` ascending then
/// power of ζ ascending.
pub fn invariant_drift_series(path: &NahmPath, m_max: usize) -> Result<Vec<Vec<f64>>> {
    let base: Vec<Complex64> = spectral_invariants(&path.states[0], m_max)?.concat();
    path.states
        .iter()
        .map(|st| {
            let cur = spectral_invariants(st, m_max)?.concat();
            Ok(cur.iter().zip(&base).map(|(x, y)| (x - y).norm()).collect())
        })
        .collect()
}

/// Drift at `N` and `2N` steps and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub steps: usize,
    pub drift_coarse: f64,
    pub drift_fine: f64,
    pub ratio: f64,
}

/// Invariant drift at `t = 1` for `N` and `2N` steps.
pub fn convergence_study(initial: &NahmState, m_max: usize, steps: usize) -> Result<ConvergenceReport> {
    let end_drift = |n: usize| -> Result<f64> {
        let path = integrate(initial, n)?;
        let base = spectral_invariants(&path.states[0], m_max)?.concat();
        let end = spectral_invariants(path.last(), m_max)?.concat();
        Ok(end.iter().zip(&base).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    };
    let drift_coarse = end_drift(steps)?;
    let drift_fine = end_drift(2 * steps)?;
    Ok(ConvergenceReport {
        steps,
        drift_coarse,
        drift_fine,
        ratio: drift_coarse / drift_fine,
    })
}

/// Derivative of samples on a uniform grid: fourth-order five-point
/// stencils (one-sided near the ends), with lower-order fallbacks for
/// fewer than five samples.
pub fn grid_derivative(values: &[CMat], h: f64) -> Vec<CMat> {
    let len = values.len();
    let lin = |w: &[(usize, f64)], scale: f64| {
        let mut acc = values[0].clone() * Complex64::zero();
        for &(i, c) in w {
            acc += &values[i] * Complex64::from(c);
        }
        acc / Complex64::from(scale)
    };
    match len {
        0 => Vec::new(),
        1 => vec![values[0].clone() * Complex64::zero()],
        2 => {
            let d = lin(&[(0, -1.0), (1, 1.0)], h);
            vec![d.clone(), d]
        }
        3 | 4 => (0..len)
            .map(|i| {
                if i == 0 {
                    lin(&[(0, -3.0), (1, 4.0), (2, -1.0)], 2.0 * h)
                } else if i == len - 1 {
                    lin(&[(i, 3.0), (i - 1, -4.0), (i - 2, 1.0)], 2.0 * h)
                } else {
                    lin(&[(i + 1, 1.0), (i - 1, -1.0)], 2.0 * h)
                }
            })
            .collect(),
        _ => (0..len)
            .map(|i| {
                let s = 12.0 * h;
                if i == 0 {
                    lin(&[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)], s)
                } else if i == 1 {
                    lin(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)], s)
                } else if i == len - 1 {
                    let j = i;
                    lin(&[(j, 25.0), (j - 1, -48.0), (j - 2, 36.0), (j - 3, -16.0), (j - 4, 3.0)], s)
                } else if i == len - 2 {
                    let j = len - 1;
                    lin(&[(j, 3.0), (j - 1, 10.0), (j - 2, -18.0), (j - 3, 6.0), (j - 4, -1.0)], s)
                } else {
                    lin(&[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)], s)
                }
            })
            .collect(),
    }
}

fn invert(g: &CMat, index: usize) -> Result<CMat> {
    let inv = g.clone().try_inverse().ok_or(Error::Singular { index })?;
    if !is_finite(&inv) {
        return Err(Error::Singular { index });
    }
    Ok(inv)
}

/// `α ↦ gαg⁻¹ − ġg⁻¹`, `β ↦ gβg⁻¹`, `γ ↦ gγg⁻¹` with `ġ` from
/// [`grid_derivative`].
pub fn gauge_transform(path: &NahmPath, gpath: &[CMat]) -> Result<NahmPath> {
    if gpath.len() != path.states.len() {
        return Err(Error::DimensionMismatch(format!(
            "gauge path has {} points, state path has {}",
            gpath.len(),
            path.states.len()
        )));
    }
    let n = path.n();
    if let Some(g) = gpath.iter().find(|g| g.shape() != (n, n)) {
        return Err(Error::DimensionMismatch(format!("gauge matrix is {:?}, expected {n}x{n}", g.shape())));
    }
    let dg = grid_derivative(gpath, path.h());
    let states = path
        .states
        .iter()
        .zip(gpath)
        .zip(&dg)
        .enumerate()
        .map(|(i, ((st, g), dg))| {
            let gi = invert(g, i)?;
            let mut out = st.conjugate(g, &gi);
            out.alpha -= dg * &gi;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NahmPath {
        grid: path.grid.clone(),
        states,
    })
}

/// Cubic interpolation of grid samples at `t_i + h/2`.
fn midpoint(values: &[CMat], i: usize) -> CMat {
    let len = values.len();
    if len < 4 {
        return (&values[i] + &values[(i + 1).min(len - 1)]) * Complex64::from(0.5);
    }
    // Four consecutive samples around the interval [t_i, t_{i+1}].
    let start = i.saturating_sub(1).min(len - 4);
    let x = i as f64 + 0.5 - start as f64;
    let nodes = [0.0, 1.0, 2.0, 3.0];
    let mut acc = values[0].clone() * Complex64::zero();
    for (a, &xa) in nodes.iter().enumerate() {
        let w: f64 = nodes
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, &xb)| (x - xb) / (xa - xb))
            .product();
        acc += &values[start + a] * Complex64::from(w);
    }
    acc
}

/// RK4 for `ġ = g·X(t)`, `g(0) = 1`, with `X` sampled on the grid and
/// interpolated at midpoints.
fn right_transport(xs: &[CMat], h: f64) -> Result<Vec<CMat>> {
    let n = xs[0].nrows();
    let mut gs = Vec::with_capacity(xs.len());
    gs.push(CMat::identity(n, n));
    for i in 0..xs.len() - 1 {
        let g = &gs[i];
        let xm = midpoint(xs, i);
        let k1 = g * &xs[i];
        let k2 = (g + &k1 * Complex64::from(h / 2.0)) * &xm;
        let k3 = (g + &k2 * Complex64::from(h / 2.0)) * &xm;
        let k4 = (g + &k3 * Complex64::from(h)) * &xs[i + 1];
        let next = g + (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0);
        if !is_finite(&next) {
            return Err(Error::NonFinite { step: i + 1 });
        }
        gs.push(next);
    }
    Ok(gs)
}

/// Gauge with `ġ = g·α_ah`, `g(0) = 1`, making α hermitian. Uses the exact
/// `ġ`, so the new α is `g α_h g⁻¹`.
pub fn hermitian_gauge(path: &NahmPath) -> Result<(NahmPath, Vec<CMat>)> {
    let ah: Vec<CMat> = path.states.iter().map(|s| antihermitian_part(&s.alpha)).collect();
    let gs = right_transport(&ah, path.h())?;
    let states = path
        .states
        .iter()
        .zip(&gs)
        .enumerate()
        .map(|(i, (st, g))| {
            let gi = invert(g, i)?;
            let mut out = st.conjugate(g, &gi);
            out.alpha = g * hermitian_part(&st.alpha) * &gi;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        NahmPath {
            grid: path.grid.clone(),
            states,
        },
        gs,
    ))
}

/// `(g(1), α(0) + α†(0), β(0), γ(0))` in the hermitian gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub g1: CMat,
    pub a0: CMat,
    pub b0: CMat,
    pub c0: CMat,
}

impl BoundaryData {
    pub fn max_diff(&self, other: &BoundaryData) -> f64 {
        use crate::linalg::max_abs_diff;
        max_abs_diff(&self.g1, &other.g1)
            .max(max_abs_diff(&self.a0, &other.a0))
            .max(max_abs_diff(&self.b0, &other.b0))
            .max(max_abs_diff(&self.c0, &other.c0))
    }
}

pub fn boundary_data(path: &NahmPath) -> Result<BoundaryData> {
    let (gauged, gs) = hermitian_gauge(path)?;
    let s0 = &gauged.states[0];
    Ok(BoundaryData {
        g1: gs[gs.len() - 1].clone(),
        a0: &s0.alpha + s0.alpha.adjoint(),
        b0: s0.beta.clone(),
        c0: s0.gamma.clone(),
    })
}

/// `g(t)β(t)g(t)⁻¹` at every grid point, where `ġ = g·α`, `g(0) = 1`.
pub fn complex_gauge_orbit(path: &NahmPath) -> Result<Vec<CMat>> {
    let alphas: Vec<CMat> = path.states.iter().map(|s| s.alpha.clone()).collect();
    let gs = right_transport(&alphas, path.h())?;
    gs.iter()
        .zip(&path.states)
        .enumerate()
        .map(|(i, (g, st))| Ok(g * &st.beta * invert(g, i)?))
        .collect()
}

/// [`complex_gauge_orbit`] at `t = 1`.
pub fn complex_gauge_invariant(path: &NahmPath) -> Result<CMat> {
    Ok(complex_gauge_orbit(path)?.pop().expect("paths are nonempty"))
}

/// `Ḃ = [B, A]` on the pencil coefficients alone, with
/// `A = (b₂/2 + α_ah) + b₃ζ + b₄ζ²`.
pub fn pencil_rhs(p: &[CMat; 5], alpha_ah: &CMat) -> [CMat; 5] {
    let a0 = &p[2] * Complex64::from(0.5) + alpha_ah;
    let a = [a0, p[3].clone(), p[4].clone()];
    core::array::from_fn(|m| {
        let mut acc = CMat::zeros(alpha_ah.nrows(), alpha_ah.ncols());
        for j in 0..3 {
            if m >= j {
                acc += commutator(&p[m - j], &a[j]);
            }
        }
        acc
    })
}

/// RK4 for [`pencil_rhs`]; returns the pencil coefficients at every grid
/// point.
pub fn integrate_pencil(initial: &[CMat; 5], alpha_ah: &CMat, steps: usize) -> Result<Vec<[CMat; 5]>> {
    if steps == 0 {
        return Err(Error::invalid("steps", "need at least one step"));
    }
    let h = 1.0 / steps as f64;
    let axpy = |x: &[CMat; 5], t: f64, d: &[CMat; 5]| -> [CMat; 5] {
        core::array::from_fn(|i| &x[i] + &d[i] * Complex64::from(t))
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial.clone());
    for step in 1..=steps {
        let next = rk4_step(
            &out[step - 1],
            h,
            |x, _| pencil_rhs(x, alpha_ah),
            axpy,
            |x, h, [k1, k2, k3, k4]| {
                let y = axpy(x, h / 6.0, k1);
                let y = axpy(&y, h / 3.0, k2);
                let y = axpy(&y, h / 3.0, k3);
                axpy(&y, h / 6.0, k4)
            },
        );
        if !next.iter().all(is_finite) {
            return Err(Error::NonFinite { step });
        }
        out.push(next);
    }
    Ok(out)
}

/// Reality residual of raw pencil coefficients.
pub fn coeffs_reality_residual(b: &[CMat; 5]) -> f64 {
    let n = b[0].nrows();
    LaxPencil {
        bcoeffs: b.clone(),
        acoeffs: [CMat::zeros(n, n), CMat::zeros(n, n), CMat::zeros(n, n)],
    }
    .reality_residual()
}
