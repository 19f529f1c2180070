//! Spectral Poisson solves and the monopole gerbe connection.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{delta_current, harmonic_rep, wave_norm_sqr, CoassocTorus, FourierForm, ZERO_WAVE};
use crate::error::{invalid, Error, Result};
use crate::g2_reps::G2Structure;

/// Mode-0 tolerance for solvability.
pub const MEAN_TOL: f64 = 1e-12;

/// Zero-mean solution `u` of `Δu = f`; requires `f` to have no constant mode.
pub fn solve_poisson(f: &FourierForm) -> Result<FourierForm> {
    let mean = f.mean_norm();
    if mean > MEAN_TOL {
        return Err(Error::Unsolvable { what: format!("Poisson equation for a {}-form", f.degree), obstruction: mean });
    }
    let mut u = f.map_modes(f.degree, |k, c| {
        if *k == ZERO_WAVE {
            return Default::default();
        }
        c.scale(&Complex64::new(1.0 / (4.0 * PI * PI * wave_norm_sqr(k)), 0.0))
    });
    u.modes.remove(&ZERO_WAVE);
    Ok(u)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Residuals {
    /// `‖*(F₀∧ψ) − d(higgs)‖ / ‖d(higgs)‖`.
    pub monopole: f64,
    /// `‖dH₀‖`.
    pub closure: f64,
    /// `‖dF₀ − (H − δ)‖`.
    pub curvature: f64,
    /// `‖π₇ H₀‖`.
    pub pi7: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GerbeSolveResult {
    pub torus: CoassocTorus,
    pub sigma: f64,
    pub bound: i32,
    #[serde(skip)]
    pub h: FourierForm,
    #[serde(skip)]
    pub delta: FourierForm,
    #[serde(skip)]
    pub h0: FourierForm,
    #[serde(skip)]
    pub f0: FourierForm,
    /// `π₁(H₀) = −aφ`.
    #[serde(skip)]
    pub a: FourierForm,
    /// `7a`.
    #[serde(skip)]
    pub higgs: FourierForm,
    pub residuals: Residuals,
    pub modes: usize,
}

/// `(‖*(F∧ψ) − dh‖, relative)`, relative to the largest of `‖*(F∧ψ)‖`, `‖dh‖`, `‖F‖`.
pub fn monopole_residual(f: &FourierForm, higgs: &FourierForm, g2: &G2Structure) -> Result<(f64, f64)> {
    if f.degree != 2 || higgs.degree != 0 {
        return Err(invalid("monopole residual needs a 2-form and a function"));
    }
    let lhs = f.wedge_const(g2.psi()).hodge();
    let rhs = higgs.d();
    let abs = lhs.sub(&rhs)?.norm();
    let scale = lhs.norm().max(rhs.norm()).max(f.norm());
    Ok((abs, if scale == 0.0 { 0.0 } else { abs / scale }))
}

/// Builds `H₀, F₀, a, higgs` for the gerbe of `N` and measures every identity.
pub fn gerbe_connection(n: &CoassocTorus, sigma: f64, bound: i32, g2: &G2Structure) -> Result<GerbeSolveResult> {
    let h = harmonic_rep(n, bound);
    let delta = delta_current(n, sigma, bound)?;
    let forcing = h.sub(&delta)?;
    let h0 = solve_poisson(&forcing)?;
    let f0 = h0.dstar();
    let phi = g2.phi().to_complex();
    let pp = phi.norm_sqr();
    let a = h0.map_modes(0, |_, c| crate::exterior::CForm::scalar(-phi.hermitian(c) / pp));
    let higgs = a.scale(Complex64::new(7.0, 0.0));

    let lhs = f0.wedge_const(g2.psi()).hodge();
    let dh = higgs.d();
    let monopole = lhs.sub(&dh)?.norm() / dh.norm().max(f64::MIN_POSITIVE);
    let residuals = Residuals {
        monopole,
        closure: h0.d().norm(),
        curvature: f0.d().sub(&forcing)?.norm(),
        pi7: h0.pi7(g2)?.norm(),
    };
    Ok(GerbeSolveResult {
        torus: n.clone(),
        sigma,
        bound,
        modes: h0.mode_count(),
        h,
        delta,
        h0,
        f0,
        a,
        higgs,
        residuals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonopoleCorrection {
    #[serde(skip)]
    pub b: FourierForm,
    /// `a = *(db∧ψ)`.
    #[serde(skip)]
    pub a_corr: FourierForm,
    /// `−d*b`.
    #[serde(skip)]
    pub higgs: FourierForm,
    /// `F′ + da`.
    #[serde(skip)]
    pub f: FourierForm,
    pub residual_abs: f64,
    pub residual_rel: f64,
    /// `‖dF − dF′‖`.
    pub curvature_change: f64,
}

/// Solves `Δb = −*(F′∧ψ)` and corrects `F′` to a monopole.
pub fn monopole_correction(fprime: &FourierForm, g2: &G2Structure) -> Result<MonopoleCorrection> {
    if fprime.degree != 2 {
        return Err(invalid("monopole correction needs a 2-form"));
    }
    let source = fprime.wedge_const(g2.psi()).hodge();
    let mean = source.mean_norm();
    if mean > MEAN_TOL {
        return Err(Error::Unsolvable { what: "constant mode of *(F'^psi)".into(), obstruction: mean });
    }
    let b = solve_poisson(&source.scale(Complex64::new(-1.0, 0.0)))?;
    let a_corr = b.d().wedge_const(g2.psi()).hodge();
    let higgs = b.dstar().scale(Complex64::new(-1.0, 0.0));
    let f = fprime.add(&a_corr.d())?;
    let (residual_abs, residual_rel) = monopole_residual(&f, &higgs, g2)?;
    let curvature_change = f.d().sub(&fprime.d())?.norm();
    Ok(MonopoleCorrection { b, a_corr, higgs, f, residual_abs, residual_rel, curvature_change })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub absolute_change: f64,
    pub relative_change: f64,
    pub f0_norm: f64,
    pub gauge_norm: f64,
}

/// Solves for `F₀ = F₀¹ + F₀²` under two splittings of `H = H₁ + H₂` that differ by `d(gauge)`.
pub fn split_solve(
    n1: &CoassocTorus,
    n2: &CoassocTorus,
    gauge: &FourierForm,
    sigma: f64,
    bound: i32,
) -> Result<SplitReport> {
    if n1.normal != n2.normal {
        return Err(invalid("split_solve needs parallel tori"));
    }
    if gauge.degree != 2 && !gauge.modes.is_empty() {
        return Err(invalid("gauge must be a 2-form"));
    }
    let piece = |n: &CoassocTorus, shift: &FourierForm| -> Result<FourierForm> {
        let forcing = harmonic_rep(n, bound).add(shift)?.sub(&delta_current(n, sigma, bound)?)?;
        Ok(solve_poisson(&forcing)?.dstar())
    };
    let dg = gauge.d();
    let none = FourierForm::zero(3, bound);
    let a = piece(n1, &none)?.add(&piece(n2, &none)?)?;
    let b = piece(n1, &dg)?.add(&piece(n2, &dg.scale(Complex64::new(-1.0, 0.0)))?)?;
    let absolute_change = a.sub(&b)?.norm();
    let f0_norm = a.norm();
    Ok(SplitReport {
        absolute_change,
        relative_change: if f0_norm == 0.0 { absolute_change } else { absolute_change / f0_norm },
        f0_norm,
        gauge_norm: gauge.norm(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactCurvatureReport {
    /// `‖dH₀‖`: `H₀` is the closed 3-form `G` with `F = d*G`.
    pub closure: f64,
    /// `‖F₀ − d*H₀‖`.
    pub witness: f64,
    /// `‖π₇ dF₀‖`.
    pub pi7_curvature: f64,
    pub monopole: f64,
    pub passed: bool,
}

/// Checks that `F₀ = d*G` with `G = H₀` closed and that `π₇ dF₀` vanishes.
pub fn lemma3_check(result: &GerbeSolveResult, g2: &G2Structure, tol: f64) -> Result<ExactCurvatureReport> {
    let closure = result.h0.d().norm();
    let witness = result.f0.sub(&result.h0.dstar())?.norm();
    let df = result.f0.d();
    let pi7_curvature = if df.modes.is_empty() { 0.0 } else { df.pi7(g2)?.norm() };
    let (_, monopole) = monopole_residual(&result.f0, &result.higgs, g2)?;
    let passed = closure <= tol && witness <= tol && pi7_curvature <= tol && monopole <= tol;
    Ok(ExactCurvatureReport { closure, witness, pi7_curvature, monopole, passed })
}
