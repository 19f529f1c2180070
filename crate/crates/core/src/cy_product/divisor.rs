//! The gerbe of `pt × D⁴ ⊂ S¹ × T⁶` and its pushforward to `T⁶`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{
    d_m, d_theta, dstar_m, hodge_m, j_one_form, laplacian_m, non_11_fraction, product_structure, pushforward,
    SU3Structure,
};
use crate::error::{invalid, Result};
use crate::exterior::{Blade, CForm, DIM};
use crate::torus_field::{monopole_residual, solve_poisson, FourierForm, Wave};

/// A coordinate 4-torus `D ⊂ T⁶` placed at `θ = theta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubTorus4 {
    /// Sorted tangent axes in `{2..7}`.
    pub tangent: [usize; 4],
    /// Sorted normal axes in `{2..7}`.
    pub normal: [usize; 2],
    pub offsets: [f64; 2],
    pub theta: f64,
    pub complex: bool,
}

impl SubTorus4 {
    pub fn new(tangent: [usize; 4], offsets: [f64; 2], theta: f64) -> Result<Self> {
        let mut t = tangent;
        t.sort_unstable();
        if t.windows(2).any(|w| w[0] == w[1]) || t.iter().any(|&i| !(2..=DIM).contains(&i)) {
            return Err(invalid(format!("tangent axes {tangent:?} must be four distinct values in 2..=7")));
        }
        if offsets.iter().chain([&theta]).any(|c| !c.is_finite()) {
            return Err(invalid("offsets must be finite"));
        }
        let n: Vec<usize> = (2..=DIM).filter(|i| !t.contains(i)).collect();
        Ok(SubTorus4 {
            tangent: t,
            normal: [n[0], n[1]],
            offsets,
            theta,
            complex: SU3Structure::is_complex_subset(&t),
        })
    }

    /// `{z_3 = c}`.
    pub fn divisor_z3(c: [f64; 2], theta: f64) -> Self {
        Self::new([2, 3, 4, 5], c, theta).expect("static axes")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Rejects non-complex `D`.
    Strict,
    /// Runs the pipeline on any coordinate `D` as a negative control.
    Diagnostic,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PushforwardResidues {
    /// `‖d_M f₀‖`.
    pub closure_of_f0: f64,
    /// `‖Δ_M f₀ − (h₀ − δ_D)‖`.
    pub poisson: f64,
    /// `‖(2,0) + (0,2) part of Δ_M f₀‖ / ‖Δ_M f₀‖`.
    pub pq_type: f64,
    /// Same fraction for `h₀`.
    pub h0_pq_type: f64,
    /// Norm of the `θ`-dependent part of `g`.
    pub g_theta_dependence: f64,
    pub g_norm: f64,
    /// `‖d_M f − ∂g/∂θ‖ + ‖d_M g‖`.
    pub separation: f64,
    /// `‖ΔH₀ − (dθ∧(Δ_M f − ∂²f/∂θ²) + Δ_M g − ∂²g/∂θ²)‖ / ‖ΔH₀‖`.
    pub split_laplacian: f64,
    /// Relative monopole residual of `(d*H₀, higgs)` on `S¹ × T⁶`.
    pub monopole: f64,
    /// `‖d*_M f₀ ∧ ω²/2 − *_M d_M Φ‖ / ‖d*_M f₀‖`.
    pub fibre_equation: f64,
    /// `‖d*_M f₀ + J d_M Φ‖ / ‖d*_M f₀‖`.
    pub complex_gradient: f64,
    /// `‖Δ_M f₀ + d_M J d_M Φ‖ / ‖Δ_M f₀‖`, i.e. `Δf₀ = 2i∂∂̄Φ`.
    pub ddbar: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardResult {
    pub divisor: SubTorus4,
    pub sigma_theta: f64,
    pub sigma_normal: f64,
    pub bound: i32,
    #[serde(skip)]
    pub f0: FourierForm,
    /// `π_* H`, the harmonic representative of `PD[D]`.
    #[serde(skip)]
    pub h0: FourierForm,
    /// `∫ higgs dθ`.
    #[serde(skip)]
    pub phi_fn: FourierForm,
    pub residuals: PushforwardResidues,
}

/// `δ_D δ(θ − θ₀)` with independent Gaussian widths, as a 2-form on `T⁶` with circle dependence.
fn product_current(d: &SubTorus4, sigma_theta: f64, sigma_normal: f64, bound: i32) -> Result<FourierForm> {
    let vol = Blade::from_sorted(&d.normal).expect("axes");
    let mut modes = Vec::new();
    for k1 in -bound..=bound {
        for a in -bound..=bound {
            for b in -bound..=bound {
                let mut k: Wave = [0; DIM];
                k[0] = k1;
                k[d.normal[0] - 1] = a;
                k[d.normal[1] - 1] = b;
                let e = sigma_theta * sigma_theta * f64::from(k1 * k1)
                    + sigma_normal * sigma_normal * f64::from(a * a + b * b);
                let phase = f64::from(k1) * d.theta + f64::from(a) * d.offsets[0] + f64::from(b) * d.offsets[1];
                modes.push((k, CForm::monomial(vol, Complex64::from_polar((-2.0 * PI * PI * e).exp(), -2.0 * PI * phase))));
            }
        }
    }
    FourierForm::from_modes(2, bound, modes, true)
}

fn split_theta(h: &FourierForm) -> (FourierForm, FourierForm) {
    let g = h.map_modes(h.degree, |_, c| CForm::from_terms(c.terms().filter(|(b, _)| !b.contains(1)).map(|(b, z)| (b, *z))));
    let f = h.map_modes(h.degree - 1, |_, c| {
        CForm::from_terms(c.terms().filter(|(b, _)| b.contains(1)).map(|(b, z)| (b, *z))).contract_basis(1)
    });
    (g, f)
}

fn dtheta_wedge(f: &FourierForm) -> FourierForm {
    let e1 = CForm::basis(Blade::from_sorted(&[1]).expect("axis"));
    f.map_modes(f.degree + 1, |_, c| e1.wedge(c))
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a
    } else {
        a / b
    }
}

/// Solves `ΔH₀ = (h − δ_D δ(θ − θ₀)) ∧ dθ` and checks every consequence on `T⁶`.
pub fn divisor_solve(d: &SubTorus4, sigma_theta: f64, sigma_normal: f64, bound: i32, mode: SolveMode) -> Result<PushforwardResult> {
    if !d.complex && mode == SolveMode::Strict {
        return Err(invalid(format!("tangent axes {:?} are not a complex subspace", d.tangent)));
    }
    if !(sigma_theta > 0.0 && sigma_normal > 0.0) {
        return Err(invalid("mollifier widths must be positive"));
    }
    if bound < 1 {
        return Err(invalid(format!("truncation must be at least 1, got {bound}")));
    }
    let g2 = product_structure();
    let su3 = SU3Structure::standard();
    let h = FourierForm::constant(&CForm::basis(Blade::from_sorted(&d.normal).expect("axes")), bound)?;
    let delta = product_current(d, sigma_theta, sigma_normal, bound)?;
    let forcing = dtheta_wedge(&h.sub(&delta)?);
    let h_big = solve_poisson(&forcing)?;
    let (g, f) = split_theta(&h_big);

    let g_theta = g.map_modes(g.degree, |k, c| if k[0] == 0 { CForm::zero() } else { c.clone() });
    let separation = d_m(&f).sub(&d_theta(&g))?.norm() + d_m(&g).norm();
    let second = |x: &FourierForm| laplacian_m(x).sub(&d_theta(&d_theta(x)));
    let assembled = dtheta_wedge(&second(&f)?).add(&second(&g)?)?;
    let lap_big = h_big.laplacian();
    let split_laplacian = ratio(lap_big.sub(&assembled)?.norm(), lap_big.norm());

    let f0 = pushforward(&h_big);
    let h0 = pushforward(&dtheta_wedge(&h));
    let delta_d = pushforward(&dtheta_wedge(&delta));
    let lap_f0 = laplacian_m(&f0);
    let poisson = lap_f0.sub(&h0.sub(&delta_d)?)?.norm();

    let phi = g2.phi().to_complex();
    let pp = phi.norm_sqr();
    let f_big = h_big.dstar();
    let higgs = h_big.map_modes(0, |_, c| CForm::scalar(-phi.hermitian(c) * (7.0 / pp)));
    let (_, monopole) = monopole_residual(&f_big, &higgs, g2)?;
    let phi_fn = higgs.map_modes(0, |k, c| if k[0] == 0 { c.clone() } else { CForm::zero() });

    let ds_f0 = dstar_m(&f0);
    let half_w2 = &su3.omega.wedge(&su3.omega) * num_rational::BigRational::new(1.into(), 2.into());
    let dphi = d_m(&phi_fn);
    let fibre_equation = ratio(ds_f0.wedge_const(&half_w2).sub(&hodge_m(&dphi)?)?.norm(), ds_f0.norm());
    let jdphi = j_one_form(&dphi)?;
    let complex_gradient = ratio(ds_f0.add(&jdphi)?.norm(), ds_f0.norm());
    let ddbar = ratio(lap_f0.add(&d_m(&jdphi))?.norm(), lap_f0.norm());

    let residuals = PushforwardResidues {
        closure_of_f0: d_m(&f0).norm(),
        poisson,
        pq_type: non_11_fraction(&lap_f0)?,
        h0_pq_type: non_11_fraction(&h0)?,
        g_theta_dependence: g_theta.norm(),
        g_norm: g.norm(),
        separation,
        split_laplacian,
        monopole,
        fibre_equation,
        complex_gradient,
        ddbar,
    };
    Ok(PushforwardResult {
        divisor: d.clone(),
        sigma_theta,
        sigma_normal,
        bound,
        f0,
        h0,
        phi_fn,
        residuals,
    })
}
