//! Flux of `F₀` through small 2-spheres linking `N`.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use super::{FourierForm, GerbeSolveResult};
use crate::error::{invalid, Result};
use crate::exterior::Blade;

#[derive(Clone, Debug, Serialize)]
pub struct LinkingResult {
    pub radius: f64,
    pub quad_order: usize,
    /// `∫_{S²} F₀`.
    pub flux_f0: f64,
    /// `∫_{S²} F_loc` for the local primitive `F_loc = (y₁ − c₁) e^{jk}` of `H`.
    pub flux_local: f64,
    /// `∫_{S²} (F_loc − F₀) = ∫_{B³} δ`.
    pub linking: f64,
}

/// Flux of a 2-form through the sphere of radius `r` about `center` in the given axes.
///
/// Gauss-Legendre in `cos θ` with `order` nodes, trapezoid in the azimuth with
/// `2·order` nodes. Wavevector phases are separable per axis.
pub fn sphere_flux(f: &FourierForm, axes: [usize; 3], center: [f64; 3], r: f64, order: usize) -> Result<f64> {
    if f.degree != 2 {
        return Err(invalid("sphere flux needs a 2-form"));
    }
    let rule = GaussLegendre::new(order).map_err(|e| invalid(format!("quadrature order {order}: {e}")))?;
    let [i, j, k] = axes;
    let b = |a: usize, c: usize| Blade::from_sorted(&[a, c]).expect("distinct axes");
    // Flux density V·n with V = (F_jk, −F_ik, F_ij).
    let comps = [(b(j, k), 1.0), (b(i, k), -1.0), (b(i, j), 1.0)];
    let bound = f.bound.max(0) as usize;
    let width = 2 * bound + 1;
    let mut modes: Vec<([i32; 3], [Complex64; 3])> = Vec::new();
    for (kv, c) in &f.modes {
        if kv.iter().enumerate().any(|(a, &x)| x != 0 && !axes.contains(&(a + 1))) {
            return Err(invalid("sphere flux needs a field constant along the tangent axes"));
        }
        let w = [kv[i - 1], kv[j - 1], kv[k - 1]];
        let v = comps.map(|(bl, s)| c.coeff(bl) * s);
        modes.push((w, v));
    }
    let n_phi = 2 * order;
    let mut total = 0.0;
    let mut pow = vec![[Complex64::new(0.0, 0.0); 3]; width];
    for &(t, wt) in rule.as_node_weight_pairs() {
        let st = (1.0 - t * t).max(0.0).sqrt();
        for m in 0..n_phi {
            let ph = 2.0 * PI * m as f64 / n_phi as f64;
            let n = [st * ph.cos(), st * ph.sin(), t];
            let y: [f64; 3] = std::array::from_fn(|a| center[a] + r * n[a]);
            for (a, ya) in y.iter().enumerate() {
                let base = Complex64::from_polar(1.0, 2.0 * PI * ya);
                let inv = base.conj();
                pow[bound][a] = Complex64::new(1.0, 0.0);
                for s in 1..=bound {
                    pow[bound + s][a] = pow[bound + s - 1][a] * base;
                    pow[bound - s][a] = pow[bound - s + 1][a] * inv;
                }
            }
            let mut density = Complex64::new(0.0, 0.0);
            for (w, v) in &modes {
                let e = pow[(w[0] + bound as i32) as usize][0]
                    * pow[(w[1] + bound as i32) as usize][1]
                    * pow[(w[2] + bound as i32) as usize][2];
                density += e * (v[0] * n[0] + v[1] * n[1] + v[2] * n[2]);
            }
            total += wt * density.re;
        }
    }
    Ok(total * r * r * 2.0 * PI / n_phi as f64)
}

/// `∫_{S²} (F_loc − F₀)` over the normal sphere of radius `r` centred on `N`.
pub fn linking_number(result: &GerbeSolveResult, r: f64, order: usize) -> Result<LinkingResult> {
    let sigma = result.sigma;
    if !(r > 3.0 * sigma && r < 0.5) {
        return Err(invalid(format!("linking radius {r} must satisfy 3σ = {} < r < 0.5", 3.0 * sigma)));
    }
    let axes = result.torus.normal;
    let center = result.torus.offsets;
    let flux_f0 = sphere_flux(&result.f0, axes, center, r, order)?;
    // ∫ (y₁ − c₁) n₁ dA = r³ ∫ n₁² dΩ = 4πr³/3, evaluated by the same rule.
    let rule = GaussLegendre::new(order).map_err(|e| invalid(e.to_string()))?;
    let n_phi = 2 * order;
    let mut acc = 0.0;
    for &(t, wt) in rule.as_node_weight_pairs() {
        let st2 = (1.0 - t * t).max(0.0);
        for m in 0..n_phi {
            let ph = 2.0 * PI * m as f64 / n_phi as f64;
            let n1 = st2.sqrt() * ph.cos();
            acc += wt * (r * n1) * n1;
        }
    }
    let h = result.h.coeff(&super::ZERO_WAVE).coeff(result.torus.normal_volume()).re;
    let flux_local = h * acc * r * r * 2.0 * PI / n_phi as f64;
    Ok(LinkingResult { radius: r, quad_order: order, flux_f0, flux_local, linking: flux_local - flux_f0 })
}
