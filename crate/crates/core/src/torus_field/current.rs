//! Coordinate coassociative 4-tori, their harmonic Poincaré duals and mollified currents.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{FourierForm, Wave};
use crate::error::{invalid, Result};
use crate::exterior::{Blade, CForm, Form, DIM};
use crate::g2_reps::{Calibration, G2Structure};

/// `N = {x_i = c_i for the three normal axes i}`, a coordinate 4-torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoassocTorus {
    /// Sorted 1-based normal axes.
    pub normal: [usize; 3],
    pub offsets: [f64; 3],
    pub calibration: Calibration,
}

impl CoassocTorus {
    /// Validates that the tangent 4-subset is (possibly negatively) calibrated by `ψ`.
    pub fn new(normal: [usize; 3], offsets: [f64; 3], g2: &G2Structure) -> Result<Self> {
        let mut n = normal;
        n.sort_unstable();
        if n.windows(2).any(|w| w[0] == w[1]) || n.iter().any(|&i| !(1..=DIM).contains(&i)) {
            return Err(invalid(format!("normal axes {normal:?} must be three distinct values in 1..=7")));
        }
        let mut offsets_sorted = [0.0; 3];
        for (slot, &axis) in offsets_sorted.iter_mut().zip(&n) {
            let src = normal.iter().position(|&a| a == axis).expect("permutation");
            *slot = offsets[src];
        }
        if offsets_sorted.iter().any(|c| !c.is_finite()) {
            return Err(invalid("offsets must be finite"));
        }
        let tangent: Vec<usize> = (1..=DIM).filter(|i| !n.contains(i)).collect();
        let calibration = g2.calibration_check(&tangent)?.class;
        match calibration {
            Calibration::Coassociative | Calibration::NegativelyCalibrated => {}
            other => {
                return Err(invalid(format!("tangent axes {tangent:?} are {other:?}, not coassociative")));
            }
        }
        Ok(CoassocTorus { normal: n, offsets: offsets_sorted, calibration })
    }

    pub fn tangent(&self) -> Vec<usize> {
        (1..=DIM).filter(|i| !self.normal.contains(i)).collect()
    }

    /// `e^{ijk}` over the normal axes.
    pub fn normal_volume(&self) -> Blade {
        Blade::from_sorted(&self.normal).expect("valid axes")
    }

    /// Same torus with offsets moved by `shift`.
    pub fn shifted(&self, shift: [f64; 3]) -> CoassocTorus {
        let mut c = self.clone();
        for (o, s) in c.offsets.iter_mut().zip(shift) {
            *o += s;
        }
        c
    }
}

/// The constant harmonic 3-form `dx^i∧dx^j∧dx^k` over the normal axes.
pub fn harmonic_rep(n: &CoassocTorus, bound: i32) -> FourierForm {
    let c = CForm::basis(n.normal_volume());
    FourierForm::constant(&c, bound).expect("homogeneous")
}

/// Gaussian-mollified current: `Σ exp(−2π²σ²|k|²) e^{−2πi k·c} e^{2πi k·x} e^{ijk}`
/// over wavevectors supported on the normal axes with `|k|_∞ ≤ K`.
pub fn delta_current(n: &CoassocTorus, sigma: f64, bound: i32) -> Result<FourierForm> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("mollifier width must be positive, got {sigma}")));
    }
    if bound < 1 {
        return Err(invalid(format!("truncation must be at least 1, got {bound}")));
    }
    let vol = n.normal_volume();
    let mut modes = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let mut k: Wave = [0; DIM];
                let kn = [a, b, c];
                for (axis, &v) in n.normal.iter().zip(&kn) {
                    k[axis - 1] = v;
                }
                let k2 = f64::from(a * a + b * b + c * c);
                let weight = (-2.0 * PI * PI * sigma * sigma * k2).exp();
                let phase: f64 = kn.iter().zip(&n.offsets).map(|(&kj, cj)| f64::from(kj) * cj).sum();
                let coeff = Complex64::from_polar(weight, -2.0 * PI * phase);
                modes.push((k, Form::monomial(vol, coeff)));
            }
        }
    }
    FourierForm::from_modes(3, bound, modes, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2_reps::Convention;
    use crate::torus_field::ZERO_WAVE;

    fn g2() -> &'static G2Structure {
        G2Structure::model(Convention::Default)
    }

    fn n123() -> CoassocTorus {
        CoassocTorus::new([1, 2, 3], [0.3, 0.6, 0.1], g2()).unwrap()
    }

    #[test]
    fn construction() {
        let n = n123();
        assert_eq!(n.tangent(), vec![4, 5, 6, 7]);
        assert_eq!(n.calibration, Calibration::Coassociative);
        assert!(CoassocTorus::new([1, 2, 4], [0.0; 3], g2()).is_err());
        assert!(CoassocTorus::new([1, 1, 2], [0.0; 3], g2()).is_err());
        let neg = CoassocTorus::new([6, 7, 1], [0.1, 0.2, 0.3], g2()).unwrap();
        assert_eq!(neg.normal, [1, 6, 7]);
        assert_eq!(neg.offsets, [0.3, 0.1, 0.2]);
        assert_eq!(neg.calibration, Calibration::NegativelyCalibrated);
    }

    #[test]
    fn harmonic_rep_properties() {
        let h = harmonic_rep(&n123(), 4);
        assert_eq!(h.mode_count(), 1);
        assert!(h.laplacian().norm() == 0.0);
        assert!(h.pi7(g2()).unwrap().norm() < 1e-15);
        assert!(h.wedge_const(g2().phi()).norm() == 0.0);
    }

    #[test]
    fn current_properties() {
        let n = n123();
        let d = delta_current(&n, 0.03, 4).unwrap();
        assert_eq!(d.mode_count(), 9 * 9 * 9);
        assert_eq!(d.coeff(&ZERO_WAVE), CForm::basis(n.normal_volume()));
        assert!(d.wedge_const(g2().phi()).modes.is_empty());
        assert!(d.realness_defect() < 1e-15);
        let wide = delta_current(&n, 3.0, 4).unwrap();
        let rest: f64 = wide.modes.iter().filter(|(k, _)| **k != ZERO_WAVE).map(|(_, c)| c.norm_sqr().sqrt()).fold(0.0, f64::max);
        assert!(rest < 1e-12);
        assert!(delta_current(&n, 0.0, 4).is_err());
        assert!(delta_current(&n, 0.03, 0).is_err());
    }
}
