//! The product `S¹ × T⁶` with its flat SU(3) structure.
//!
//! Axis 1 is the circle coordinate `θ`; the complex coordinates on `T⁶` are
//! `z_j = x_{2j} + i·x_{2j+1}` for `j = 1, 2, 3`.

mod divisor;

use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exterior::{Blade, CForm, Form, Rational, DIM};
use crate::g2_reps::{Calibration, G2Structure};
use crate::torus_field::FourierForm;

pub use divisor::{divisor_solve, PushforwardResidues, PushforwardResult, SolveMode, SubTorus4};

/// Complex pairs `(x_{2j}, x_{2j+1})`.
pub const PAIRS: [(usize, usize); 3] = [(2, 3), (4, 5), (6, 7)];

/// Constant SU(3) data on `T⁶`.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Structure {
    pub omega: Form,
    pub omega1: Form,
    pub omega2: Form,
}

/// Outcome of [`SU3Structure::validate`].
#[derive(Clone, Debug, Serialize)]
pub struct SU3Invariants {
    pub omega_wedge_omega1_zero: bool,
    pub omega_wedge_omega2_zero: bool,
    pub volume_normalized: bool,
    /// `c` with `Ω₁∧Ω₂ = c·ω³`.
    pub pairing_constant: String,
}

fn q(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

impl SU3Structure {
    /// `ω = Σ dx_{2j}∧dx_{2j+1}`, `Ω = dz₁∧dz₂∧dz₃`.
    pub fn standard() -> Self {
        let omega = Form::from_int_terms(&[(&[2, 3], 1), (&[4, 5], 1), (&[6, 7], 1)]).expect("static");
        let omega1 =
            Form::from_int_terms(&[(&[2, 4, 6], 1), (&[2, 5, 7], -1), (&[3, 4, 7], -1), (&[3, 5, 6], -1)]).expect("static");
        let omega2 =
            Form::from_int_terms(&[(&[2, 4, 7], 1), (&[2, 5, 6], 1), (&[3, 4, 6], 1), (&[3, 5, 7], -1)]).expect("static");
        SU3Structure { omega, omega1, omega2 }
    }

    pub fn new(omega: Form, omega1: Form, omega2: Form) -> Result<Self> {
        let s = SU3Structure { omega, omega1, omega2 };
        let inv = s.validate()?;
        if !(inv.omega_wedge_omega1_zero && inv.omega_wedge_omega2_zero && inv.volume_normalized) {
            return Err(invalid(format!("SU(3) invariants fail: {inv:?}")));
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<SU3Invariants> {
        let on_m = |f: &Form| f.terms().all(|(b, _)| !b.contains(1));
        if !(self.omega.is_homogeneous(2) && self.omega1.is_homogeneous(3) && self.omega2.is_homogeneous(3)) {
            return Err(invalid("SU(3) data needs a 2-form and two 3-forms"));
        }
        if !(on_m(&self.omega) && on_m(&self.omega1) && on_m(&self.omega2)) {
            return Err(invalid("SU(3) data must not involve the circle axis"));
        }
        let w3 = self.omega.wedge(&self.omega).wedge(&self.omega);
        let vol6 = Blade::from_sorted(&[2, 3, 4, 5, 6, 7]).expect("static");
        let w3c = w3.coeff(vol6);
        let o12 = self.omega1.wedge(&self.omega2).coeff(vol6);
        let pairing = if w3c.is_zero() { Rational::zero() } else { o12 / w3c.clone() };
        Ok(SU3Invariants {
            omega_wedge_omega1_zero: self.omega.wedge(&self.omega1).is_zero(),
            omega_wedge_omega2_zero: self.omega.wedge(&self.omega2).is_zero(),
            volume_normalized: w3c == q(6),
            pairing_constant: pairing.to_string(),
        })
    }

    /// `J e^{2j} = −e^{2j+1}`, `J e^{2j+1} = e^{2j}`, so that `J dz = i dz`.
    pub fn j_basis(i: usize) -> Option<(usize, i32)> {
        PAIRS.iter().find_map(|&(a, b)| {
            if i == a {
                Some((b, -1))
            } else if i == b {
                Some((a, 1))
            } else {
                None
            }
        })
    }

    /// Whether a coordinate subset of `{2..7}` is a union of complex lines.
    pub fn is_complex_subset(subset: &[usize]) -> bool {
        PAIRS.iter().all(|&(a, b)| subset.contains(&a) == subset.contains(&b))
    }
}

/// The product pair together with the sign bookkeeping of `ψ`.
#[derive(Clone, Debug)]
pub struct ProductG2 {
    /// `dθ∧ω − Ω₁`.
    pub phi: Form,
    /// `*φ`.
    pub psi: Form,
    /// Sign `s` with `*φ = s·dθ∧Ω₂ + ω²/2`.
    pub omega2_sign: i32,
    /// `−dθ∧Ω₂ + ω²/2` as displayed in the source.
    pub psi_displayed: Form,
}

pub fn build_g2_from_su3(s: &SU3Structure) -> Result<ProductG2> {
    let inv = s.validate()?;
    if !(inv.omega_wedge_omega1_zero && inv.omega_wedge_omega2_zero && inv.volume_normalized) {
        return Err(invalid(format!("SU(3) invariants fail: {inv:?}")));
    }
    let dtheta = Form::unit1(1);
    let phi = &dtheta.wedge(&s.omega) - &s.omega1;
    let psi = phi.hodge();
    let half = BigRational::new(1.into(), 2.into());
    let w2 = &s.omega.wedge(&s.omega) * half;
    let t_o2 = dtheta.wedge(&s.omega2);
    let omega2_sign = if psi == &w2 + &t_o2 {
        1
    } else if psi == &w2 - &t_o2 {
        -1
    } else {
        return Err(Error::Internal("Hodge dual of the product 3-form has an unexpected shape".into()));
    };
    Ok(ProductG2 { phi, psi, omega2_sign, psi_displayed: &w2 - &t_o2 })
}

/// The G₂ structure of the standard product, built once.
pub fn product_structure() -> &'static G2Structure {
    static CELL: OnceLock<G2Structure> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = build_g2_from_su3(&SU3Structure::standard()).expect("standard data");
        G2Structure::from_phi(p.phi, "s1xt6").expect("3-form")
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductKind {
    /// `pt × D⁴`, calibrated by `ω²/2`.
    Divisor,
    /// `S¹ × SL³`, calibrated by the `dθ∧Ω₂` part.
    SpecialLagrangian,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCoassoc {
    pub subset: Vec<usize>,
    pub kind: ProductKind,
    /// Class read off from `ω²/2` or `dθ∧Ω₂` alone.
    pub su3_class: Calibration,
    /// Class from the G₂ structure.
    pub g2_class: Calibration,
    pub consistent: bool,
}

/// Classifies all 35 coordinate 4-subtori of `S¹ × T⁶`.
pub fn classify_product_coassociatives() -> Result<Vec<ProductCoassoc>> {
    let s = SU3Structure::standard();
    let p = build_g2_from_su3(&s)?;
    let g2 = product_structure();
    let half = BigRational::new(1.into(), 2.into());
    let w2 = &s.omega.wedge(&s.omega) * half;
    let sl = &Form::unit1(1).wedge(&s.omega2) * q(i64::from(p.omega2_sign));
    let mut out = Vec::new();
    for &b in Blade::of_grade(4) {
        let subset = b.indices();
        let (kind, c) = if b.contains(1) {
            (ProductKind::SpecialLagrangian, sl.coeff(b))
        } else {
            (ProductKind::Divisor, w2.coeff(b))
        };
        let su3_class = if c.is_one() {
            Calibration::Coassociative
        } else if (-c).is_one() {
            Calibration::NegativelyCalibrated
        } else {
            Calibration::NotCalibrated
        };
        let kind = if su3_class == Calibration::NotCalibrated { ProductKind::None } else { kind };
        let g2_class = g2.calibration_check(&subset)?.class;
        out.push(ProductCoassoc { consistent: su3_class == g2_class, subset, kind, su3_class, g2_class });
    }
    Ok(out)
}

fn on_circle_average(k: &[i32; DIM]) -> bool {
    k[0] == 0
}

/// Fibre integration over the circle: `π_*(ω) = 0`, `π_*(dθ∧ω) = ∫ω dθ`.
pub fn pushforward(f: &FourierForm) -> FourierForm {
    let mut out = f.map_modes(f.degree.saturating_sub(1), |k, c| {
        if on_circle_average(k) {
            CForm::from_terms(c.terms().filter(|(b, _)| b.contains(1)).map(|(b, z)| (b, *z))).contract_basis(1)
        } else {
            CForm::zero()
        }
    });
    out.real = f.real;
    out
}

fn m_wave(k: &[i32; DIM]) -> [i32; DIM] {
    let mut m = *k;
    m[0] = 0;
    m
}

/// `d_M`: the exterior derivative along `T⁶` only.
pub fn d_m(f: &FourierForm) -> FourierForm {
    let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    f.map_modes(f.degree + 1, |k, c| crate::torus_field::wave_form(&m_wave(k)).wedge(c).scale(&i2pi))
}

/// `d*_M`.
pub fn dstar_m(f: &FourierForm) -> FourierForm {
    let m2pi = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
    f.map_modes(f.degree.saturating_sub(1), |k, c| {
        let mut acc = CForm::zero();
        for (j, &x) in k.iter().enumerate().skip(1) {
            if x != 0 {
                acc += &c.contract_basis(j + 1).scale(&Complex64::new(f64::from(x), 0.0));
            }
        }
        acc.scale(&m2pi)
    })
}

/// `Δ_M`.
pub fn laplacian_m(f: &FourierForm) -> FourierForm {
    let fp2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    f.map_modes(f.degree, |k, c| c.scale(&Complex64::new(fp2 * crate::torus_field::wave_norm_sqr(&m_wave(k)), 0.0)))
}

/// `∂/∂θ`.
pub fn d_theta(f: &FourierForm) -> FourierForm {
    f.map_modes(f.degree, |k, c| c.scale(&Complex64::new(0.0, 2.0 * std::f64::consts::PI * f64::from(k[0]))))
}

/// `*_M β = *(dθ∧β)` for `β` without a `dθ` factor.
pub fn hodge_m(f: &FourierForm) -> Result<FourierForm> {
    if f.modes.values().any(|c| c.terms().any(|(b, _)| b.contains(1))) {
        return Err(invalid("*_M acts on forms without a dθ factor"));
    }
    let e1 = CForm::basis(Blade::from_sorted(&[1]).expect("axis"));
    Ok(f.map_modes(6 - f.degree, |_, c| e1.wedge(c).hodge()))
}

/// `J` extended to forms as a derivation.
pub fn j_derivation(c: &CForm) -> CForm {
    let mut out = CForm::zero();
    for (b, z) in c.terms() {
        let idx = b.indices();
        for s in 0..idx.len() {
            let Some((j, sign)) = SU3Structure::j_basis(idx[s]) else { continue };
            let mut rep = idx.clone();
            rep[s] = j;
            if let Ok((nb, perm)) = Blade::from_indices(&rep) {
                if perm != 0 {
                    out.add_term(nb, z * f64::from(sign * perm));
                }
            }
        }
    }
    out
}

/// `J` acting on 1-forms.
pub fn j_one_form(f: &FourierForm) -> Result<FourierForm> {
    if f.degree != 1 && !f.modes.is_empty() {
        return Err(invalid("J acts on 1-forms here"));
    }
    Ok(f.map_modes(1, |_, c| j_derivation(c)))
}

/// `(2,0)`, `(1,1)` and `(0,2)` parts of a complex 2-form on `T⁶`.
#[derive(Clone, Debug, PartialEq)]
pub struct PqParts {
    pub p20: CForm,
    pub p11: CForm,
    pub p02: CForm,
}

/// Splits by the eigenvalues `2i, 0, −2i` of the `J` derivation.
pub fn pq_decompose(f: &CForm) -> Result<PqParts> {
    if !f.is_zero() && !f.is_homogeneous(2) {
        return Err(invalid("pq_decompose needs a 2-form"));
    }
    if f.terms().any(|(b, _)| b.contains(1)) {
        return Err(invalid("pq_decompose acts on forms on T6"));
    }
    let d1 = j_derivation(f);
    let d2 = j_derivation(&d1);
    let i2 = Complex64::new(0.0, 2.0);
    let m8 = Complex64::new(-1.0 / 8.0, 0.0);
    // P(2i) = −D(D + 2i)/8; P(−2i) = −D(D − 2i)/8; P(0) = (D² + 4)/4.
    let p20 = (&d2 + &d1.scale(&i2)).scale(&m8);
    let p02 = (&d2 - &d1.scale(&i2)).scale(&m8);
    let p11 = (&d2 + &f.scale(&Complex64::new(4.0, 0.0))).scale(&Complex64::new(0.25, 0.0));
    Ok(PqParts { p20, p11, p02 })
}

/// `‖(2,0) + (0,2)‖ / ‖f‖` over all modes of a 2-form field.
pub fn non_11_fraction(f: &FourierForm) -> Result<f64> {
    let mut off = 0.0;
    for c in f.modes.values() {
        let p = pq_decompose(c)?;
        off += (&p.p20 + &p.p02).norm_sqr();
    }
    let total = f.norm();
    Ok(if total == 0.0 { 0.0 } else { off.sqrt() / total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::ZERO_WAVE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_two_form(seed: u64) -> CForm {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CForm::from_terms(
            Blade::of_grade(2)
                .iter()
                .filter(|b| !b.contains(1))
                .map(|b| (*b, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))),
        )
    }

    #[test]
    fn su3_invariants() {
        let s = SU3Structure::standard();
        let inv = s.validate().unwrap();
        assert!(inv.omega_wedge_omega1_zero && inv.omega_wedge_omega2_zero && inv.volume_normalized);
        assert_eq!(inv.pairing_constant, "2/3");
        assert!(SU3Structure::new(s.omega.clone(), s.omega2.clone(), s.omega1.clone()).is_ok());
        let bad = &s.omega * q(2);
        assert!(SU3Structure::new(bad, s.omega1.clone(), s.omega2.clone()).is_err());
    }

    #[test]
    fn product_pair() {
        let p = build_g2_from_su3(&SU3Structure::standard()).unwrap();
        assert_eq!(p.phi.hodge(), p.psi);
        assert_eq!(p.omega2_sign, 1);
        assert_ne!(p.psi_displayed, p.psi);
        let vol = Blade::VOLUME;
        assert_eq!(p.phi.wedge(&p.psi).coeff(vol), q(7));
        assert_eq!(p.phi.inner(&p.phi), q(7));
        let rep = product_structure().identity_suite();
        assert!(rep.all_passed(), "{:?}", rep.checks);
    }

    #[test]
    fn coassociative_classification() {
        let all = classify_product_coassociatives().unwrap();
        assert_eq!(all.len(), 35);
        assert!(all.iter().all(|c| c.consistent));
        let find = |s: &[usize]| all.iter().find(|c| c.subset == s).unwrap();
        assert_eq!(find(&[2, 3, 4, 5]).kind, ProductKind::Divisor);
        assert_eq!(find(&[2, 3, 4, 5]).g2_class, Calibration::Coassociative);
        assert_eq!(find(&[1, 2, 4, 7]).kind, ProductKind::SpecialLagrangian);
        assert_eq!(find(&[1, 3, 5, 7]).g2_class, Calibration::NegativelyCalibrated);
        assert_eq!(find(&[1, 2, 4, 6]).kind, ProductKind::None);
        assert_eq!(find(&[1, 2, 3, 4]).kind, ProductKind::None);
        assert_eq!(all.iter().filter(|c| c.kind == ProductKind::Divisor).count(), 3);
        assert_eq!(all.iter().filter(|c| c.kind == ProductKind::SpecialLagrangian).count(), 4);
    }

    #[test]
    fn pushforward_examples() {
        let s = SU3Structure::standard();
        let w = s.omega.to_complex();
        let tw = Form::unit1(1).to_complex().wedge(&w);
        let f = FourierForm::constant(&tw, 2).unwrap();
        assert_eq!(pushforward(&f).coeff(&ZERO_WAVE), w);
        assert!(pushforward(&FourierForm::constant(&w, 2).unwrap()).modes.is_empty());
        let m = FourierForm::mode([1, 0, 2, 0, 0, 0, 0], &tw, 2).unwrap();
        assert!(pushforward(&m).modes.is_empty());
    }

    #[test]
    fn pushforward_commutes_with_d() {
        for seed in 0..5 {
            let f = crate::torus_field::tests::random_field(seed, 2, 2, 8);
            let lhs = pushforward(&f.d());
            let rhs = d_m(&pushforward(&f)).scale(Complex64::new(-1.0, 0.0));
            assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * (1.0 + f.norm()));
        }
    }

    #[test]
    fn split_laplacian() {
        for seed in 0..4 {
            let h = crate::torus_field::tests::random_field(seed + 20, 3, 2, 6);
            let fp2 = |f: &FourierForm| d_theta(&d_theta(f)).scale(Complex64::new(-1.0, 0.0));
            let lhs = h.laplacian();
            let rhs = laplacian_m(&h).add(&fp2(&h)).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * lhs.norm());
        }
    }

    #[test]
    fn pq_examples() {
        let w = SU3Structure::standard().omega.to_complex();
        let p = pq_decompose(&w).unwrap();
        assert!(p.p20.norm_sqr() + p.p02.norm_sqr() < 1e-28);
        let i = Complex64::new(0.0, 1.0);
        let dz1 = CForm::from_terms([(Blade::from_sorted(&[2]).unwrap(), Complex64::new(1.0, 0.0)), (Blade::from_sorted(&[3]).unwrap(), i)]);
        let dz2 = CForm::from_terms([(Blade::from_sorted(&[4]).unwrap(), Complex64::new(1.0, 0.0)), (Blade::from_sorted(&[5]).unwrap(), i)]);
        let z12 = dz1.wedge(&dz2);
        let p = pq_decompose(&z12).unwrap();
        assert!((&p.p20 - &z12).norm_sqr() < 1e-28);
        assert!(p.p11.norm_sqr() + p.p02.norm_sqr() < 1e-28);
        // The real part of dz₁∧dz₂ splits evenly.
        let re = z12.map(|z| Complex64::new(z.re, 0.0));
        let p = pq_decompose(&re).unwrap();
        assert!(p.p11.norm_sqr() < 1e-28);
        assert!((&p.p20 - &p.p02.conj()).norm_sqr() < 1e-28);
        for seed in 0..10 {
            let f = random_two_form(seed);
            let p = pq_decompose(&f).unwrap();
            assert!((&(&p.p20 + &p.p11) + &p.p02 - f.clone()).norm_sqr() < 1e-26);
            assert!((&p.p02 - &p.p20.conj()).norm_sqr() < 1e-26);
            assert!((&j_derivation(&p.p20) - &p.p20.scale(&Complex64::new(0.0, 2.0))).norm_sqr() < 1e-26);
        }
        assert!(pq_decompose(&Form::e(&[2]).unwrap().to_complex()).is_err());
    }

    #[test]
    fn complex_subsets() {
        assert!(SU3Structure::is_complex_subset(&[2, 3, 4, 5]));
        assert!(!SU3Structure::is_complex_subset(&[2, 4, 5, 7]));
        assert_eq!(SU3Structure::j_basis(6), Some((7, -1)));
        assert_eq!(SU3Structure::j_basis(1), None);
    }

    mod props {
        use super::*;
        use crate::torus_field::tests::random_field;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn pushforward_anticommutes_with_d(seed in any::<u64>(), degree in 1usize..7) {
                let f = random_field(seed, degree, 2, 8);
                let lhs = pushforward(&f.d());
                let rhs = d_m(&pushforward(&f)).scale(Complex64::new(-1.0, 0.0));
                prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * f.norm().max(1.0));
            }

            #[test]
            fn pq_parts_are_eigenvectors_and_sum_to_input(seed in any::<u64>()) {
                let f = random_two_form(seed);
                let p = pq_decompose(&f).unwrap();
                let sum = &(&p.p20 + &p.p11) + &p.p02;
                prop_assert!((&sum - &f).norm_sqr().sqrt() <= 1e-12);
                let two_i = Complex64::new(0.0, 2.0);
                prop_assert!((&j_derivation(&p.p20) - &p.p20.scale(&two_i)).norm_sqr().sqrt() <= 1e-12);
                prop_assert!((&j_derivation(&p.p02) + &p.p02.scale(&two_i)).norm_sqr().sqrt() <= 1e-12);
                prop_assert!(j_derivation(&p.p11).norm_sqr().sqrt() <= 1e-12);
            }
        }
    }
}
