//! Differential forms on the flat torus `T⁷ = ℝ⁷/ℤ⁷` as finite Fourier series.
//!
//! A mode `c·e^{2πi k·x}` is acted on by `d = 2πi k∧`, `d* = −2πi ι_k` and
//! `Δ = 4π²|k|²`, so every operator is exact linear algebra per wavevector.
//! Only stored modes cost anything; currents supported on coordinate
//! subtori have modes in a 3-dimensional sublattice.

mod current;
mod linking;
mod random;
mod sample;
mod solver;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::exterior::{Blade, CForm, Form, DIM};
use crate::g2_reps::G2Structure;

pub use current::{delta_current, harmonic_rep, CoassocTorus};
pub use linking::{linking_number, LinkingResult};
pub use random::{random_closed_two_form, random_real_field, random_real_on};
pub use sample::{parseval_check, sample, to_csv, GridSpec, ParsevalReport, Sample};
pub use solver::{
    gerbe_connection, lemma3_check, monopole_correction, monopole_residual, solve_poisson, split_solve,
    GerbeSolveResult, ExactCurvatureReport, MonopoleCorrection, Residuals, SplitReport,
};

/// Integer wavevector.
pub type Wave = [i32; DIM];

pub const ZERO_WAVE: Wave = [0; DIM];

pub fn neg_wave(k: &Wave) -> Wave {
    k.map(|x| -x)
}

pub fn wave_norm_sqr(k: &Wave) -> f64 {
    k.iter().map(|&x| f64::from(x) * f64::from(x)).sum()
}

/// `k♭ = Σ k_j e^j`.
pub fn wave_form(k: &Wave) -> CForm {
    Form::from_terms(
        k.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(j, &x)| (Blade::from_mask(1 << j).expect("axis"), Complex64::new(f64::from(x), 0.0))),
    )
}

fn in_bound(k: &Wave, bound: i32) -> bool {
    k.iter().all(|x| x.abs() <= bound)
}

/// A homogeneous form-valued trigonometric polynomial on `T⁷`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierForm {
    pub degree: usize,
    /// Truncation bound `|k|_∞ ≤ bound`.
    pub bound: i32,
    pub modes: BTreeMap<Wave, CForm>,
    /// When set, the coefficient at `−k` is the conjugate of the one at `k`.
    pub real: bool,
}

/// Output of [`FourierForm::wedge`].
#[derive(Clone, Debug)]
pub struct WedgeResult {
    pub form: FourierForm,
    /// L² norm of the product modes that fell outside the truncation.
    pub truncation_loss: f64,
}

impl FourierForm {
    pub fn zero(degree: usize, bound: i32) -> Self {
        FourierForm { degree, bound, modes: BTreeMap::new(), real: true }
    }

    /// The constant form `c`.
    pub fn constant(c: &CForm, bound: i32) -> Result<Self> {
        let degree = Self::check_form(c)?;
        let mut f = Self::zero(degree.unwrap_or(0), bound);
        f.real = c.terms().all(|(_, z)| z.im == 0.0);
        f.insert(ZERO_WAVE, c.clone());
        Ok(f)
    }

    /// `c·e^{2πi k·x}`; not real unless `k = 0` and `c` is real.
    pub fn mode(k: Wave, c: &CForm, bound: i32) -> Result<Self> {
        if !in_bound(&k, bound) {
            return Err(invalid(format!("wavevector {k:?} outside truncation {bound}")));
        }
        let degree = Self::check_form(c)?;
        let mut f = Self::zero(degree.unwrap_or(0), bound);
        f.real = false;
        f.insert(k, c.clone());
        Ok(f)
    }

    /// Builds from explicit modes; every form must have the given degree.
    pub fn from_modes(degree: usize, bound: i32, modes: impl IntoIterator<Item = (Wave, CForm)>, real: bool) -> Result<Self> {
        let mut f = Self::zero(degree, bound);
        f.real = real;
        for (k, c) in modes {
            if !in_bound(&k, bound) {
                return Err(invalid(format!("wavevector {k:?} outside truncation {bound}")));
            }
            if !c.is_zero() && !c.is_homogeneous(degree) {
                return Err(invalid(format!("mode {k:?} is not a {degree}-form")));
            }
            f.insert(k, c);
        }
        Ok(f)
    }

    fn check_form(c: &CForm) -> Result<Option<usize>> {
        match c.grades().as_slice() {
            [] => Ok(None),
            [k] => Ok(Some(*k)),
            g => Err(invalid(format!("inhomogeneous form with grades {g:?}"))),
        }
    }

    fn insert(&mut self, k: Wave, c: CForm) {
        let entry = self.modes.entry(k).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.modes.remove(&k);
        }
    }

    pub fn coeff(&self, k: &Wave) -> CForm {
        self.modes.get(k).cloned().unwrap_or_default()
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Applies a per-mode linear map.
    pub fn map_modes(&self, degree: usize, f: impl Fn(&Wave, &CForm) -> CForm) -> FourierForm {
        let mut out = Self::zero(degree, self.bound);
        out.real = self.real;
        for (k, c) in &self.modes {
            let v = f(k, c);
            if !v.is_zero() {
                out.modes.insert(*k, v);
            }
        }
        out
    }

    pub fn d(&self) -> FourierForm {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        self.map_modes(self.degree + 1, |k, c| wave_form(k).wedge(c).scale(&i2pi))
    }

    pub fn dstar(&self) -> FourierForm {
        let m2pi = Complex64::new(0.0, -2.0 * PI);
        let deg = self.degree.saturating_sub(1);
        self.map_modes(deg, |k, c| {
            let mut acc = CForm::zero();
            for (j, &x) in k.iter().enumerate() {
                if x != 0 {
                    acc += &c.contract_basis(j + 1).scale(&Complex64::new(f64::from(x), 0.0));
                }
            }
            acc.scale(&m2pi)
        })
    }

    pub fn laplacian(&self) -> FourierForm {
        self.map_modes(self.degree, |k, c| c.scale(&Complex64::new(4.0 * PI * PI * wave_norm_sqr(k), 0.0)))
    }

    pub fn hodge(&self) -> FourierForm {
        self.map_modes(DIM - self.degree, |_, c| c.hodge())
    }

    /// Pointwise wedge with a constant form.
    pub fn wedge_const(&self, c: &Form) -> FourierForm {
        let cc = c.to_complex();
        let deg = self.degree + c.degree().unwrap_or(0);
        self.map_modes(deg, |_, m| m.wedge(&cc))
    }

    /// Convolution product; modes beyond the truncation are dropped and measured.
    pub fn wedge(&self, other: &FourierForm) -> WedgeResult {
        let bound = self.bound.min(other.bound);
        let mut out = Self::zero(self.degree + other.degree, bound);
        out.real = self.real && other.real;
        let mut dropped: BTreeMap<Wave, CForm> = BTreeMap::new();
        for (ka, ca) in &self.modes {
            for (kb, cb) in &other.modes {
                let k: Wave = std::array::from_fn(|j| ka[j] + kb[j]);
                let v = ca.wedge(cb);
                if v.is_zero() {
                    continue;
                }
                if in_bound(&k, bound) {
                    out.insert(k, v);
                } else {
                    *dropped.entry(k).or_default() += &v;
                }
            }
        }
        let truncation_loss = dropped.values().map(CForm::norm_sqr).fold(0.0, |a, b| a + b).sqrt();
        WedgeResult { form: out, truncation_loss }
    }

    pub fn scale(&self, s: Complex64) -> FourierForm {
        let mut out = self.map_modes(self.degree, |_, c| c.scale(&s));
        out.real = self.real && s.im == 0.0;
        out
    }

    pub fn add(&self, other: &FourierForm) -> Result<FourierForm> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &FourierForm) -> Result<FourierForm> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &FourierForm, s: f64) -> Result<FourierForm> {
        let zero_ok = |f: &FourierForm| f.modes.is_empty();
        if self.degree != other.degree && !zero_ok(self) && !zero_ok(other) {
            return Err(invalid(format!("cannot add a {}-form and a {}-form", self.degree, other.degree)));
        }
        let degree = if zero_ok(self) { other.degree } else { self.degree };
        let mut out = self.clone();
        out.degree = degree;
        out.bound = self.bound.max(other.bound);
        out.real = self.real && other.real;
        let sc = Complex64::new(s, 0.0);
        for (k, c) in &other.modes {
            out.insert(*k, c.scale(&sc));
        }
        Ok(out)
    }

    /// `⟨f, g⟩ = Σ_k Σ_I conj(f_{k,I}) g_{k,I}`, the L² product on the unit-volume torus.
    pub fn inner(&self, other: &FourierForm) -> Complex64 {
        self.modes
            .iter()
            .filter_map(|(k, c)| other.modes.get(k).map(|d| c.hermitian(d)))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.modes.values().map(CForm::norm_sqr).fold(0.0, |a, b| a + b).sqrt()
    }

    /// Norm of the `k = 0` coefficient.
    pub fn mean_norm(&self) -> f64 {
        self.modes.get(&ZERO_WAVE).map_or(0.0, |c| c.norm_sqr().sqrt())
    }

    /// `max_k ‖c_{−k} − conj(c_k)‖`, zero for a real field.
    pub fn realness_defect(&self) -> f64 {
        self.modes
            .iter()
            .map(|(k, c)| (&self.coeff(&neg_wave(k)) - &c.conj()).norm_sqr().sqrt())
            .fold(0.0, f64::max)
    }

    /// Translates by `t`: `f(x − t)`.
    pub fn translate(&self, t: &[f64; DIM]) -> FourierForm {
        self.map_modes(self.degree, |k, c| {
            let phase: f64 = k.iter().zip(t).map(|(&kj, tj)| f64::from(kj) * tj).sum();
            c.scale(&Complex64::from_polar(1.0, -2.0 * PI * phase))
        })
    }

    /// Projection onto `Λ³₇` mode by mode.
    pub fn pi7(&self, g2: &G2Structure) -> Result<FourierForm> {
        if self.degree != 3 {
            return Err(invalid("pi7 acts on 3-forms"));
        }
        let p = g2.projectors()?.pi7_3_f64();
        Ok(self.map_modes(3, |_, c| {
            let v = c.to_dense(3);
            let w: Vec<Complex64> =
                p.iter().map(|row| row.iter().zip(&v).map(|(a, z)| z * *a).sum()).collect();
            CForm::from_dense(3, &w).prune(0.0)
        }))
    }

    /// `π₁` mode by mode: `(⟨γ, φ⟩/⟨φ, φ⟩) φ`.
    pub fn pi1(&self, g2: &G2Structure) -> Result<FourierForm> {
        if self.degree != 3 {
            return Err(invalid("pi1 acts on 3-forms"));
        }
        let phi = g2.phi().to_complex();
        let pp = phi.norm_sqr();
        Ok(self.map_modes(3, |_, c| phi.scale(&(phi.hermitian(c) / pp))))
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> FourierForm {
        self.map_modes(self.degree, |_, c| c.prune(tol))
    }
}
