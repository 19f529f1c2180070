//! G₂ type decompositions of 2- and 3-forms, the pointwise identity suite
//! and coordinate calibration checks.
//!
//! Everything here is exact: the eigenspaces of `β ↦ *(φ∧β)` and the
//! projections onto `Λ³₁ ⊕ Λ³₇ ⊕ Λ³₂₇` are computed with rational linear
//! algebra from the `exterior` primitives alone.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exterior::{wedge_sign, Blade, Form, Rational};
use crate::linalg::RatMatrix;

/// Which model 3-form to use.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `e¹²³ + e¹∧(e⁴⁵ − e⁶⁷) + e²∧(e⁴⁶ − e⁷⁵) + e³∧(e⁴⁷ − e⁵⁶)`.
    #[default]
    Default,
    /// The self-dual-normal convention `e¹²³ + e¹∧(e⁴⁵ + e⁶⁷) + e²∧(e⁴⁶ + e⁷⁵) − e³∧(e⁴⁷ + e⁵⁶)`,
    /// for which coassociative normal bundles are modelled on Λ²₊.
    Alt,
    /// `e¹²³ + e¹∧(e⁴⁵ + e⁶⁷) + e²∧(e⁴⁶ + e⁷⁵) + e³∧(e⁴⁷ + e⁵⁶)` taken verbatim. This
    /// form is not in the G₂ orbit: `*(φ∧·)` has four eigenvalues on Λ². Kept as a
    /// diagnostic input.
    AltLiteral,
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Convention::Default),
            "alt" => Ok(Convention::Alt),
            "alt-literal" => Ok(Convention::AltLiteral),
            other => Err(invalid(format!("unknown convention {other:?} (expected default|alt|alt-literal)"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Default => "default",
            Convention::Alt => "alt",
            Convention::AltLiteral => "alt-literal",
        })
    }
}

fn model_phi_for(conv: Convention) -> Form {
    // e^{123} + e^1(e^{45} + s e^{67}) + e^2(e^{46} + s e^{75}) + t e^3(e^{47} + s e^{56})
    let (s, t) = match conv {
        Convention::Default => (-1, 1),
        Convention::Alt => (1, -1),
        Convention::AltLiteral => (1, 1),
    };
    Form::from_int_terms(&[
        (&[1, 2, 3], 1),
        (&[1, 4, 5], 1),
        (&[1, 6, 7], s),
        (&[2, 4, 6], 1),
        (&[2, 7, 5], s),
        (&[3, 4, 7], t),
        (&[3, 5, 6], s * t),
    ])
    .expect("static index lists")
}

/// A constant G₂ structure: the 3-form φ and ψ = *φ.
#[derive(Clone, Debug)]
pub struct G2Structure {
    label: String,
    phi: Form,
    psi: Form,
    projectors: OnceLock<std::result::Result<Projectors, Error>>,
}

/// Exact type projectors of one structure.
#[derive(Clone, Debug)]
pub struct Projectors {
    /// Matrix of `β ↦ *(φ∧β)` on Λ² in [`Blade::of_grade`] order.
    pub p2: RatMatrix,
    pub lambda7: Rational,
    pub lambda14: Rational,
    pub dim7: usize,
    pub dim14: usize,
    /// Orthogonal projector onto Λ²₇.
    pub pi7_2: RatMatrix,
    /// Orthogonal projector onto Λ³₇.
    pub pi7_3: RatMatrix,
}

impl G2Structure {
    pub fn model(conv: Convention) -> &'static G2Structure {
        static DEFAULT: OnceLock<G2Structure> = OnceLock::new();
        static ALT: OnceLock<G2Structure> = OnceLock::new();
        static ALT_LITERAL: OnceLock<G2Structure> = OnceLock::new();
        let cell = match conv {
            Convention::Default => &DEFAULT,
            Convention::Alt => &ALT,
            Convention::AltLiteral => &ALT_LITERAL,
        };
        cell.get_or_init(|| G2Structure::from_phi(model_phi_for(conv), conv.to_string()).expect("model form is a 3-form"))
    }

    /// Wraps an arbitrary constant 3-form; nothing beyond the degree is checked here,
    /// the identity suite decides whether it behaves like a G₂ form.
    pub fn from_phi(phi: Form, label: impl Into<String>) -> Result<G2Structure> {
        if phi.is_zero() || !phi.is_homogeneous(3) {
            return Err(invalid("a G2 structure needs a nonzero 3-form"));
        }
        let psi = phi.hodge();
        Ok(G2Structure { label: label.into(), phi, psi, projectors: OnceLock::new() })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn phi(&self) -> &Form {
        &self.phi
    }

    pub fn psi(&self) -> &Form {
        &self.psi
    }

    pub fn projectors(&self) -> Result<&Projectors> {
        self.projectors.get_or_init(|| Projectors::compute(&self.phi)).as_ref().map_err(Clone::clone)
    }

    pub fn decompose2(&self, beta: &Form) -> Result<TypeDecomp2> {
        if !beta.is_homogeneous(2) {
            return Err(invalid("decompose2 expects a 2-form"));
        }
        let pr = self.projectors()?;
        let pi7 = Form::from_dense(2, &pr.pi7_2.apply(&beta.to_dense(2)));
        let pi14 = beta - &pi7;
        Ok(TypeDecomp2 { pi7, pi14 })
    }

    pub fn decompose3(&self, gamma: &Form) -> Result<TypeDecomp3> {
        if !gamma.is_homogeneous(3) {
            return Err(invalid("decompose3 expects a 3-form"));
        }
        let pr = self.projectors()?;
        let pi1 = self.phi.scale(&(gamma.inner(&self.phi) / self.phi.inner(&self.phi)));
        let pi7 = Form::from_dense(3, &pr.pi7_3.apply(&gamma.to_dense(3)));
        let pi27 = &(gamma - &pi1) - &pi7;
        Ok(TypeDecomp3 { pi1, pi7, pi27 })
    }

    /// `P(β) = *(φ∧β)`.
    pub fn p_operator(&self, beta: &Form) -> Form {
        self.phi.wedge(beta).hodge()
    }

    /// `α ↦ *(α∧φ)`, the embedding of Λ¹ onto Λ³₇.
    pub fn lambda3_7_embedding(&self, alpha: &Form) -> Form {
        alpha.wedge(&self.phi).hodge()
    }

    /// `u ↦ *(*(u∧φ)∧φ)` on 1-forms.
    pub fn operator_a(&self, u: &Form) -> Form {
        u.wedge(&self.phi).hodge().wedge(&self.phi).hodge()
    }

    /// `u ↦ *(*(u∧ψ)∧ψ)` on 1-forms.
    pub fn operator_b(&self, u: &Form) -> Form {
        u.wedge(&self.psi).hodge().wedge(&self.psi).hodge()
    }
}

impl Projectors {
    fn compute(phi: &Form) -> Result<Projectors> {
        let two = Blade::of_grade(2);
        let cols: Vec<Vec<Rational>> =
            two.iter().map(|b| phi.wedge(&Form::basis(*b)).hodge().to_dense(2)).collect();
        let p2 = RatMatrix::from_columns(21, &cols);

        // With eigenvalues λ₇ (×7) and λ₁₄ (×14), tr P = 0 and tr P² = 42λ₁₄².
        let tr2 = p2.mul(&p2).trace() / Rational::from_integer(42.into());
        let root = rational_sqrt(&tr2)
            .ok_or_else(|| Error::Internal(format!("tr P²/42 = {tr2} is not a rational square")))?;
        let mut found = None;
        for cand in [root.clone(), -root.clone()] {
            let l7 = -&cand * Rational::from_integer(2.into());
            let d7 = 21 - p2.sub_scalar_identity(&l7).rank();
            let d14 = 21 - p2.sub_scalar_identity(&cand).rank();
            if d7 + d14 == 21 && d7 > 0 && d14 > 0 {
                found = Some((l7, cand, d7, d14));
                break;
            }
        }
        let (lambda7, lambda14, dim7, dim14) = found.ok_or_else(|| {
            Error::Internal("*(phi ^ .) on 2-forms does not split into two rational eigenspaces".into())
        })?;
        let a = p2.sub_scalar_identity(&lambda7);
        let b = p2.sub_scalar_identity(&lambda14);
        if !a.mul(&b).is_zero() {
            return Err(Error::Internal("minimal polynomial of P is not (x - l7)(x - l14)".into()));
        }
        let pi7_2 = b.scale(&(&lambda7 - &lambda14).recip());

        let three = Blade::of_grade(3);
        let jcols: Vec<Vec<Rational>> =
            (1..=7).map(|i| Form::unit1(i).wedge(phi).hodge().to_dense(3)).collect();
        let j = RatMatrix::from_columns(three.len(), &jcols);
        let gram = j.transpose().mul(&j);
        let gram_inv = gram
            .inverse()
            .ok_or_else(|| Error::Internal("alpha -> *(alpha ^ phi) is not injective".into()))?;
        let pi7_3 = j.mul(&gram_inv).mul(&j.transpose());
        Ok(Projectors { p2, lambda7, lambda14, dim7, dim14, pi7_2, pi7_3 })
    }

    pub fn pi7_3_f64(&self) -> Vec<Vec<f64>> {
        to_f64(&self.pi7_3)
    }

    pub fn pi7_2_f64(&self) -> Vec<Vec<f64>> {
        to_f64(&self.pi7_2)
    }
}

fn to_f64(m: &RatMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_f64().unwrap_or(f64::NAN)).collect()).collect()
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// The default model 3-form φ₀.
pub fn model_phi() -> Form {
    G2Structure::model(Convention::Default).phi().clone()
}

/// ψ₀ = *φ₀.
pub fn model_psi() -> Form {
    G2Structure::model(Convention::Default).psi().clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeDecomp2 {
    pub pi7: Form,
    pub pi14: Form,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeDecomp3 {
    pub pi1: Form,
    pub pi7: Form,
    pub pi27: Form,
}

/// Calibration class of a coordinate subspace with its increasing-index orientation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Calibration {
    Associative,
    Coassociative,
    NegativelyCalibrated,
    NotCalibrated,
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calibration::Associative => "associative",
            Calibration::Coassociative => "coassociative",
            Calibration::NegativelyCalibrated => "negatively-calibrated",
            Calibration::NotCalibrated => "not-calibrated",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CalibrationResult {
    pub subset: Vec<usize>,
    pub class: Calibration,
    /// Coefficient of `vol_S` in the restriction of φ (|S| = 3) or ψ (|S| = 4).
    pub calibration_coefficient: Rational,
    /// Restriction of the other form: ψ|_S for 3-sets, φ|_S for 4-sets.
    pub complementary_restriction: Form,
}

pub fn subset_blade(subset: &[usize]) -> Result<Blade> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    Blade::from_sorted(&s)
}

impl G2Structure {
    pub fn calibration_check(&self, subset: &[usize]) -> Result<CalibrationResult> {
        let blade = subset_blade(subset)?;
        let (calibrating, other) = match blade.grade() {
            3 => (&self.phi, &self.psi),
            4 => (&self.psi, &self.phi),
            k => return Err(invalid(format!("calibration_check needs |S| in {{3,4}}, got {k}"))),
        };
        let c = calibrating.coeff(blade);
        let class = if c.is_one() {
            if blade.grade() == 3 {
                Calibration::Associative
            } else {
                Calibration::Coassociative
            }
        } else if (-c.clone()).is_one() {
            Calibration::NegativelyCalibrated
        } else {
            Calibration::NotCalibrated
        };
        Ok(CalibrationResult {
            subset: blade.indices(),
            class,
            calibration_coefficient: c,
            complementary_restriction: other.restrict(blade),
        })
    }

    pub fn normal_frame_check(&self, subset: &[usize]) -> Result<NormalFrameReport> {
        let cal = self.calibration_check(subset)?;
        let orientation = match (subset.len(), cal.class) {
            (4, Calibration::Coassociative) => 1,
            (4, Calibration::NegativelyCalibrated) => -1,
            _ => return Err(invalid(format!("{subset:?} is not a (negatively) coassociative 4-subset"))),
        };
        let s = subset_blade(subset)?;
        let half = Rational::new(1.into(), 2.into());
        let mut frames = Vec::new();
        for i in (1..=7).filter(|i| !s.contains(*i)) {
            let restricted = self.phi.contract_basis(i).restrict(s);
            let star = hodge4(&restricted, s, orientation);
            let self_dual = (&restricted + &star).scale(&half);
            let anti_self_dual = (&restricted - &star).scale(&half);
            frames.push(NormalFrame {
                normal_axis: i,
                anti_self_dual: self_dual.is_zero() && !restricted.is_zero(),
                self_dual: anti_self_dual.is_zero() && !restricted.is_zero(),
                self_dual_part: self_dual,
                restriction: restricted,
            });
        }
        let cols: Vec<Vec<Rational>> = frames.iter().map(|f| f.restriction.to_dense(2)).collect();
        let rank = RatMatrix::from_columns(21, &cols).rank();
        let duality = if frames.iter().all(|f| f.anti_self_dual) {
            Duality::AntiSelfDual
        } else if frames.iter().all(|f| f.self_dual) {
            Duality::SelfDual
        } else {
            Duality::Mixed
        };
        let passed = rank == 3 && duality == Duality::AntiSelfDual;
        Ok(NormalFrameReport { subset: s.indices(), orientation, frames, rank, duality, passed })
    }
}

/// Hodge star on 2-forms inside the coordinate 4-space `support`, oriented by
/// `orientation · e^{support}`.
pub fn hodge4(beta: &Form, support: Blade, orientation: i32) -> Form {
    Form::from_terms(beta.terms().map(|(b, c)| {
        let rest = Blade::from_mask(support.mask() & !b.mask()).expect("subset of 7 axes");
        let s = wedge_sign(b, rest) * orientation;
        (rest, if s > 0 { c.clone() } else { -c.clone() })
    }))
}

#[derive(Clone, Debug)]
pub struct NormalFrame {
    pub normal_axis: usize,
    pub restriction: Form,
    pub self_dual_part: Form,
    pub anti_self_dual: bool,
    pub self_dual: bool,
}

/// Which half of Λ²(N) the normal directions land in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Duality {
    AntiSelfDual,
    SelfDual,
    Mixed,
}

#[derive(Clone, Debug)]
pub struct NormalFrameReport {
    pub subset: Vec<usize>,
    /// +1 for the increasing orientation, −1 when the subset is calibrated by −ψ.
    pub orientation: i32,
    pub frames: Vec<NormalFrame>,
    pub rank: usize,
    pub duality: Duality,
    /// Rank 3 and anti-self-dual, i.e. `TN⊥ ≅ Λ²₋N`.
    pub passed: bool,
}

/// One line of the identity suite.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub structure: String,
    pub c_a: Option<String>,
    pub c_b: Option<String>,
    pub lambda7: Option<String>,
    pub lambda14: Option<String>,
    /// (dim Λ²₇, dim Λ²₁₄).
    pub lambda2_dims: Option<(usize, usize)>,
    /// (dim Λ³₁, dim Λ³₇, dim Λ³₂₇).
    pub lambda3_dims: Option<(usize, usize, usize)>,
    pub checks: Vec<IdentityCheck>,
    pub paper_consistent: bool,
    pub diagnostics: Vec<String>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(IdentityCheck { name: name.to_string(), passed, detail: detail.into() });
    }
}

fn random_rational_1form(rng: &mut ChaCha8Rng) -> Form {
    Form::from_terms((1..=7).map(|i| {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=5);
        (Blade::from_mask(1 << (i - 1)).unwrap(), Rational::new(n.into(), d.into()))
    }))
}

/// Finds `c` with `op(u) = c·u` for every basis 1-form and a few random
/// rational ones, or reports the first counterexample.
fn scalar_on_lambda1(op: impl Fn(&Form) -> Form) -> std::result::Result<Rational, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6732);
    let e1 = Form::unit1(1);
    let c = op(&e1).coeff(e1.terms().next().unwrap().0);
    let mut inputs: Vec<Form> = (1..=7).map(Form::unit1).collect();
    inputs.extend((0..8).map(|_| random_rational_1form(&mut rng)));
    for u in &inputs {
        let image = op(u);
        if image != u.scale(&c) {
            return Err(format!("not scalar: {} -> {}", display(u), display(&image)));
        }
    }
    Ok(c)
}

fn display(f: &Form) -> String {
    crate::exterior::format_form(f)
}

impl G2Structure {
    /// The scalar constants `cA`, `cB` on Λ¹ and the Λ² eigenvalues.
    pub fn scalar_constants(&self) -> Result<IdentityReport> {
        let mut report = self.empty_report();
        let c_a = scalar_on_lambda1(|u| self.operator_a(u)).map_err(Error::Internal)?;
        let c_b = scalar_on_lambda1(|u| self.operator_b(u)).map_err(Error::Internal)?;
        let pr = self.projectors()?;
        report.c_a = Some(c_a.to_string());
        report.c_b = Some(c_b.to_string());
        report.lambda7 = Some(pr.lambda7.to_string());
        report.lambda14 = Some(pr.lambda14.to_string());
        report.lambda2_dims = Some((pr.dim7, pr.dim14));
        let seven = Rational::from_integer(7.into());
        let fourteen = Rational::from_integer(14.into());
        let trace_ok = (&seven * &pr.lambda7 + &fourteen * &pr.lambda14).is_zero();
        report.push("trace 7*l7 + 14*l14 = 0", trace_ok, format!("l7 = {}, l14 = {}", pr.lambda7, pr.lambda14));
        report.push("|l14| = 1", pr.lambda14.abs().is_one(), format!("l14 = {}", pr.lambda14));
        report.paper_consistent = c_a == Rational::from_integer((-4).into())
            && c_b == Rational::from_integer(3.into())
            && pr.lambda14.is_one();
        if !report.paper_consistent {
            report.diagnostics.push(format!(
                "constants (cA, cB, l14) = ({c_a}, {c_b}, {}) differ from (-4, 3, 1)",
                pr.lambda14
            ));
        }
        Ok(report)
    }

    fn empty_report(&self) -> IdentityReport {
        IdentityReport {
            structure: self.label.clone(),
            c_a: None,
            c_b: None,
            lambda7: None,
            lambda14: None,
            lambda2_dims: None,
            lambda3_dims: None,
            checks: Vec::new(),
            paper_consistent: false,
            diagnostics: Vec::new(),
        }
    }

    /// Runs every pointwise identity; failures are recorded, never raised.
    pub fn identity_suite(&self) -> IdentityReport {
        let mut report = match self.scalar_constants() {
            Ok(r) => r,
            Err(e) => {
                let mut r = self.empty_report();
                r.push("scalar constants", false, e.to_string());
                return r;
            }
        };
        report.push("scalar constants", true, "A and B are scalar on all basis and random 1-forms");
        let seven = Rational::from_integer(7.into());
        report.push(
            "<phi, phi> = 7",
            self.phi.inner(&self.phi) == seven,
            format!("<phi, phi> = {}", self.phi.inner(&self.phi)),
        );
        report.push(
            "phi ^ psi = 7 vol",
            self.phi.wedge(&self.psi) == Form::volume().scale(&seven),
            display(&self.phi.wedge(&self.psi)),
        );
        let pr = self.projectors().expect("projectors computed by scalar_constants");

        report.push("P symmetric", pr.p2.is_symmetric(), "matrix of *(phi ^ .) on the 21 basis 2-forms");
        report.push(
            "Lambda2 eigenspace dims (7, 14)",
            (pr.dim7, pr.dim14) == (7, 14),
            format!("({}, {})", pr.dim7, pr.dim14),
        );
        report.push_result("Lambda2_14 = ker(. ^ psi)", self.check_kernel_of_psi(pr));
        report.push_result("Lambda2 projections", self.check_lambda2_projections());
        match self.check_lambda3() {
            Ok(dims) => {
                report.lambda3_dims = Some(dims);
                report.push("Lambda3 dims (1, 7, 27)", dims == (1, 7, 27), format!("{dims:?}"));
            }
            Err(e) => report.push("Lambda3 dims (1, 7, 27)", false, e),
        }
        report.push_result("Lambda3 projections", self.check_lambda3_projections());
        report.push_result("coassociative normal frames", self.check_coassociatives());
        report
    }

    fn check_kernel_of_psi(&self, pr: &Projectors) -> std::result::Result<String, String> {
        let cols: Vec<Vec<Rational>> =
            Blade::of_grade(2).iter().map(|b| Form::basis(*b).wedge(&self.psi).to_dense(6)).collect();
        let wedge_psi = RatMatrix::from_columns(7, &cols);
        let kernel = wedge_psi.kernel();
        if kernel.len() != 14 {
            return Err(format!("kernel of ^psi has dimension {}", kernel.len()));
        }
        for v in &kernel {
            if pr.p2.apply(v) != v.iter().map(|x| x * &pr.lambda14).collect::<Vec<_>>() {
                return Err("kernel vector outside the l14 eigenspace".into());
            }
        }
        Ok(format!("dim 14, eigenvalue {}", pr.lambda14))
    }

    fn check_lambda2_projections(&self) -> std::result::Result<String, String> {
        for b in Blade::of_grade(2) {
            let beta = Form::basis(*b);
            let d = self.decompose2(&beta).map_err(|e| e.to_string())?;
            if &d.pi7 + &d.pi14 != beta {
                return Err(format!("reconstruction fails at {b}"));
            }
            if !d.pi7.inner(&d.pi14).is_zero() {
                return Err(format!("pi7, pi14 not orthogonal at {b}"));
            }
            if !d.pi14.wedge(&self.psi).is_zero() {
                return Err(format!("pi14 ^ psi != 0 at {b}"));
            }
        }
        for i in 1..=7 {
            let beta = self.phi.contract_basis(i);
            let d = self.decompose2(&beta).map_err(|e| e.to_string())?;
            if !d.pi14.is_zero() {
                return Err(format!("iota_e{i} phi has a Lambda2_14 part"));
            }
        }
        Ok("reconstruction, orthogonality, pi14 ^ psi = 0, iota_v phi in Lambda2_7".into())
    }

    fn check_lambda3(&self) -> std::result::Result<(usize, usize, usize), String> {
        let decs: Vec<TypeDecomp3> = Blade::of_grade(3)
            .iter()
            .map(|b| self.decompose3(&Form::basis(*b)))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        let rank_of = |f: &dyn Fn(&TypeDecomp3) -> &Form| {
            let cols: Vec<Vec<Rational>> = decs.iter().map(|d| f(d).to_dense(3)).collect();
            RatMatrix::from_columns(35, &cols).rank()
        };
        Ok((rank_of(&|d| &d.pi1), rank_of(&|d| &d.pi7), rank_of(&|d| &d.pi27)))
    }

    fn check_lambda3_projections(&self) -> std::result::Result<String, String> {
        let err = |e: Error| e.to_string();
        for b in Blade::of_grade(3) {
            let gamma = Form::basis(*b);
            let d = self.decompose3(&gamma).map_err(err)?;
            if &(&d.pi1 + &d.pi7) + &d.pi27 != gamma {
                return Err(format!("components do not sum at {b}"));
            }
            for (x, y) in [(&d.pi1, &d.pi7), (&d.pi1, &d.pi27), (&d.pi7, &d.pi27)] {
                if !x.inner(y).is_zero() {
                    return Err(format!("components not orthogonal at {b}"));
                }
            }
            if !d.pi27.wedge(&self.phi).is_zero() || !d.pi27.wedge(&self.psi).is_zero() {
                return Err(format!("pi27 not annihilated by phi, psi at {b}"));
            }
            // idempotence and mutual annihilation
            let again = self.decompose3(&d.pi7).map_err(err)?;
            if again.pi7 != d.pi7 || !again.pi1.is_zero() || !again.pi27.is_zero() {
                return Err(format!("pi7 not idempotent at {b}"));
            }
            let again = self.decompose3(&d.pi27).map_err(err)?;
            if again.pi27 != d.pi27 || !again.pi1.is_zero() || !again.pi7.is_zero() {
                return Err(format!("pi27 not idempotent at {b}"));
            }
        }
        for i in 1..=7 {
            let image = self.lambda3_7_embedding(&Form::unit1(i));
            if !image.inner(&self.phi).is_zero() {
                return Err(format!("*(e{i} ^ phi) not orthogonal to phi"));
            }
        }
        Ok("sum, orthogonality, idempotence, pi27 ^ phi = pi27 ^ psi = 0".into())
    }

    /// Calibration bookkeeping, δ_N ∧ φ = 0 pointwise and the normal frame
    /// isomorphism for every calibrated coordinate 4-subset.
    fn check_coassociatives(&self) -> std::result::Result<String, String> {
        let mut found = 0;
        let mut dualities = Vec::new();
        for s in Blade::of_grade(4) {
            let idx = s.indices();
            let cal = self.calibration_check(&idx).map_err(|e| e.to_string())?;
            let orientation = match cal.class {
                Calibration::Coassociative => 1,
                Calibration::NegativelyCalibrated => -1,
                _ => continue,
            };
            found += 1;
            if !cal.complementary_restriction.is_zero() {
                return Err(format!("phi does not vanish on coassociative {s}"));
            }
            // the current of the normal slice is vol of the complement, wedge phi vanishes
            let current = Form::basis(s.complement());
            if !current.wedge(&self.phi).is_zero() {
                return Err(format!("delta ^ phi != 0 for {s}"));
            }
            let comp = self.calibration_check(&s.complement().indices()).map_err(|e| e.to_string())?;
            let expected = if orientation > 0 { Calibration::Associative } else { Calibration::NegativelyCalibrated };
            if comp.class != expected {
                return Err(format!("complement of {s} is {} (expected {expected})", comp.class));
            }
            let frame = self.normal_frame_check(&idx).map_err(|e| e.to_string())?;
            if frame.rank != 3 || frame.duality == Duality::Mixed {
                return Err(format!("normal frame of {s} has rank {} and {:?} duality", frame.rank, frame.duality));
            }
            dualities.push(frame.duality);
        }
        if found == 0 {
            return Err("no calibrated coordinate 4-subsets".into());
        }
        dualities.dedup();
        match dualities.as_slice() {
            [Duality::AntiSelfDual] => Ok(format!("{found} calibrated coordinate 4-subsets, normal bundle = Lambda2_-")),
            [Duality::SelfDual] => Ok(format!("{found} calibrated coordinate 4-subsets, normal bundle = Lambda2_+")),
            _ => Err("normal frames mix self-dual and anti-self-dual types".into()),
        }
    }
}

trait PushResult {
    fn push_result(&mut self, name: &str, r: std::result::Result<String, String>);
}

impl PushResult for IdentityReport {
    fn push_result(&mut self, name: &str, r: std::result::Result<String, String>) {
        match r {
            Ok(d) => self.push(name, true, d),
            Err(d) => self.push(name, false, d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse_form;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn model() -> &'static G2Structure {
        G2Structure::model(Convention::Default)
    }

    #[test]
    fn model_phi_has_seven_unit_monomials() {
        let phi = model_phi();
        assert_eq!(phi.len(), 7);
        assert!(phi.terms().all(|(_, c)| c.abs().is_one()));
        assert!(phi.restrict(subset_blade(&[4, 5, 6, 7]).unwrap()).is_zero());
        assert_eq!(model_psi().inner(&model_psi()), q(7));
    }

    #[test]
    fn model_psi_expansion() {
        // brute-force Hodge star of each monomial of φ₀
        let expected = parse_form("e4567 + e2367 - e2345 + e1357 + e1346 + e1256 - e1247").unwrap();
        assert_eq!(model_psi(), expected);
    }

    #[test]
    fn contracted_phi_lies_in_lambda2_7() {
        let beta = model_phi().contract_basis(1);
        let d = model().decompose2(&beta).unwrap();
        assert!(d.pi14.is_zero());
        let pr = model().projectors().unwrap();
        assert_eq!(model().p_operator(&beta), beta.scale(&pr.lambda7));
    }

    #[test]
    fn kernel_of_psi_has_no_lambda2_7_part() {
        // e45 + e67 wedges ψ₀ to zero
        let beta = parse_form("e45 + e67").unwrap();
        assert!(beta.wedge(&model_psi()).is_zero());
        assert!(model().decompose2(&beta).unwrap().pi7.is_zero());
    }

    #[test]
    fn e12_splits_orthogonally() {
        let beta = parse_form("e12").unwrap();
        let d = model().decompose2(&beta).unwrap();
        assert_eq!(&d.pi7 + &d.pi14, beta);
        assert!(d.pi7.inner(&d.pi14).is_zero());
    }

    #[test]
    fn decompose_rejects_wrong_degree() {
        assert!(model().decompose2(&parse_form("e123").unwrap()).is_err());
        assert!(model().decompose3(&parse_form("e12").unwrap()).is_err());
    }

    #[test]
    fn phi_is_pure_lambda3_1() {
        let d = model().decompose3(&model_phi()).unwrap();
        assert_eq!(d.pi1, model_phi());
        assert!(d.pi7.is_zero() && d.pi27.is_zero());
    }

    #[test]
    fn e123_has_no_lambda3_7_part() {
        let gamma = parse_form("e123").unwrap();
        assert!(gamma.wedge(&model_phi()).is_zero());
        assert!(model().decompose3(&gamma).unwrap().pi7.is_zero());
    }

    #[test]
    fn reference_constants_hold_for_default_convention() {
        let r = model().scalar_constants().unwrap();
        assert_eq!(r.c_a.as_deref(), Some("-4"));
        assert_eq!(r.c_b.as_deref(), Some("3"));
        assert_eq!(r.lambda14.as_deref(), Some("1"));
        assert_eq!(r.lambda7.as_deref(), Some("-2"));
        assert!(r.paper_consistent);
    }

    #[test]
    fn identity_suite_default_passes() {
        let r = model().identity_suite();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(r.lambda2_dims, Some((7, 14)));
        assert_eq!(r.lambda3_dims, Some((1, 7, 27)));
    }

    #[test]
    fn identity_suite_alt_keeps_dimensions() {
        let r = G2Structure::model(Convention::Alt).identity_suite();
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.lambda2_dims, Some((7, 14)));
        assert_eq!(r.lambda3_dims, Some((1, 7, 27)));
        assert!(!r.paper_consistent);
        assert!(!r.diagnostics.is_empty());
        let n = G2Structure::model(Convention::Alt).normal_frame_check(&[4, 5, 6, 7]).unwrap();
        assert_eq!(n.duality, Duality::SelfDual);
        assert!(!n.passed);
    }

    #[test]
    fn verbatim_all_plus_form_is_not_g2() {
        let m = G2Structure::model(Convention::AltLiteral);
        assert!(m.projectors().is_err());
        let r = m.identity_suite();
        assert!(!r.all_passed());
        // Four distinct eigenvalues of *(phi ^ .) on the 21 basis 2-forms.
        let cols: Vec<Vec<Rational>> = Blade::of_grade(2)
            .iter()
            .map(|b| m.p_operator(&Form::basis(*b)).to_dense(2))
            .collect();
        let p = RatMatrix::from_columns(21, &cols);
        let mut spectrum = std::collections::BTreeSet::new();
        for l in [-2i64, -1, 1, 2] {
            let k = p.sub_scalar_identity(&Rational::from_integer(l.into())).kernel().len();
            if k > 0 {
                spectrum.insert(l);
            }
        }
        assert_eq!(spectrum.len(), 4);
    }

    #[test]
    fn corrupted_phi_fails_suite() {
        let bad = G2Structure::from_phi(parse_form("e123 + e145 + 2 e167").unwrap(), "corrupt").unwrap();
        let r = bad.identity_suite();
        assert!(!r.all_passed());
    }

    #[test]
    fn calibration_examples() {
        let m = model();
        let c = m.calibration_check(&[4, 5, 6, 7]).unwrap();
        assert_eq!(c.class, Calibration::Coassociative);
        assert!(c.complementary_restriction.is_zero());
        assert_eq!(m.calibration_check(&[1, 2, 3]).unwrap().class, Calibration::Associative);
        assert_eq!(m.calibration_check(&[1, 2, 4]).unwrap().class, Calibration::NotCalibrated);
        assert_eq!(m.calibration_check(&[1, 6, 7]).unwrap().class, Calibration::NegativelyCalibrated);
        assert!(m.calibration_check(&[1, 2]).is_err());
        assert!(m.calibration_check(&[1, 1, 2]).is_err());
    }

    #[test]
    fn normal_frame_of_4567() {
        let r = model().normal_frame_check(&[4, 5, 6, 7]).unwrap();
        assert!(r.passed);
        assert_eq!(r.rank, 3);
        let e1 = r.frames.iter().find(|f| f.normal_axis == 1).unwrap();
        assert_eq!(e1.restriction, parse_form("e45 - e67").unwrap());
        assert!(r.frames.iter().all(|f| f.self_dual_part.is_zero()));
        assert!(model().normal_frame_check(&[1, 2, 4, 5]).is_err());
    }

    #[test]
    fn negatively_calibrated_subset_uses_reversed_orientation() {
        let r = model().normal_frame_check(&[2, 3, 4, 5]).unwrap();
        assert_eq!(r.orientation, -1);
        assert!(r.passed);
    }

    #[test]
    fn p_trace_vanishes() {
        let pr = model().projectors().unwrap();
        assert!(pr.p2.trace().is_zero());
        assert_eq!(pr.lambda7, -&pr.lambda14 * q(2));
    }

    fn arb_2form() -> impl Strategy<Value = Form> {
        prop::collection::vec((-6i64..6, 1i64..4), 21).prop_map(|c| {
            let v: Vec<Rational> = c.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect();
            Form::from_dense(2, &v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn p_is_symmetric(b in arb_2form(), g in arb_2form()) {
            let m = model();
            prop_assert_eq!(m.p_operator(&b).inner(&g), b.inner(&m.p_operator(&g)));
        }

        #[test]
        fn lambda3_projections_reconstruct(c in prop::collection::vec(-5i64..5, 35)) {
            let v: Vec<Rational> = c.into_iter().map(|n| Rational::from_integer(n.into())).collect();
            let gamma = Form::from_dense(3, &v);
            let d = model().decompose3(&gamma).unwrap();
            prop_assert_eq!(&(&d.pi1 + &d.pi7) + &d.pi27, gamma);
        }
    }
}
