//! Chern-Weil densities of a coassociative 4-manifold and the pairing
//! `⟨p₁(X) ∪ α, [X]⟩ = 6τ − 2χ`.
//!
//! Everything is a polynomial identity in the six curvature 2-forms of a
//! local orthonormal frame, so the check is exact with `u = 1/4π²` kept formal.

mod manifold;
mod poly;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exterior::Rational;

pub use manifold::{
    builtin_catalog, intersection_inertia, load_catalog, Inertia, FourManifold, Pairing, PairingRow, Trichotomy,
};
pub use poly::{CurvMatrix, CurvPoly, NUM_SYMBOLS, SYMBOL_PAIRS};

/// The Levi-Civita curvature `R[i][j] = Ω^i_j` in a local orthonormal frame.
pub fn so4_curvature_matrix() -> CurvMatrix {
    let mut m = CurvMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            m.entries[i][j] = CurvPoly::omega(i, j);
        }
    }
    m
}

fn w(i: usize, j: usize) -> CurvPoly {
    CurvPoly::omega(i, j)
}

fn antisymmetric_3(a01: CurvPoly, a02: CurvPoly, a12: CurvPoly) -> CurvMatrix {
    let mut m = CurvMatrix::zeros(3);
    m.entries[0][1] = -&a01;
    m.entries[1][0] = a01;
    m.entries[0][2] = -&a02;
    m.entries[2][0] = a02;
    m.entries[1][2] = -&a12;
    m.entries[2][1] = a12;
    m
}

/// Induced curvature on `Λ²₋` in the basis `ω₁ = e₀₁ − e₂₃, ω₂ = e₀₂ − e₃₁, ω₃ = e₀₃ − e₁₂`,
/// entered as displayed rather than derived.
pub fn asd_curvature_matrix() -> CurvMatrix {
    antisymmetric_3(
        &w(0, 3) - &w(1, 2),
        -&(&w(0, 2) + &w(1, 3)),
        &w(0, 1) - &w(2, 3),
    )
}

/// Antisymmetric 4×4 coefficient matrix of a 2-form on ℝ⁴.
type TwoForm = [[i64; 4]; 4];

fn two_form(terms: &[(usize, usize, i64)]) -> TwoForm {
    let mut a = [[0; 4]; 4];
    for &(i, j, c) in terms {
        a[i][j] += c;
        a[j][i] -= c;
    }
    a
}

/// `ω₁, ω₂, ω₃` spanning `Λ²₋` (orientation `e₀₁₂₃`).
pub fn asd_basis() -> [TwoForm; 3] {
    [
        two_form(&[(0, 1, 1), (2, 3, -1)]),
        two_form(&[(0, 2, 1), (3, 1, -1)]),
        two_form(&[(0, 3, 1), (1, 2, -1)]),
    ]
}

/// `e₀₁ + e₂₃, e₀₂ + e₃₁, e₀₃ + e₁₂` spanning `Λ²₊`.
pub fn sd_basis() -> [TwoForm; 3] {
    [
        two_form(&[(0, 1, 1), (2, 3, 1)]),
        two_form(&[(0, 2, 1), (3, 1, 1)]),
        two_form(&[(0, 3, 1), (1, 2, 1)]),
    ]
}

/// `[R, A]`, the derivation action of `R ∈ so(4)` on the 2-form with matrix `A`.
fn commutator(r: &CurvMatrix, a: &TwoForm) -> Vec<Vec<CurvPoly>> {
    let mut out = vec![vec![CurvPoly::zero(); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = CurvPoly::zero();
            for k in 0..4 {
                if a[k][j] != 0 {
                    acc = &acc + &r.get(i, k).scale(&Rational::from_integer(a[k][j].into()));
                }
                if a[i][k] != 0 {
                    acc = &acc - &r.get(k, j).scale(&Rational::from_integer(a[i][k].into()));
                }
            }
            *cell = acc;
        }
    }
    out
}

/// `⟨A, B⟩ = ½ Σ A_ij B_ij`, linear in the polynomial argument.
fn pair(a: &TwoForm, b: &[Vec<CurvPoly>]) -> CurvPoly {
    let mut acc = CurvPoly::zero();
    for i in 0..4 {
        for j in 0..4 {
            if a[i][j] != 0 {
                acc = &acc + &b[i][j].scale(&Rational::new(a[i][j].into(), 2.into()));
            }
        }
    }
    acc
}

/// Matrix of `R` acting on `span(basis)`; fails if the action leaves the subspace.
pub fn induced_curvature(r: &CurvMatrix, basis: &[TwoForm; 3], complement: &[TwoForm; 3]) -> Result<CurvMatrix> {
    let mut m = CurvMatrix::zeros(3);
    let norm = |a: &TwoForm| {
        let n: i64 = a.iter().flatten().map(|x| x * x).sum();
        Rational::new(2.into(), n.into())
    };
    for (l, wl) in basis.iter().enumerate() {
        let image = commutator(r, wl);
        for (k, wk) in basis.iter().enumerate() {
            m.entries[k][l] = pair(wk, &image).scale(&norm(wk));
        }
        for wc in complement {
            let leak = pair(wc, &image);
            if !leak.is_zero() {
                return Err(Error::Internal(format!("curvature action leaks out of the subspace: {leak}")));
            }
        }
    }
    Ok(m)
}

/// Induced curvature on `Λ²₋` obtained from `[R, ω]`.
pub fn derived_asd_curvature_matrix() -> Result<CurvMatrix> {
    induced_curvature(&so4_curvature_matrix(), &asd_basis(), &sd_basis())
}

/// Induced curvature on `Λ²₊` obtained from `[R, ω]`.
pub fn derived_sd_curvature_matrix() -> Result<CurvMatrix> {
    induced_curvature(&so4_curvature_matrix(), &sd_basis(), &asd_basis())
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] == p[j] {
                return 0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Gauss-Bonnet integrand `(1/2⁴π²2!) Σ ε_ijkl Ω^i_j ∧ Ω^k_l = (u/8) Σ ε_ijkl Ω^i_j Ω^k_l`.
pub fn euler_density() -> CurvPoly {
    let mut acc = CurvPoly::zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let s = permutation_sign(&[i, j, k, l]);
                    if s != 0 {
                        acc = &acc + &(&w(i, j) * &w(k, l)).scale(&Rational::from_integer(s.into()));
                    }
                }
            }
        }
    }
    &CurvPoly::unit() * &acc.scale(&Rational::new(1.into(), 8.into()))
}

/// `−(1/8π²) tr(M∧M) = −(u/2) tr(M²)`.
pub fn p1_density(m: &CurvMatrix) -> Result<CurvPoly> {
    if !m.is_antisymmetric() {
        return Err(invalid("p1_density needs an antisymmetric curvature matrix"));
    }
    Ok(&CurvPoly::unit() * &m.trace_square().scale(&Rational::new((-1).into(), 2.into())))
}

/// How a displayed matrix relates to the derived one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixRelation {
    Equal,
    Transpose,
    Different,
}

fn relation(display: &CurvMatrix, derived: &CurvMatrix) -> MatrixRelation {
    if display == derived {
        MatrixRelation::Equal
    } else if display == &derived.transpose() {
        MatrixRelation::Transpose
    } else {
        MatrixRelation::Different
    }
}

/// `p₁(TN) + p₁(E) = a·p₁(TN) + b·χ`, integrated with `∫p₁(TN) = 3τ`, gives `3a·τ + b·χ`.
fn split_coefficients(p1: &CurvPoly, chi: &CurvPoly, sum: &CurvPoly) -> Result<(i64, i64)> {
    let sq = [2, 0, 0, 0, 0, 0];
    let cross = [1, 0, 0, 0, 0, 1];
    let a = sum.coeff(sq, 1) / p1.coeff(sq, 1);
    let b = sum.coeff(cross, 1) / chi.coeff(cross, 1);
    let rest = &(sum - &p1.scale(&a)) - &chi.scale(&b);
    if !rest.is_zero() || !a.is_integer() || !b.is_integer() {
        return Err(Error::Internal(format!("p1 sum is not a combination of p1 and chi: remainder {rest}")));
    }
    let three_a = (a * Rational::from_integer(3.into())).to_integer();
    let to_i64 = |x: num_bigint::BigInt| i64::try_from(x).map_err(|e| Error::Internal(e.to_string()));
    Ok((to_i64(three_a)?, to_i64(b.to_integer())?))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub p1_tangent: String,
    pub euler: String,
    pub p1_asd: String,
    pub p1_sd: String,
    /// `p₁(Λ²₋) − p₁(TN) + 2χ` from the displayed matrix.
    pub residual: String,
    pub residual_is_zero: bool,
    pub derived_residual_is_zero: bool,
    pub display_vs_derived: MatrixRelation,
    pub flip_residual_is_zero: bool,
    /// `(6, −2)` in `6τ − 2χ`.
    pub coefficient_pair: (i64, i64),
    /// `p₁(Λ²₊) − p₁(TN) − 2χ`.
    pub sd_residual_is_zero: bool,
    /// `(6, 2)` for the self-dual normal bundle.
    pub sd_coefficient_pair: (i64, i64),
    /// `p₁(Λ²₊) + p₁(Λ²₋) − 2p₁(TN)`.
    pub trace_identity_is_zero: bool,
}

/// Checks the adjunction identity `p₁(Λ²₋) = p₁(TN) − 2χ` and its self-dual mirror exactly.
pub fn verify_adjunction_identity() -> Result<AdjunctionReport> {
    let r = so4_curvature_matrix();
    let p1 = p1_density(&r)?;
    let chi = euler_density();
    let two_chi = chi.scale(&Rational::from_integer(2.into()));
    let display = asd_curvature_matrix();
    let p1_asd = p1_density(&display)?;
    let residual = &(&p1_asd - &p1) + &two_chi;
    if !residual.is_zero() {
        return Err(Error::Internal(format!("adjunction identity fails: residual {residual}")));
    }
    let derived = derived_asd_curvature_matrix()?;
    let derived_residual = &(&p1_density(&derived)? - &p1) + &two_chi;
    let flip_residual = &(&p1_asd.flip_symbols() - &p1.flip_symbols()) + &two_chi.flip_symbols();
    let coefficient_pair = split_coefficients(&p1, &chi, &(&p1 + &p1_asd))?;

    let p1_sd = p1_density(&derived_sd_curvature_matrix()?)?;
    let sd_residual = &(&p1_sd - &p1) - &two_chi;
    let sd_coefficient_pair = split_coefficients(&p1, &chi, &(&p1 + &p1_sd))?;
    let trace_identity = &(&p1_sd + &p1_asd) - &p1.scale(&Rational::from_integer(2.into()));

    Ok(AdjunctionReport {
        p1_tangent: p1.to_string(),
        euler: chi.to_string(),
        p1_asd: p1_asd.to_string(),
        p1_sd: p1_sd.to_string(),
        residual: residual.to_string(),
        residual_is_zero: true,
        derived_residual_is_zero: derived_residual.is_zero(),
        display_vs_derived: relation(&display, &derived),
        flip_residual_is_zero: flip_residual.is_zero(),
        coefficient_pair,
        sd_residual_is_zero: sd_residual.is_zero(),
        sd_coefficient_pair,
        trace_identity_is_zero: trace_identity.is_zero(),
    })
}
