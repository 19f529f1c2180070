//! Exterior algebra on ℝ⁷ with the Euclidean metric and orientation
//! `e¹²³⁴⁵⁶⁷`.
//!
//! Basis monomials are 7-bit subsets ([`Blade`]); a [`Form`] is a sparse map
//! from blades to coefficients. The coefficient ring is generic so the same
//! sign tables drive both the exact rational algebra and the complex
//! per-mode algebra of the Fourier fields.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub use parse::parse_form;

/// Ambient dimension.
pub const DIM: usize = 7;

pub type Rational = BigRational;

/// A basis monomial `e^I`, stored as the bit mask of `I` (bit `i-1` for index `i`).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);
    pub const VOLUME: Blade = Blade(0x7f);

    pub fn from_mask(mask: u8) -> Result<Blade> {
        if mask & 0x80 != 0 {
            return Err(invalid(format!("blade mask {mask:#x} exceeds 7 axes")));
        }
        Ok(Blade(mask))
    }

    /// Builds the blade of a strictly increasing list of 1-based indices.
    pub fn from_sorted(indices: &[usize]) -> Result<Blade> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("indices {indices:?} are not strictly increasing")));
        }
        let (blade, _) = Blade::from_indices(indices)?;
        Ok(blade)
    }

    /// Builds `e^{i₁} ∧ … ∧ e^{i_k}` from an arbitrary index order, returning
    /// the blade and the permutation sign.
    pub fn from_indices(indices: &[usize]) -> Result<(Blade, i32)> {
        let mut mask = 0u8;
        let mut sign = 1;
        for &i in indices {
            if !(1..=DIM).contains(&i) {
                return Err(invalid(format!("index {i} outside 1..=7")));
            }
            let bit = 1u8 << (i - 1);
            if mask & bit != 0 {
                return Err(invalid(format!("repeated index {i}")));
            }
            // moving e^i past the already placed higher indices
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Ok((Blade(mask), sign))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (1..=DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=DIM).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn complement(self) -> Blade {
        Blade(!self.0 & 0x7f)
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    /// All 128 blades in mask order.
    pub fn all() -> impl Iterator<Item = Blade> {
        (0u8..128).map(Blade)
    }

    /// Blades of grade `k`, ordered lexicographically by index list.
    pub fn of_grade(k: usize) -> &'static [Blade] {
        static TABLE: OnceLock<Vec<Vec<Blade>>> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            (0..=DIM)
                .map(|k| {
                    let mut v: Vec<Blade> = Blade::all().filter(|b| b.grade() == k).collect();
                    v.sort_by_key(|b| b.indices());
                    v
                })
                .collect()
        });
        table.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Position of this blade inside [`Blade::of_grade`] of its grade.
    pub fn grade_index(self) -> usize {
        static INDEX: OnceLock<[usize; 128]> = OnceLock::new();
        let index = INDEX.get_or_init(|| {
            let mut idx = [0usize; 128];
            for k in 0..=DIM {
                for (pos, b) in Blade::of_grade(k).iter().enumerate() {
                    idx[b.0 as usize] = pos;
                }
            }
            idx
        });
        index[self.0 as usize]
    }

    /// `e123`-style label; the scalar blade is `1`.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let digits: String = self.indices().iter().map(|i| i.to_string()).collect();
        format!("e{digits}")
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Sign of `e^A ∧ e^B` relative to `e^{A∪B}`; zero when the blades overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a.0 & b.0 != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    for j in 0..DIM {
        if b.0 & (1 << j) != 0 {
            inversions += (a.0 >> (j + 1)).count_ones();
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign `s` with `*e^I = s·e^{I^c}`, fixed by `e^I ∧ *e^I = e¹²³⁴⁵⁶⁷`.
pub fn hodge_sign(a: Blade) -> i32 {
    wedge_sign(a, a.complement())
}

/// Sign of `ι_{e_i} e^I = s·e^{I∖i}`; zero when `i ∉ I`.
pub fn contract_sign(i: usize, a: Blade) -> i32 {
    if !a.contains(i) {
        return 0;
    }
    let below = a.0 & ((1u8 << (i - 1)) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coefficient ring for forms.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

fn signed<T: Coeff>(sign: i32, c: T) -> T {
    match sign {
        1 => c,
        -1 => -c,
        _ => T::zero(),
    }
}

/// A (possibly inhomogeneous) exterior form on ℝ⁷. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<T = Rational> {
    terms: BTreeMap<Blade, T>,
}

/// Complex-coefficient form, one per Fourier mode.
pub type CForm = Form<Complex64>;

impl<T: Coeff> Default for Form<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> Form<T> {
    pub fn zero() -> Self {
        Form { terms: BTreeMap::new() }
    }

    pub fn scalar(c: T) -> Self {
        Self::monomial(Blade::SCALAR, c)
    }

    pub fn basis(b: Blade) -> Self {
        Self::monomial(b, T::one())
    }

    pub fn monomial(b: Blade, c: T) -> Self {
        let mut f = Self::zero();
        f.add_term(b, c);
        f
    }

    /// `e^{i₁…i_k}` from explicit indices (any order, sign-normalized).
    pub fn e(indices: &[usize]) -> Result<Self> {
        let (b, s) = Blade::from_indices(indices)?;
        Ok(Self::monomial(b, signed(s, T::one())))
    }

    /// The unit 1-form `e^i`.
    pub fn unit1(i: usize) -> Self {
        Self::basis(Blade(1 << (i - 1)))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Blade, T)>) -> Self {
        let mut f = Self::zero();
        for (b, c) in terms {
            f.add_term(b, c);
        }
        f
    }

    pub fn volume() -> Self {
        Self::basis(Blade::VOLUME)
    }

    pub fn add_term(&mut self, b: Blade, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &T)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> T {
        self.terms.get(&b).cloned().unwrap_or_else(T::zero)
    }

    /// Grades present with a nonzero coefficient.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The degree of a nonzero homogeneous form.
    pub fn degree(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// True when every term has grade `k` (the zero form is homogeneous of every degree).
    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    pub fn grade_part(&self, k: usize) -> Self {
        Form {
            terms: self.terms.iter().filter(|(b, _)| b.grade() == k).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    /// Keeps only the monomials supported inside `support` (restriction to a
    /// coordinate subspace).
    pub fn restrict(&self, support: Blade) -> Self {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.is_subset_of(support))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, c)| (*b, c.clone() * s.clone())))
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        Form::from_terms(self.terms.iter().map(|(b, c)| (*b, f(c))))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let s = wedge_sign(*a, *b);
                if s != 0 {
                    out.add_term(a.union(*b), signed(s, x.clone() * y.clone()));
                }
            }
        }
        out
    }

    pub fn hodge(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, c)| (b.complement(), signed(hodge_sign(*b), c.clone()))))
    }

    /// Interior product with the vector dual to the 1-form `v`.
    pub fn contract(&self, v: &Self) -> Result<Self> {
        if !v.is_homogeneous(1) {
            return Err(invalid("contract expects a 1-form as its vector argument"));
        }
        Ok(self.contract_unchecked(v))
    }

    pub(crate) fn contract_unchecked(&self, v: &Self) -> Self {
        let mut out = Self::zero();
        for (vb, vc) in &v.terms {
            let i = vb.0.trailing_zeros() as usize + 1;
            for (b, c) in &self.terms {
                let s = contract_sign(i, *b);
                if s != 0 {
                    out.add_term(Blade(b.0 & !vb.0), signed(s, vc.clone() * c.clone()));
                }
            }
        }
        out
    }

    /// Interior product with the basis vector `e_i`.
    pub fn contract_basis(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(b, c)| {
            let s = contract_sign(i, *b);
            (s != 0).then(|| (Blade(b.0 & !(1 << (i - 1))), signed(s, c.clone())))
        }))
    }

    /// Induced inner product; monomials are orthonormal, mixed grades pair to zero.
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (b, c) in &self.terms {
            if let Some(d) = other.terms.get(b) {
                acc = acc + c.clone() * d.clone();
            }
        }
        acc
    }

    /// Dense coefficient vector of the grade-`k` part in [`Blade::of_grade`] order.
    pub fn to_dense(&self, k: usize) -> Vec<T> {
        Blade::of_grade(k).iter().map(|b| self.coeff(*b)).collect()
    }

    pub fn from_dense(k: usize, coeffs: &[T]) -> Self {
        Self::from_terms(Blade::of_grade(k).iter().copied().zip(coeffs.iter().cloned()))
    }
}

impl CForm {
    /// Sum of squared moduli of the coefficients.
    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).fold(0.0, |a, b| a + b)
    }

    pub fn conj(&self) -> CForm {
        self.map(|c| c.conj())
    }

    /// Hermitian pairing `Σ conj(a_I)·b_I`.
    pub fn hermitian(&self, other: &CForm) -> Complex64 {
        self.terms.iter().filter_map(|(b, c)| other.terms.get(b).map(|d| c.conj() * d)).sum()
    }

    /// Drops coefficients whose modulus is at most `tol`.
    pub fn prune(&self, tol: f64) -> CForm {
        Form { terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(b, c)| (*b, *c)).collect() }
    }
}

impl Form<Rational> {
    pub fn to_complex(&self) -> CForm {
        self.map(|c| Complex64::new(rational_to_f64(c), 0.0))
    }

    pub fn from_int_terms(terms: &[(&[usize], i64)]) -> Result<Self> {
        let mut f = Self::zero();
        for (idx, c) in terms {
            let (b, s) = Blade::from_indices(idx)?;
            f.add_term(b, Rational::from_integer((s as i64 * c).into()));
        }
        Ok(f)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl<T: Coeff> Add for Form<T> {
    type Output = Form<T>;
    fn add(mut self, rhs: Form<T>) -> Form<T> {
        self += &rhs;
        self
    }
}

impl<T: Coeff> Add<&Form<T>> for &Form<T> {
    type Output = Form<T>;
    fn add(self, rhs: &Form<T>) -> Form<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Coeff> AddAssign<&Form<T>> for Form<T> {
    fn add_assign(&mut self, rhs: &Form<T>) {
        for (b, c) in &rhs.terms {
            self.add_term(*b, c.clone());
        }
    }
}

impl<T: Coeff> Sub for Form<T> {
    type Output = Form<T>;
    fn sub(mut self, rhs: Form<T>) -> Form<T> {
        self -= &rhs;
        self
    }
}

impl<T: Coeff> Sub<&Form<T>> for &Form<T> {
    type Output = Form<T>;
    fn sub(self, rhs: &Form<T>) -> Form<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Coeff> SubAssign<&Form<T>> for Form<T> {
    fn sub_assign(&mut self, rhs: &Form<T>) {
        for (b, c) in &rhs.terms {
            self.add_term(*b, -c.clone());
        }
    }
}

impl<T: Coeff> Neg for Form<T> {
    type Output = Form<T>;
    fn neg(self) -> Form<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Coeff> Neg for &Form<T> {
    type Output = Form<T>;
    fn neg(self) -> Form<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Coeff> Mul<T> for &Form<T> {
    type Output = Form<T>;
    fn mul(self, rhs: T) -> Form<T> {
        self.scale(&rhs)
    }
}

impl fmt::Display for Form<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_form(self))
    }
}

pub use parse::format_form;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2_reps::{model_phi, model_psi};

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn e(idx: &[usize]) -> Form {
        Form::e(idx).unwrap()
    }

    #[test]
    fn wedge_adjacent_indices() {
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
        assert_eq!(e(&[2]).wedge(&e(&[1])), -e(&[1, 2]));
    }

    #[test]
    fn odd_form_squares_to_zero() {
        assert!(model_phi().wedge(&model_phi()).is_zero());
        assert!(model_psi().wedge(&model_psi()).is_zero());
    }

    #[test]
    fn phi_wedge_psi_is_seven_volumes() {
        // oracle: direct term-by-term expansion over the 7×7 monomial pairs
        let phi = model_phi();
        let psi = model_psi();
        let mut acc = Form::zero();
        for (a, x) in phi.terms() {
            for (b, y) in psi.terms() {
                if a.mask() & b.mask() == 0 {
                    let mut idx = a.indices();
                    idx.extend(b.indices());
                    let (blade, s) = Blade::from_indices(&idx).unwrap();
                    acc.add_term(blade, int(s as i64) * x.clone() * y.clone());
                }
            }
        }
        assert_eq!(acc, Form::volume().scale(&int(7)));
        assert_eq!(phi.wedge(&psi), acc);
    }

    #[test]
    fn hodge_of_one_is_volume() {
        assert_eq!(Form::<Rational>::scalar(int(1)).hodge(), Form::volume());
    }

    #[test]
    fn double_hodge_is_identity_on_all_blades() {
        for b in Blade::all() {
            let f = Form::<Rational>::basis(b);
            assert_eq!(f.hodge().hodge(), f, "blade {b}");
        }
    }

    #[test]
    fn hodge_on_basis_satisfies_orientation_rule() {
        for b in Blade::all() {
            let f = Form::<Rational>::basis(b);
            assert_eq!(f.wedge(&f.hodge()), Form::volume(), "blade {b}");
        }
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(e(&[1, 2]).contract(&e(&[1])).unwrap(), e(&[2]));
        assert!(e(&[1, 2, 3]).contract(&e(&[7])).unwrap().is_zero());
        assert!(e(&[1, 2]).contract(&e(&[1, 2])).is_err());
    }

    #[test]
    fn contracted_phi_has_norm_three() {
        let phi = model_phi();
        for i in 1..=7 {
            let b = phi.contract(&e(&[i])).unwrap();
            assert_eq!(b.inner(&b), int(3), "e_{i}");
        }
    }

    #[test]
    fn inner_products() {
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 2])), int(1));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 3])), int(0));
        assert_eq!(model_phi().inner(&model_phi()), int(7));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 2, 3])), int(0));
    }

    #[test]
    fn wedge_anticommutes_on_all_blade_pairs() {
        for a in Blade::all() {
            for b in Blade::all() {
                let x = Form::<Rational>::basis(a);
                let y = Form::<Rational>::basis(b);
                let sign = if (a.grade() * b.grade()) % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(x.wedge(&y), y.wedge(&x).scale(&sign));
            }
        }
    }

    #[test]
    fn wedge_above_top_degree_vanishes() {
        assert!(e(&[1, 2, 3, 4]).wedge(&e(&[4, 5, 6, 7])).is_zero());
        assert!(model_psi().wedge(&model_phi().wedge(&e(&[1]))).is_zero());
    }

    #[test]
    fn blade_grade_tables() {
        let sizes: Vec<usize> = (0..=7).map(|k| Blade::of_grade(k).len()).collect();
        assert_eq!(sizes, vec![1, 7, 21, 35, 35, 21, 7, 1]);
        for k in 0..=7 {
            for (i, b) in Blade::of_grade(k).iter().enumerate() {
                assert_eq!(b.grade_index(), i);
            }
        }
        assert_eq!(Blade::of_grade(2)[0].label(), "e12");
        assert_eq!(Blade::of_grade(2)[1].label(), "e13");
    }

    #[test]
    fn from_indices_rejects_repeats() {
        assert!(Blade::from_indices(&[1, 1]).is_err());
        assert!(Blade::from_indices(&[8]).is_err());
        assert_eq!(Blade::from_indices(&[3, 1, 2]).unwrap().1, 1);
        assert_eq!(Blade::from_indices(&[2, 1]).unwrap().1, -1);
    }
}
