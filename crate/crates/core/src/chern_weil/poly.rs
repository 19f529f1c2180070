//! Commutative polynomials in the six curvature 2-forms `Ω^i_j` (i < j) and
//! the formal unit `u = 1/4π²`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exterior::Rational;

/// Number of curvature symbols; index 6 of an exponent vector is `u`.
pub const NUM_SYMBOLS: usize = 6;
const U: usize = 6;

/// `(i, j)` pairs of the symbols in storage order.
pub const SYMBOL_PAIRS: [(usize, usize); NUM_SYMBOLS] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

type Exponents = [u8; NUM_SYMBOLS + 1];

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CurvPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl CurvPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NUM_SYMBOLS + 1], c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    /// The formal unit `u = 1/4π²`.
    pub fn unit() -> Self {
        let mut e = [0; NUM_SYMBOLS + 1];
        e[U] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    /// `Ω^i_j` with the antisymmetry `Ω^j_i = −Ω^i_j` resolved; zero on the diagonal.
    pub fn omega(i: usize, j: usize) -> Self {
        if i == j {
            return Self::zero();
        }
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let k = SYMBOL_PAIRS.iter().position(|&p| p == (lo, hi)).expect("indices in 0..4");
        let mut e = [0; NUM_SYMBOLS + 1];
        e[k] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::from_integer(sign.into()));
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, c * s);
        }
        p
    }

    /// Largest total degree in the curvature symbols (`u` not counted).
    pub fn curvature_degree(&self) -> usize {
        self.terms.keys().map(|e| e[..NUM_SYMBOLS].iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    /// Coefficient of the monomial `u^k · Π W^e`.
    pub fn coeff(&self, symbols: [u8; NUM_SYMBOLS], unit_power: u8) -> Rational {
        let mut e = [0; NUM_SYMBOLS + 1];
        e[..NUM_SYMBOLS].copy_from_slice(&symbols);
        e[U] = unit_power;
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Substitutes `W ↦ sign·W` for every symbol.
    pub fn flip_symbols(&self) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            let deg: u32 = e[..NUM_SYMBOLS].iter().map(|&x| x as u32).sum();
            p.add_term(*e, if deg.is_multiple_of(2) { c.clone() } else { -c.clone() });
        }
        p
    }
}

impl Add for &CurvPoly {
    type Output = CurvPoly;
    fn add(self, rhs: &CurvPoly) -> CurvPoly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl Sub for &CurvPoly {
    type Output = CurvPoly;
    fn sub(self, rhs: &CurvPoly) -> CurvPoly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, -c.clone());
        }
        p
    }
}

impl Neg for &CurvPoly {
    type Output = CurvPoly;
    fn neg(self) -> CurvPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &CurvPoly {
    type Output = CurvPoly;
    fn mul(self, rhs: &CurvPoly) -> CurvPoly {
        let mut p = CurvPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

impl fmt::Display for CurvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if e[U] > 0 {
                factors.push(if e[U] == 1 { "u".into() } else { format!("u^{}", e[U]) });
            }
            for (k, &(i, j)) in SYMBOL_PAIRS.iter().enumerate() {
                match e[k] {
                    0 => {}
                    1 => factors.push(format!("W{i}{j}")),
                    p => factors.push(format!("W{i}{j}^{p}")),
                }
            }
            let mag = c.abs();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("·"))?;
            } else {
                write!(f, "{mag}·{}", factors.join("·"))?;
            }
        }
        Ok(())
    }
}

/// Square matrix of curvature polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct CurvMatrix {
    pub n: usize,
    pub entries: Vec<Vec<CurvPoly>>,
}

impl CurvMatrix {
    pub fn zeros(n: usize) -> Self {
        CurvMatrix { n, entries: vec![vec![CurvPoly::zero(); n]; n] }
    }

    pub fn get(&self, i: usize, j: usize) -> &CurvPoly {
        &self.entries[i][j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (&self.entries[i][j] + &self.entries[j][i]).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    /// `tr(M∧M) = Σ_{ij} M_ij M_ji`; 2-forms commute so this is the ordinary trace of M².
    pub fn trace_square(&self) -> CurvPoly {
        let mut acc = CurvPoly::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = &acc + &(&self.entries[i][j] * &self.entries[j][i]);
            }
        }
        acc
    }
}
