//! Text grammar for rational forms: `e123 + e145 - 2/3 e167`.
//!
//! A term is an optional signed rational coefficient, an optional `*`, and a
//! monomial `e` followed by 1-based index digits. A bare rational is a
//! scalar. Index strings may be unsorted; the permutation sign is folded
//! into the coefficient.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Blade, Form, Rational};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn rational(&mut self) -> Result<Option<Rational>> {
        let Some(num) = self.digits() else { return Ok(None) };
        let num: BigInt = num.parse().map_err(|_| self.err("bad integer"))?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            let den: BigInt = den.parse().map_err(|_| self.err("bad integer"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Some(Rational::new(num, den)));
        }
        Ok(Some(Rational::from_integer(num)))
    }

    fn term(&mut self, sign: i32) -> Result<(Blade, Rational)> {
        self.skip_ws();
        let coeff = self.rational()?;
        self.skip_ws();
        let mut explicit_star = false;
        if self.peek() == Some(b'*') {
            if coeff.is_none() {
                return Err(self.err("'*' without a coefficient"));
            }
            explicit_star = true;
            self.pos += 1;
            self.skip_ws();
        }
        let coeff_missing = coeff.is_none();
        let coeff = coeff.unwrap_or_else(Rational::one);
        let coeff = if sign < 0 { -coeff } else { coeff };
        if self.peek() != Some(b'e') {
            if coeff_missing {
                return Err(self.err("expected a coefficient or monomial"));
            }
            if explicit_star {
                return Err(self.err("expected monomial after '*'"));
            }
            return Ok((Blade::SCALAR, coeff));
        }
        self.pos += 1;
        let start = self.pos;
        let digits = self.digits().ok_or_else(|| self.err("expected index digits after 'e'"))?;
        let mut indices = Vec::with_capacity(digits.len());
        for (k, ch) in digits.bytes().enumerate() {
            let i = (ch - b'0') as usize;
            if !(1..=7).contains(&i) {
                return Err(Error::Parse { pos: start + k, msg: format!("index {i} outside 1..=7") });
            }
            if indices.contains(&i) {
                return Err(Error::Parse { pos: start + k, msg: format!("repeated index {i}") });
            }
            indices.push(i);
        }
        let (blade, s) = Blade::from_indices(&indices).expect("indices validated above");
        Ok((blade, if s < 0 { -coeff } else { coeff }))
    }
}

pub fn parse_form(text: &str) -> Result<Form> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut form = Form::zero();
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.err("empty form"));
    }
    let mut sign = 1;
    if let Some(c @ (b'+' | b'-')) = cur.peek() {
        sign = if c == b'-' { -1 } else { 1 };
        cur.pos += 1;
    }
    loop {
        let (b, c) = cur.term(sign)?;
        form.add_term(b, c);
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(c) => return Err(cur.err(format!("unexpected character {:?}", c as char))),
        }
        cur.pos += 1;
    }
    Ok(form)
}

pub fn format_form(form: &Form) -> String {
    let mut terms: Vec<(Blade, &Rational)> = form.terms().collect();
    terms.sort_by_key(|(b, _)| (b.grade(), b.indices()));
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (b, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if b == Blade::SCALAR {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push(' ');
            }
            out.push_str(&b.label());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2_reps::model_phi;
    use proptest::prelude::*;

    #[test]
    fn two_monomial_three_form() {
        let f = parse_form("e123 + e145").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.degree(), Some(3));
    }

    #[test]
    fn unsorted_indices_pick_up_sign() {
        assert_eq!(parse_form("e21").unwrap(), -Form::e(&[1, 2]).unwrap());
    }

    #[test]
    fn repeated_index_reports_position() {
        match parse_form("e11") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "e", "e8", "e12 +", "2/0 e1", "3 * ", "e12 e34", "x"] {
            assert!(parse_form(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn coefficients_and_whitespace() {
        let f = parse_form("  -2/3*e167+ 5 e2 -1/2").unwrap();
        assert_eq!(f.coeff(Blade::from_sorted(&[1, 6, 7]).unwrap()), Rational::new((-2).into(), 3.into()));
        assert_eq!(f.coeff(Blade::from_sorted(&[2]).unwrap()), Rational::from_integer(5.into()));
        assert_eq!(f.coeff(Blade::SCALAR), Rational::new((-1).into(), 2.into()));
    }

    #[test]
    fn format_model_phi() {
        assert_eq!(format_form(&model_phi()), "e123 + e145 - e167 + e246 + e257 + e347 - e356");
        assert_eq!(format_form(&Form::zero()), "0");
    }

    fn arb_form() -> impl Strategy<Value = Form> {
        prop::collection::vec((0u8..128, -20i64..20, 1i64..7), 0..12).prop_map(|terms| {
            Form::from_terms(
                terms
                    .into_iter()
                    .map(|(m, n, d)| (Blade::from_mask(m).unwrap(), Rational::new(n.into(), d.into()))),
            )
        })
    }

    proptest! {
        #[test]
        fn format_then_parse_round_trips(f in arb_form()) {
            prop_assert_eq!(parse_form(&format_form(&f)).unwrap(), f);
        }
    }
}
