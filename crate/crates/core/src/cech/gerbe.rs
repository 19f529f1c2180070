//! Gerbe classes as integer cocycles and Poincaré duals of coordinate subtori.

use serde::Serialize;

use super::{Cochain, FiniteComplex};
use crate::error::{invalid, Result};

/// A cocycle representative together with its evaluations on the complex's test cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GerbeClass {
    pub complex: String,
    #[serde(skip)]
    fingerprint: u64,
    #[serde(skip)]
    pub representative: Cochain,
    /// `c₁` coordinates: values on `FiniteComplex::test_cycles`.
    pub coordinates: Vec<i64>,
}

/// `Σ qᵢ Nᵢ` for coordinate subtori `Nᵢ = (axes, offsets)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FormalSum {
    pub terms: Vec<(i64, Vec<usize>, Vec<f64>)>,
}

impl GerbeClass {
    /// Wraps a cocycle; fails unless `δc = 0`.
    pub fn from_cocycle(x: &FiniteComplex, c: Cochain) -> Result<Self> {
        if c.values.len() != x.count(c.degree)? {
            return Err(invalid("cochain does not match the complex"));
        }
        if c.degree < x.dim() && !x.coboundary(&c)?.is_zero() {
            return Err(invalid("representative is not a cocycle"));
        }
        let coordinates = x.test_cycles(c.degree)?.iter().map(|z| c.evaluate(z)).collect();
        Ok(GerbeClass { complex: x.name.clone(), fingerprint: x.fingerprint(), representative: c, coordinates })
    }

    pub fn trivial(x: &FiniteComplex, degree: usize) -> Result<Self> {
        Self::from_cocycle(x, Cochain::zero(x, degree)?)
    }

    fn check_same(&self, other: &GerbeClass) -> Result<()> {
        if self.fingerprint != other.fingerprint || self.representative.degree != other.representative.degree {
            return Err(invalid(format!(
                "gerbes live on different complexes or degrees ({} vs {})",
                self.complex, other.complex
            )));
        }
        Ok(())
    }

    fn check_on(&self, x: &FiniteComplex) -> Result<()> {
        if self.fingerprint != x.fingerprint() {
            return Err(invalid(format!("gerbe on {} used with complex {}", self.complex, x.name)));
        }
        Ok(())
    }

    /// `G₁ ⊗ G₂`: cocycles and coordinates add.
    pub fn tensor(&self, other: &GerbeClass) -> Result<GerbeClass> {
        self.check_same(other)?;
        let values = self.representative.values.iter().zip(&other.representative.values).map(|(a, b)| a + b).collect();
        Ok(GerbeClass {
            complex: self.complex.clone(),
            fingerprint: self.fingerprint,
            representative: Cochain { degree: self.representative.degree, values },
            coordinates: self.coordinates.iter().zip(&other.coordinates).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inverse(&self) -> GerbeClass {
        self.power(-1)
    }

    /// `G^{⊗q}`.
    pub fn power(&self, q: i64) -> GerbeClass {
        GerbeClass {
            complex: self.complex.clone(),
            fingerprint: self.fingerprint,
            representative: Cochain {
                degree: self.representative.degree,
                values: self.representative.values.iter().map(|v| q * v).collect(),
            },
            coordinates: self.coordinates.iter().map(|v| q * v).collect(),
        }
    }

    pub fn c1(&self) -> &[i64] {
        &self.coordinates
    }

    /// Exact triviality in cohomology (coboundary membership over ℤ).
    pub fn is_trivial(&self, x: &FiniteComplex) -> Result<bool> {
        self.check_on(x)?;
        x.is_coboundary(&self.representative)
    }

    /// `[self] = [other]` in `H^k(X, ℤ)`.
    pub fn same_class(&self, other: &GerbeClass, x: &FiniteComplex) -> Result<bool> {
        self.check_same(other)?;
        self.tensor(&other.inverse())?.is_trivial(x)
    }

    /// Poincaré dual of `N = {x_t = offset_t for t ∉ axes}` on a cubical torus.
    ///
    /// `axes` are the 1-based tangent directions of `N`; `offsets` give one
    /// non-lattice position per normal axis, in increasing axis order.
    pub fn pd_cocycle(x: &FiniteComplex, axes: &[usize], offsets: &[f64]) -> Result<GerbeClass> {
        Self::pd_formal_sum(x, &FormalSum { terms: vec![(1, axes.to_vec(), offsets.to_vec())] })
    }

    /// Poincaré dual of a formal sum, built cell by cell from the combined support.
    pub fn pd_formal_sum(x: &FiniteComplex, sum: &FormalSum) -> Result<GerbeClass> {
        let g = x.torus.as_ref().ok_or_else(|| invalid(format!("{} is not a cubical torus", x.name)))?;
        if sum.terms.is_empty() {
            return Err(invalid("empty formal sum"));
        }
        let mut degree = None;
        let mut values: Vec<i64> = Vec::new();
        for (q, axes, offsets) in &sum.terms {
            let mut tangent: Vec<usize> = axes.iter().map(|a| a.wrapping_sub(1)).collect();
            tangent.sort_unstable();
            if tangent.iter().any(|&a| a >= g.dim) || tangent.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("axes {axes:?} are not distinct values in 1..={}", g.dim)));
            }
            let normal: Vec<usize> = (0..g.dim).filter(|a| !tangent.contains(a)).collect();
            if offsets.len() != normal.len() {
                return Err(invalid(format!("{} offsets given for {} normal axes", offsets.len(), normal.len())));
            }
            let mut base = Vec::new();
            for &o in offsets {
                if !o.is_finite() || o.fract() == 0.0 || o < 0.0 || o >= g.n as f64 {
                    return Err(invalid(format!("offset {o} must lie strictly between lattice planes in [0, {})", g.n)));
                }
                base.push(o.floor() as usize);
            }
            let k = normal.len();
            match degree {
                None => {
                    degree = Some(k);
                    values = vec![0; x.count(k)?];
                }
                Some(d) if d != k => return Err(invalid("formal sum mixes codimensions")),
                _ => {}
            }
            for pi in 0..g.points() {
                let p = g.point(pi);
                if normal.iter().zip(&base).all(|(&t, &b)| p[t] == b) {
                    values[g.cell_index(&normal, &p)?] += q;
                }
            }
        }
        let degree = degree.expect("nonempty");
        Self::from_cocycle(x, Cochain { degree, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> FiniteComplex {
        FiniteComplex::cubical_torus(4, 2).unwrap()
    }

    #[test]
    fn pd_on_t4_pairs_with_complement() {
        let x = t4();
        // N = T² × pt; its dual 2-cocycle sees the complementary 2-torus only.
        let g = GerbeClass::pd_cocycle(&x, &[3, 4], &[0.5, 1.5]).unwrap();
        let dirs = x.torus.as_ref().unwrap().directions(2);
        for (d, v) in dirs.iter().zip(g.c1()) {
            assert_eq!(*v, i64::from(d == &vec![0, 1]), "{d:?}");
        }
        assert!(g.tensor(&g.inverse()).unwrap().is_trivial(&x).unwrap());
        assert!(!g.is_trivial(&x).unwrap());
    }

    #[test]
    fn parallel_copies_agree() {
        let x = t4();
        let a = GerbeClass::pd_cocycle(&x, &[2, 4], &[0.25, 0.5]).unwrap();
        let b = GerbeClass::pd_cocycle(&x, &[2, 4], &[1.75, 1.5]).unwrap();
        assert_ne!(a.representative, b.representative);
        assert!(a.same_class(&b, &x).unwrap());
    }

    #[test]
    fn bad_inputs() {
        let x = t4();
        assert!(GerbeClass::pd_cocycle(&x, &[1, 2], &[1.0, 0.5]).is_err());
        assert!(GerbeClass::pd_cocycle(&x, &[1, 1], &[0.5, 0.5]).is_err());
        assert!(GerbeClass::pd_cocycle(&x, &[1, 5], &[0.5, 0.5]).is_err());
        assert!(GerbeClass::pd_cocycle(&x, &[1, 2], &[0.5]).is_err());
        let s3 = FiniteComplex::boundary_of_4_simplex();
        assert!(GerbeClass::pd_cocycle(&s3, &[1], &[0.5, 0.5, 0.5]).is_err());
        let other = GerbeClass::trivial(&FiniteComplex::cubical_torus(4, 3).unwrap(), 2).unwrap();
        let g = GerbeClass::pd_cocycle(&x, &[1, 2], &[0.5, 0.5]).unwrap();
        assert!(g.tensor(&other).is_err());
    }

    #[test]
    fn non_cocycle_rejected() {
        let x = t4();
        let mut c = Cochain::zero(&x, 2).unwrap();
        c.values[0] = 1;
        assert!(GerbeClass::from_cocycle(&x, c).is_err());
    }

    #[test]
    fn three_sphere_generator() {
        let s = FiniteComplex::boundary_of_4_simplex();
        let mut c = Cochain::zero(&s, 3).unwrap();
        c.values[2] = 1;
        let g = GerbeClass::from_cocycle(&s, c).unwrap();
        assert_eq!(g.c1().len(), 1);
        assert_eq!(g.c1()[0].abs(), 1);
        assert!(!g.is_trivial(&s).unwrap());
        assert!(g.power(0).is_trivial(&s).unwrap());
    }
}
