//! Closed oriented 4-manifolds given by Betti numbers and an intersection form.

use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exterior::Rational;
use crate::linalg::RatMatrix;

const CATALOG: &str = include_str!("../../data/manifolds.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawManifold")]
pub struct FourManifold {
    pub name: String,
    pub betti: [u64; 5],
    pub intersection: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawManifold {
    name: String,
    betti: [u64; 5],
    intersection: Vec<Vec<i64>>,
}

impl TryFrom<RawManifold> for FourManifold {
    type Error = Error;
    fn try_from(r: RawManifold) -> Result<Self> {
        FourManifold::new(r.name, r.betti, r.intersection)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trichotomy {
    Positive,
    Zero,
    Negative,
}

#[derive(Clone, Debug, Serialize)]
pub struct Pairing {
    /// `6τ − 2χ`.
    pub value: i64,
    pub class: Trichotomy,
    pub statement: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingRow {
    pub name: String,
    pub tau: i64,
    pub chi: i64,
    pub pairing: i64,
    pub class: Trichotomy,
    pub notes: Vec<String>,
}

fn check_symmetric(q: &[Vec<i64>]) -> Result<()> {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return Err(invalid("intersection matrix is not square"));
    }
    for i in 0..n {
        for j in 0..i {
            if q[i][j] != q[j][i] {
                return Err(invalid(format!("intersection matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Sylvester inertia of a symmetric integer matrix by exact congruence reduction.
pub fn intersection_inertia(q: &[Vec<i64>]) -> Result<Inertia> {
    check_symmetric(q)?;
    let n = q.len();
    let mut a: Vec<Vec<Rational>> =
        q.iter().map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let mut inertia = Inertia { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Row/column k += row/column j makes the pivot 2·a[k][j].
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            } else {
                inertia.zero += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in a.iter_mut().skip(k) {
                let v = &f * &r[k];
                r[i] -= v;
            }
        }
    }
    Ok(inertia)
}

impl FourManifold {
    /// Validates Poincaré duality, symmetry and unimodularity.
    pub fn new(name: impl Into<String>, betti: [u64; 5], intersection: Vec<Vec<i64>>) -> Result<Self> {
        let name = name.into();
        if betti[0] != betti[4] || betti[1] != betti[3] {
            return Err(invalid(format!("{name}: Betti numbers {betti:?} violate Poincaré duality")));
        }
        if intersection.len() as u64 != betti[2] {
            return Err(invalid(format!("{name}: intersection form has size {} but b2 = {}", intersection.len(), betti[2])));
        }
        check_symmetric(&intersection)?;
        let m = Self { name, betti, intersection };
        let det = m.determinant();
        if det.abs() != 1 {
            return Err(invalid(format!("{}: intersection form has determinant {det}, not ±1", m.name)));
        }
        Ok(m)
    }

    pub fn determinant(&self) -> i64 {
        let n = self.intersection.len();
        if n == 0 {
            return 1;
        }
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| (0..n).map(|i| Rational::from_integer(self.intersection[i][j].into())).collect())
            .collect();
        let d = RatMatrix::from_columns(n, &cols).determinant();
        i64::try_from(d.to_integer()).unwrap_or(i64::MAX)
    }

    pub fn inertia(&self) -> Result<Inertia> {
        intersection_inertia(&self.intersection)
    }

    /// `τ = n₊ − n₋` of the intersection form.
    pub fn signature(&self) -> Result<i64> {
        Ok(self.inertia()?.signature())
    }

    /// `χ = Σ (−1)^k b_k`.
    pub fn euler_char(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    fn looks_like_torus(&self, tau: i64) -> bool {
        self.betti == [1, 4, 6, 4, 1] && tau == 0
    }

    /// `⟨p₁(X) ∪ α, [X]⟩ = 6τ − 2χ` for a coassociative `N` in class `α` with `N ≅ self`.
    pub fn pairing(&self) -> Result<Pairing> {
        let tau = self.signature()?;
        let chi = self.euler_char();
        let value = 6 * tau - 2 * chi;
        let (class, statement) = match value.signum() {
            1 => (Trichotomy::Positive, "tau > chi/3"),
            0 => (Trichotomy::Zero, "tau = chi/3"),
            _ => (Trichotomy::Negative, "tau < chi/3"),
        };
        let mut notes = Vec::new();
        if class == Trichotomy::Zero {
            notes.push("compatible with a flat ambient (p1(X) = 0), e.g. inside T^7".to_string());
            if self.looks_like_torus(tau) {
                notes.push(
                    "a coassociative torus must represent a class alpha with p1(X) cup alpha = 0; \
                     so if b3(X) = 1 (alpha a multiple of [phi], where p1(X) cup [phi] != 0) no coassociative torus exists"
                        .to_string(),
                );
            }
        }
        if class == Trichotomy::Negative {
            notes.push(
                "alpha pairs negatively with p1(X), whereas p1(X) cup [phi] > 0 on a compact nonflat G2-manifold; \
                 no associative submanifold of a compact irreducible G2-manifold represents p1(X)"
                    .to_string(),
            );
        }
        Ok(Pairing { value, class, statement: statement.to_string(), notes })
    }

    pub fn pairing_row(&self) -> Result<PairingRow> {
        let p = self.pairing()?;
        Ok(PairingRow {
            name: self.name.clone(),
            tau: self.signature()?,
            chi: self.euler_char(),
            pairing: p.value,
            class: p.class,
            notes: p.notes,
        })
    }
}

/// The shipped catalog: T4, S4, CP2, CP2bar, S2xS2, K3.
pub fn builtin_catalog() -> Vec<FourManifold> {
    serde_json::from_str(CATALOG).expect("shipped manifold catalog is valid")
}

/// Reads a JSON array of `{"name", "betti", "intersection"}` objects.
pub fn load_catalog(path: &Path) -> Result<Vec<FourManifold>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn by_name(name: &str) -> FourManifold {
        builtin_catalog().into_iter().find(|m| m.name == name).unwrap()
    }

    #[test]
    fn hyperbolic_block() {
        assert_eq!(intersection_inertia(&[vec![0, 1], vec![1, 0]]).unwrap().signature(), 0);
    }

    #[test]
    fn catalog_values() {
        let t4 = by_name("T4");
        assert_eq!((t4.signature().unwrap(), t4.euler_char()), (0, 0));
        let p = t4.pairing().unwrap();
        assert_eq!((p.value, p.class), (0, Trichotomy::Zero));
        assert_eq!(p.notes.len(), 2);

        let k3 = by_name("K3");
        assert_eq!(k3.intersection.len(), 22);
        assert_eq!((k3.signature().unwrap(), k3.euler_char()), (-16, 24));
        assert_eq!(k3.pairing().unwrap().value, -144);
        assert_eq!(k3.pairing().unwrap().class, Trichotomy::Negative);

        let s4 = by_name("S4");
        assert_eq!(s4.pairing().unwrap().value, -4);
        assert_eq!(by_name("CP2").signature().unwrap(), 1);
        assert_eq!(by_name("CP2bar").signature().unwrap(), -1);
        assert_eq!(by_name("S2xS2").pairing().unwrap().value, -8);
    }

    #[test]
    fn pairing_formula_over_catalog() {
        for m in builtin_catalog() {
            let p = m.pairing().unwrap();
            assert_eq!(p.value, 6 * m.signature().unwrap() - 2 * m.euler_char(), "{}", m.name);
            if 3 * m.signature().unwrap() == m.euler_char() {
                assert_eq!(p.class, Trichotomy::Zero);
            }
        }
    }

    #[test]
    fn validation_errors() {
        assert!(FourManifold::new("bad", [1, 0, 2, 0, 1], vec![vec![0, 1], vec![2, 0]]).is_err());
        assert!(FourManifold::new("bad", [1, 1, 0, 0, 1], vec![]).is_err());
        assert!(FourManifold::new("bad", [1, 0, 1, 0, 1], vec![vec![2]]).is_err());
        assert!(FourManifold::new("bad", [1, 0, 2, 0, 1], vec![vec![1]]).is_err());
        assert!(matches!(intersection_inertia(&[vec![0, 1], vec![2, 0]]), Err(Error::InvalidArgument(_))));
        let raw = r#"{"name":"x","betti":[1,0,1,0,1],"intersection":[[3]]}"#;
        assert!(serde_json::from_str::<FourManifold>(raw).is_err());
    }

    #[test]
    fn inertia_handles_zero_diagonal_and_degenerate() {
        let q = vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]];
        assert_eq!(intersection_inertia(&q).unwrap(), Inertia { positive: 1, negative: 1, zero: 1 });
    }

    fn congruent(q: &[Vec<i64>], ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
        // Q ↦ EᵀQE for elementary E = I + c·e_{ij}, i ≠ j.
        let n = q.len();
        let mut m = q.to_vec();
        for &(i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            for r in 0..n {
                let v = m[r][i];
                m[r][j] += c * v;
            }
            for col in 0..n {
                let v = m[i][col];
                m[j][col] += c * v;
            }
        }
        m
    }

    proptest! {
        #[test]
        fn signature_is_congruence_invariant(ops in proptest::collection::vec((0usize..22, 0usize..22, -2i64..=2), 0..12)) {
            for m in builtin_catalog().iter().filter(|m| !m.intersection.is_empty()) {
                let moved = congruent(&m.intersection, &ops);
                prop_assert_eq!(intersection_inertia(&moved).unwrap(), m.inertia().unwrap());
                let det = FourManifold { intersection: moved, ..m.clone() }.determinant();
                prop_assert_eq!(det, m.determinant());
            }
        }
    }
}
