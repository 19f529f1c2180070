//! Finite cell complexes, integer cochains and cohomology.
//!
//! Gerbes enter only through their integer Chern data: a degree-3 cocycle and
//! its class in `H³(X, ℤ)`.

mod gerbe;
pub mod snf;

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use snf::SparseMatrix;

pub use gerbe::{FormalSum, GerbeClass};

/// Signed faces of one cell: `(index of the face among (k−1)-cells, incidence)`.
pub type Boundary = Vec<(usize, i64)>;

/// Grid data of a cubical torus `Tᵈ` with `n` vertices per axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub dim: usize,
    pub n: usize,
}

impl TorusGrid {
    /// Number of base points `n^d`.
    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Direction sets of size `k` as sorted 0-based axis lists, lexicographic.
    pub fn directions(&self, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for a in start..d {
                cur.push(a);
                rec(a + 1, d, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, self.dim, k, &mut Vec::new(), &mut out);
        out
    }

    pub fn point_index(&self, p: &[usize]) -> usize {
        p.iter().fold(0, |acc, &x| acc * self.n + x % self.n)
    }

    pub fn point(&self, mut idx: usize) -> Vec<usize> {
        let mut p = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            p[a] = idx % self.n;
            idx /= self.n;
        }
        p
    }

    /// Index of the cell spanned by `dirs` at base point `p`.
    pub fn cell_index(&self, dirs: &[usize], p: &[usize]) -> Result<usize> {
        let k = dirs.len();
        let pos = self
            .directions(k)
            .iter()
            .position(|d| d == dirs)
            .ok_or_else(|| invalid(format!("{dirs:?} is not a sorted direction set")))?;
        Ok(pos * self.points() + self.point_index(p))
    }
}

/// A finite regular cell complex with incidence numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct FiniteComplex {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<String>,
    /// `cells[k][i]` is the boundary of the `i`-th `k`-cell.
    pub cells: Vec<Vec<Boundary>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusGrid>,
    #[serde(skip)]
    fingerprint: u64,
}

#[derive(Deserialize)]
struct RawComplex {
    name: String,
    #[serde(default)]
    vertices: Vec<String>,
    cells: Vec<Vec<Boundary>>,
    #[serde(default)]
    torus: Option<TorusGrid>,
}

impl TryFrom<RawComplex> for FiniteComplex {
    type Error = Error;
    fn try_from(r: RawComplex) -> Result<Self> {
        let mut c = FiniteComplex::new(r.name, r.cells)?;
        c.vertices = r.vertices;
        c.torus = r.torus;
        Ok(c)
    }
}

/// Integer values on the `k`-cells of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<i64>,
}

impl Cochain {
    pub fn zero(complex: &FiniteComplex, degree: usize) -> Result<Self> {
        Ok(Cochain { degree, values: vec![0; complex.count(degree)?] })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value on a chain given as `(cell, multiplicity)` pairs.
    pub fn evaluate(&self, chain: &[(usize, i64)]) -> i64 {
        chain.iter().map(|&(c, m)| m * self.values[c]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FiniteComplex {
    /// Builds a complex and checks `∂∘∂ = 0`.
    pub fn new(name: impl Into<String>, cells: Vec<Vec<Boundary>>) -> Result<Self> {
        let name = name.into();
        if cells.is_empty() {
            return Err(invalid("complex has no cells"));
        }
        if cells[0].iter().any(|b| !b.is_empty()) {
            return Err(invalid("vertices must have empty boundary"));
        }
        for k in 1..cells.len() {
            for (i, b) in cells[k].iter().enumerate() {
                if let Some(&(f, _)) = b.iter().find(|(f, _)| *f >= cells[k - 1].len()) {
                    return Err(invalid(format!("{k}-cell {i} names missing face {f}")));
                }
            }
        }
        for k in 2..cells.len() {
            for (i, b) in cells[k].iter().enumerate() {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(f, s) in b {
                    for &(g, t) in &cells[k - 1][f] {
                        *acc.entry(g).or_insert(0) += s * t;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(invalid(format!("boundary of boundary of {k}-cell {i} is not zero")));
                }
            }
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        cells.hash(&mut h);
        Ok(FiniteComplex { name, vertices: Vec::new(), cells, torus: None, fingerprint: h.finish() })
    }

    /// Closure of the given simplices, each oriented by increasing vertex order.
    pub fn from_simplices(name: impl Into<String>, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) || s.is_empty() {
                return Err(invalid(format!("degenerate simplex {s:?}")));
            }
            let k = s.len() - 1;
            for mask in 1u64..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= k {
                    by_dim.resize(k + 1, BTreeSet::new());
                }
                by_dim[d].insert(face);
            }
        }
        let lists: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut cells = Vec::new();
        for (k, list) in lists.iter().enumerate() {
            let mut level = Vec::new();
            for s in list {
                let mut b = Vec::new();
                if k > 0 {
                    for i in 0..s.len() {
                        let mut face = s.clone();
                        face.remove(i);
                        let f = lists[k - 1].binary_search(&face).expect("closure contains faces");
                        b.push((f, if i % 2 == 0 { 1 } else { -1 }));
                    }
                }
                level.push(b);
            }
            cells.push(level);
        }
        let mut c = Self::new(name, cells)?;
        c.vertices = lists[0].iter().map(|v| v[0].to_string()).collect();
        Ok(c)
    }

    /// The unit interval: two vertices and one edge.
    pub fn interval() -> Self {
        Self::from_simplices("interval", &[vec![0, 1]]).expect("valid")
    }

    /// The boundary of the 4-simplex, a simplicial 3-sphere.
    pub fn boundary_of_4_simplex() -> Self {
        let faces: Vec<Vec<usize>> = (0..5).map(|skip| (0..5).filter(|&v| v != skip).collect()).collect();
        Self::from_simplices("boundary-4-simplex", &faces).expect("valid")
    }

    /// Cubical `Tᵈ` with `n ≥ 2` vertices per axis.
    pub fn cubical_torus(dim: usize, n: usize) -> Result<Self> {
        if n < 2 || dim == 0 || dim > 10 {
            return Err(invalid(format!("cubical torus needs dim in 1..=10 and n >= 2, got ({dim}, {n})")));
        }
        let grid = TorusGrid { dim, n };
        let pts = grid.points();
        let mut cells = Vec::new();
        for k in 0..=dim {
            let mut level = Vec::new();
            for dirs in grid.directions(k) {
                for pi in 0..pts {
                    let p = grid.point(pi);
                    let mut b = Vec::new();
                    for (i, &a) in dirs.iter().enumerate() {
                        let mut face_dirs = dirs.clone();
                        face_dirs.remove(i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        let mut q = p.clone();
                        q[a] += 1;
                        b.push((grid.cell_index(&face_dirs, &q)?, sign));
                        b.push((grid.cell_index(&face_dirs, &p)?, -sign));
                    }
                    level.push(b);
                }
            }
            cells.push(level);
        }
        let mut c = Self::new(format!("cubical-T{dim}-n{n}"), cells)?;
        c.torus = Some(grid);
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn count(&self, k: usize) -> Result<usize> {
        self.cells.get(k).map(Vec::len).ok_or_else(|| invalid(format!("no cells of degree {k}")))
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `δ_k : C^k → C^{k+1}` with rows indexed by `(k+1)`-cells.
    pub fn coboundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        if k >= self.dim() {
            return Err(invalid(format!("coboundary out of range: degree {k} in a {}-complex", self.dim())));
        }
        Ok(SparseMatrix::new(self.cells[k].len(), self.cells[k + 1].clone()))
    }

    /// `(δc)(σ) = Σ_{τ ∈ ∂σ} [σ:τ] c(τ)`.
    pub fn coboundary(&self, c: &Cochain) -> Result<Cochain> {
        if c.values.len() != self.count(c.degree)? {
            return Err(invalid("cochain does not match the complex"));
        }
        let m = self.coboundary_matrix(c.degree)?;
        Ok(Cochain { degree: c.degree + 1, values: m.apply(&c.values) })
    }

    /// `H^k` from the invariant factors of `δ_{k−1}` and the rank of `δ_k`.
    pub fn cohomology(&self, k: usize) -> Result<CohomologyGroup> {
        let n = self.count(k)?;
        let rank_out = if k < self.dim() { snf::rank(&self.coboundary_matrix(k)?) } else { 0 };
        let incoming = if k > 0 { snf::invariant_factors(&self.coboundary_matrix(k - 1)?) } else { Vec::new() };
        let torsion = incoming
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| u64::try_from(d).map_err(|e| Error::Internal(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(CohomologyGroup { degree: k, rank: n - rank_out - incoming.len(), torsion })
    }

    /// True iff `c = δb` for some integer `(k−1)`-cochain `b`.
    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool> {
        if c.degree == 0 {
            return Ok(c.is_zero());
        }
        let a = self.coboundary_matrix(c.degree - 1)?;
        let fa = snf::invariant_factors(&a);
        let fb = snf::invariant_factors(&a.with_column(&c.values));
        let prod = |f: &[BigInt]| f.iter().product::<BigInt>();
        Ok(fa.len() == fb.len() && prod(&fa) == prod(&fb))
    }

    /// Integral `k`-cycles whose evaluations detect the free part of `H^k`.
    ///
    /// On a cubical torus these are the coordinate `k`-subtori through the
    /// origin, one per direction set, in lexicographic order.
    pub fn test_cycles(&self, k: usize) -> Result<Vec<Vec<(usize, i64)>>> {
        self.count(k)?;
        if let Some(g) = &self.torus {
            let mut out = Vec::new();
            for dirs in g.directions(k) {
                let mut chain = Vec::new();
                for pi in 0..g.points() {
                    let p = g.point(pi);
                    if (0..g.dim).all(|a| dirs.contains(&a) || p[a] == 0) {
                        chain.push((g.cell_index(&dirs, &p)?, 1));
                    }
                }
                out.push(chain);
            }
            return Ok(out);
        }
        self.generic_cycles(k)
    }

    fn generic_cycles(&self, k: usize) -> Result<Vec<Vec<(usize, i64)>>> {
        use crate::exterior::Rational;
        use crate::linalg::RatMatrix;
        use num_integer::Integer;
        use num_traits::{ToPrimitive, Zero};

        let n = self.count(k)?;
        if n > 600 {
            return Err(invalid(format!("generic cycle search limited to 600 cells, degree {k} has {n}")));
        }
        let q = |x: i64| Rational::from_integer(x.into());
        // ∂_k as a (k−1)-cells × k-cells matrix.
        let boundary = if k == 0 {
            RatMatrix::zeros(1, n)
        } else {
            let mut m = RatMatrix::zeros(self.cells[k - 1].len(), n);
            for (j, b) in self.cells[k].iter().enumerate() {
                for &(f, s) in b {
                    m[(f, j)] += q(s);
                }
            }
            m
        };
        let mut span: Vec<Vec<Rational>> = Vec::new();
        if k < self.dim() {
            for b in &self.cells[k + 1] {
                let mut v = vec![Rational::zero(); n];
                for &(f, s) in b {
                    v[f] += q(s);
                }
                span.push(v);
            }
        }
        let mut rank = RatMatrix::from_columns(n, &span).rank();
        let mut out = Vec::new();
        for z in boundary.kernel() {
            let mut trial = span.clone();
            trial.push(z.clone());
            let r = RatMatrix::from_columns(n, &trial).rank();
            if r == rank {
                continue;
            }
            rank = r;
            span = trial;
            let den = z.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = z.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let chain = ints
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| Ok((i, (x / &g).to_i64().ok_or_else(|| Error::Internal("cycle coefficient overflow".into()))?)))
                .collect::<Result<Vec<_>>>()?;
            out.push(chain);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn interval_coboundary() {
        let x = FiniteComplex::interval();
        let c = Cochain { degree: 0, values: vec![3, 5] };
        assert_eq!(x.coboundary(&c).unwrap().values, vec![2]);
        let top = Cochain { degree: 1, values: vec![1] };
        assert!(matches!(x.coboundary(&top), Err(Error::InvalidArgument(_))));
        assert_eq!(x.cohomology(0).unwrap().rank, 1);
        assert_eq!(x.cohomology(1).unwrap().rank, 0);
    }

    #[test]
    fn three_sphere() {
        let s = FiniteComplex::boundary_of_4_simplex();
        assert_eq!(s.dim(), 3);
        let ranks: Vec<usize> = (0..=3).map(|k| s.cohomology(k).unwrap().rank).collect();
        assert_eq!(ranks, vec![1, 0, 0, 1]);
        assert!(s.cohomology(3).unwrap().torsion.is_empty());
        assert_eq!(s.test_cycles(3).unwrap().len(), 1);
    }

    #[test]
    fn components() {
        let two = FiniteComplex::from_simplices("two", &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(two.cohomology(0).unwrap().rank, 2);
    }

    #[test]
    fn projective_plane_torsion() {
        // The 6-vertex triangulation of RP² (half the icosahedron).
        let faces = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]];
        let f: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
        let rp2 = FiniteComplex::from_simplices("rp2", &f).unwrap();
        let h2 = rp2.cohomology(2).unwrap();
        assert_eq!((h2.rank, h2.torsion.clone()), (0, vec![2]));
        assert_eq!(rp2.cohomology(1).unwrap().rank, 0);
    }

    #[test]
    fn small_tori() {
        let t2 = FiniteComplex::cubical_torus(2, 3).unwrap();
        let ranks: Vec<usize> = (0..=2).map(|k| t2.cohomology(k).unwrap().rank).collect();
        assert_eq!(ranks, vec![1, 2, 1]);
        let t3 = FiniteComplex::cubical_torus(3, 2).unwrap();
        let ranks: Vec<usize> = (0..=3).map(|k| t3.cohomology(k).unwrap().rank).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
        assert!(FiniteComplex::cubical_torus(3, 1).is_err());
    }

    #[test]
    fn broken_complex_rejected() {
        let cells = vec![vec![vec![], vec![]], vec![vec![(0, 1), (1, -1)]], vec![vec![(0, 1)]]];
        assert!(FiniteComplex::new("bad", cells).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = FiniteComplex::boundary_of_4_simplex();
        let text = serde_json::to_string(&s).unwrap();
        let back: FiniteComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back.cells, s.cells);
        assert_eq!(back.fingerprint(), s.fingerprint());
    }

    fn shipped() -> Vec<FiniteComplex> {
        vec![
            FiniteComplex::interval(),
            FiniteComplex::boundary_of_4_simplex(),
            FiniteComplex::cubical_torus(3, 2).unwrap(),
            FiniteComplex::cubical_torus(4, 3).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn delta_squared_vanishes(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for x in shipped() {
                for k in 0..x.dim().saturating_sub(1) {
                    let c = Cochain { degree: k, values: (0..x.count(k).unwrap()).map(|_| rng.gen_range(-5..=5)).collect() };
                    let dd = x.coboundary(&x.coboundary(&c).unwrap()).unwrap();
                    prop_assert!(dd.is_zero());
                }
            }
        }
    }
}
