//! Invariant factors of sparse integer matrices.
//!
//! Unit pivots are eliminated sparsely first; whatever is left is reduced
//! densely over big integers.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix given by rows of `(column, value)` entries.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize, entries: Vec<Vec<(usize, i64)>>) -> Self {
        SparseMatrix { rows: entries.len(), cols, entries }
    }

    /// Appends `v` as an extra column.
    pub fn with_column(&self, v: &[i64]) -> SparseMatrix {
        assert_eq!(v.len(), self.rows);
        let c = self.cols;
        let entries = self
            .entries
            .iter()
            .zip(v)
            .map(|(row, &x)| {
                let mut r = row.clone();
                if x != 0 {
                    r.push((c, x));
                }
                r
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: c + 1, entries }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.entries.iter().map(|row| row.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …`, all positive.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let (units, rest) = eliminate_units(m);
    let mut diag = dense_diagonal(rest);
    diag.extend(std::iter::repeat_n(BigInt::one(), units));
    normalize_chain(diag)
}

pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

/// Sparse phase: returns the number of unit pivots and the leftover dense block.
fn eliminate_units(m: &SparseMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut rows: Vec<HashMap<usize, i64>> = m
        .entries
        .iter()
        .map(|r| {
            let mut h = HashMap::new();
            for &(c, v) in r {
                *h.entry(c).or_insert(0) += v;
            }
            h.retain(|_, v| *v != 0);
            h
        })
        .collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }
    let mut units = 0;
    let mut overflow = false;
    'sweep: loop {
        let mut progressed = false;
        for c in 0..m.cols {
            let pivot = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs() == 1)
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(p) = pivot else { continue };
            let prow = std::mem::take(&mut rows[p]);
            let pv = prow[&c];
            for &cc in prow.keys() {
                col_rows[cc].remove(&p);
            }
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for r in others {
                let f = rows[r][&c] * pv;
                for (&cc, &v) in &prow {
                    let Some(delta) = f.checked_mul(v) else {
                        overflow = true;
                        continue;
                    };
                    let e = rows[r].entry(cc).or_insert(0);
                    match e.checked_sub(delta) {
                        Some(x) => *e = x,
                        None => overflow = true,
                    }
                    if *e == 0 {
                        rows[r].remove(&cc);
                        col_rows[cc].remove(&r);
                    } else {
                        col_rows[cc].insert(r);
                    }
                }
            }
            debug_assert!(col_rows[c].is_empty());
            units += 1;
            progressed = true;
            if overflow {
                break 'sweep;
            }
        }
        if !progressed {
            break;
        }
    }
    assert!(!overflow, "entry overflow during sparse elimination");
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    let index: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut v = vec![BigInt::zero(); live_cols.len()];
            for (c, x) in r {
                v[index[&c]] = BigInt::from(x);
            }
            v
        })
        .collect();
    (units, dense)
}

/// Diagonalizes a dense integer matrix by unimodular row and column operations.
fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < n_rows.min(n_cols) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..n_rows {
            for j in t..n_cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..n_rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..n_cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n_cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // Move the smallest remaining entry of row t / column t to the pivot.
            let mut best = (t, t);
            for i in t..n_rows {
                if !a[i][t].is_zero() && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs()) {
                    best = (i, t);
                }
            }
            for j in t..n_cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Turns any diagonal into the divisibility chain with the same cokernel.
fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.retain(|x| !x.is_zero());
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
