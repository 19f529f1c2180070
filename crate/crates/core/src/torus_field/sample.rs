//! Point evaluation of Fourier forms on regular grids.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FourierForm;
use crate::error::{invalid, Result};
use crate::exterior::{Blade, CForm, DIM};

/// Regular grid `x_j = origin_j + m / points_j`, `0 ≤ m < points_j`.
///
/// An axis with one point is held fixed at its origin, so slices are grids too.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: [f64; DIM],
    pub points: [usize; DIM],
}

impl GridSpec {
    pub fn new(origin: [f64; DIM], points: [usize; DIM]) -> Result<Self> {
        if points.contains(&0) {
            return Err(invalid("every grid axis needs at least one point"));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(invalid("grid origin must be finite"));
        }
        Ok(GridSpec { origin, points })
    }

    /// Full periodic grid with `n` points on every axis.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new([0.0; DIM], [n; DIM])
    }

    /// `n × n` slice in axes `(a, b)` (1-based), other coordinates at `origin`.
    pub fn plane(a: usize, b: usize, n: usize, origin: [f64; DIM]) -> Result<Self> {
        if a == b || !(1..=DIM).contains(&a) || !(1..=DIM).contains(&b) {
            return Err(invalid(format!("plane axes ({a}, {b}) must be distinct values in 1..=7")));
        }
        let mut points = [1; DIM];
        points[a - 1] = n;
        points[b - 1] = n;
        Self::new(origin, points)
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, mut idx: usize) -> [f64; DIM] {
        let mut x = self.origin;
        for j in (0..DIM).rev() {
            let n = self.points[j];
            x[j] += (idx % n) as f64 / n as f64;
            idx /= n;
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: [f64; DIM],
    pub value: CForm,
}

fn evaluate(f: &FourierForm, x: &[f64; DIM]) -> CForm {
    let mut out = CForm::zero();
    for (k, c) in &f.modes {
        let phase: f64 = k.iter().zip(x).map(|(&kj, xj)| f64::from(kj) * xj).sum();
        let e = Complex64::from_polar(1.0, 2.0 * PI * phase);
        for (b, v) in c.terms() {
            out.add_term(b, v * e);
        }
    }
    out
}

/// Values of `f` at every grid point, in row-major order with axis 7 fastest.
pub fn sample(f: &FourierForm, grid: &GridSpec) -> Vec<Sample> {
    (0..grid.len())
        .map(|i| {
            let point = grid.point(i);
            let value = evaluate(f, &point);
            Sample { point, value }
        })
        .collect()
}

/// CSV with columns `x1..x7, blade, re, im`; one row per point and basis blade of `degree`.
pub fn to_csv(samples: &[Sample], degree: usize) -> String {
    let mut s = String::from("x1,x2,x3,x4,x5,x6,x7,blade,re,im\n");
    for smp in samples {
        for &b in Blade::of_grade(degree) {
            let v = smp.value.coeff(b);
            for x in smp.point {
                let _ = write!(s, "{x},");
            }
            let _ = writeln!(s, "{},{:e},{:e}", b.label(), v.re, v.im);
        }
    }
    s
}

/// Grid average of `|f|²` against the mode sum `Σ |c_k|²`.
#[derive(Clone, Debug, Serialize)]
pub struct ParsevalReport {
    pub grid_mean: f64,
    pub mode_sum: f64,
    pub relative_error: f64,
}

/// Requires a full periodic grid with more than `2K` points per axis carrying modes.
pub fn parseval_check(f: &FourierForm, grid: &GridSpec) -> Result<ParsevalReport> {
    for (j, &n) in grid.points.iter().enumerate() {
        let kmax = f.modes.keys().map(|k| k[j].unsigned_abs() as usize).max().unwrap_or(0);
        if n <= 2 * kmax && kmax > 0 {
            return Err(invalid(format!("axis {} has {n} points, aliasing modes up to {kmax}", j + 1)));
        }
    }
    let samples = sample(f, grid);
    let grid_mean = samples.iter().map(|s| s.value.norm_sqr()).sum::<f64>() / samples.len() as f64;
    let mode_sum: f64 = f.modes.values().map(CForm::norm_sqr).sum();
    let relative_error = (grid_mean - mode_sum).abs() / mode_sum.max(f64::MIN_POSITIVE);
    Ok(ParsevalReport { grid_mean, mode_sum, relative_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::torus_field::tests::random_on;

    #[test]
    fn constant_is_constant() {
        let c = Form::e(&[1, 2, 3]).unwrap().to_complex().scale(&Complex64::new(2.0, -1.0));
        let f = FourierForm::constant(&c, 3).unwrap();
        let g = GridSpec::new([0.1; DIM], [2, 1, 3, 1, 1, 2, 1]).unwrap();
        for s in sample(&f, &g) {
            assert_eq!(s.value, c);
        }
    }

    #[test]
    fn single_mode_exact() {
        let mut k = [0; DIM];
        k[2] = 1;
        let f = FourierForm::mode(k, &Form::e(&[4]).unwrap().to_complex(), 2).unwrap();
        let g = GridSpec::plane(3, 5, 4, [0.0; DIM]).unwrap();
        let out = sample(&f, &g);
        assert_eq!(out.len(), 16);
        for s in out {
            let want = Complex64::from_polar(1.0, 2.0 * PI * s.point[2]);
            assert!((s.value.coeff(Blade::from_sorted(&[4]).unwrap()) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn parseval_on_aligned_grid() {
        let waves: Vec<_> = [[1, 0, -1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0, 0]].to_vec();
        let f = random_on(&waves, 7, 2, 1);
        let g = GridSpec::new([0.0; DIM], [3, 3, 3, 1, 1, 1, 3]).unwrap();
        let r = parseval_check(&f, &g).unwrap();
        assert!(r.relative_error < 1e-10, "{r:?}");
        let coarse = GridSpec::new([0.0; DIM], [2, 3, 3, 1, 1, 1, 3]).unwrap();
        assert!(parseval_check(&f, &coarse).is_err());
    }

    #[test]
    fn csv_layout() {
        let f = FourierForm::constant(&Form::e(&[1, 2]).unwrap().to_complex(), 1).unwrap();
        let g = GridSpec::plane(1, 2, 2, [0.0; DIM]).unwrap();
        let csv = to_csv(&sample(&f, &g), 2);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 4 * 21);
        assert_eq!(lines[0], "x1,x2,x3,x4,x5,x6,x7,blade,re,im");
        assert!(lines[1].starts_with("0,0,0,0,0,0,0,"));
    }
}
