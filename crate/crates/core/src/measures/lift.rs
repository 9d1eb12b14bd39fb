//! Homogeneous lifts `F = (F₀, F₁)` and their Green's functions
//! `g(v) = lim (1/dⁿ)·log‖Fⁿ(v)‖`.

use num_complex::Complex64;
use serde::Serialize;

use super::{MeasureError, Window};
use crate::map::RationalMap;

/// Starting metric on `ℂ²` for the Green iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum StartMetric {
    /// `max(|x|, |y|)`.
    Sup,
    /// `(|x|² + |y|²)^{1/2}`.
    FubiniStudy,
    /// `s·max(|x|, |y|)`.
    ScaledSup(f64),
}

impl StartMetric {
    fn norm(self, x: Complex64, y: Complex64) -> f64 {
        match self {
            StartMetric::Sup => x.norm().max(y.norm()),
            StartMetric::FubiniStudy => (x.norm_sqr() + y.norm_sqr()).sqrt(),
            StartMetric::ScaledSup(s) => s * x.norm().max(y.norm()),
        }
    }
}

/// A pair of degree-`d` forms; `f[i][j]` multiplies `X^j·Y^{d−j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    f: [Vec<Complex64>; 2],
    constant: f64,
}

fn solve_complex(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    let scale = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))?;
        if m[pivot][col].norm() <= 1e-13 * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let delta = factor * m[col][c];
                m[r][c] -= delta;
            }
            let delta = factor * rhs[col];
            rhs[r] -= delta;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

fn eval_form(cs: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let d = cs.len() - 1;
    let mut acc = cs[d];
    let mut ypow = y;
    for j in (0..d).rev() {
        acc = acc * x + cs[j] * ypow;
        ypow *= y;
    }
    acc
}

impl Lift {
    pub fn new(f0: Vec<Complex64>, f1: Vec<Complex64>) -> Result<Self, MeasureError> {
        if f0.len() != f1.len() || f0.len() < 2 {
            return Err(MeasureError::LiftShape(f0.len(), f1.len()));
        }
        let d = f0.len() - 1;
        // G·F₀ + H·F₁ = X^{2d−1} and = Y^{2d−1}
        let mut m = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; 2 * d];
        for (row_idx, row) in m.iter_mut().enumerate() {
            for j in 0..d {
                if row_idx >= j && row_idx - j <= d {
                    row[j] = f0[row_idx - j];
                    row[d + j] = f1[row_idx - j];
                }
            }
        }
        let mut lower: f64 = 0.0;
        for target in [2 * d - 1, 0] {
            let mut rhs = vec![Complex64::new(0.0, 0.0); 2 * d];
            rhs[target] = Complex64::new(1.0, 0.0);
            let sol = solve_complex(m.clone(), rhs).ok_or(MeasureError::DegenerateLift)?;
            lower = lower.max(sol.iter().map(|c| c.norm()).sum::<f64>().ln());
        }
        let upper = [&f0, &f1].iter().map(|cs| cs.iter().map(|c| c.norm()).sum::<f64>()).fold(0.0, f64::max).ln();
        Ok(Lift { f: [f0, f1], constant: upper.max(lower).max(0.0) })
    }

    /// The lift whose coefficients are those of the normalized map.
    pub fn from_map(map: &RationalMap) -> Result<Self, MeasureError> {
        let (num, den) = map.homogeneous_coeffs();
        Lift::new(num.iter().map(|c| c.to_complex()).collect(), den.iter().map(|c| c.to_complex()).collect())
    }

    /// `(c·F₀, c·F₁)`.
    pub fn scaled(&self, c: Complex64) -> Result<Self, MeasureError> {
        Lift::new(self.f[0].iter().map(|x| x * c).collect(), self.f[1].iter().map(|x| x * c).collect())
    }

    pub fn degree(&self) -> usize {
        self.f[0].len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>; 2] {
        &self.f
    }

    /// `C` with `|log‖F(v)‖ − d·log‖v‖| ≤ C` in the sup norm.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn apply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (eval_form(&self.f[0], x, y), eval_form(&self.f[1], x, y))
    }

    /// Bound on `|g − g_n|` after `n` steps from the sup metric.
    pub fn tail_bound(&self, n: usize) -> f64 {
        let d = self.degree() as f64;
        self.constant / (d.powi(n as i32) * (d - 1.0))
    }
}

/// `g_n(x, y) = log‖(x, y)‖ + Σ_{k<n} δ_k/d^{k+1}` where `δ_k` is the log
/// norm of `F` at the `k`-th renormalized iterate.
pub fn green_homogeneous(lift: &Lift, x: Complex64, y: Complex64, n: usize, metric: StartMetric) -> Result<f64, MeasureError> {
    if n == 0 {
        return Err(MeasureError::ZeroIterations);
    }
    let d = lift.degree() as f64;
    let s = metric.norm(x, y);
    let (mut x, mut y) = (x / s, y / s);
    let mut g = s.ln();
    let mut weight = 1.0;
    for _ in 0..n {
        weight /= d;
        let (fx, fy) = lift.apply(x, y);
        let s = metric.norm(fx, fy);
        if !(s > 0.0 && s.is_finite()) {
            return Err(MeasureError::DegenerateLift);
        }
        g += weight * s.ln();
        (x, y) = (fx / s, fy / s);
    }
    Ok(g)
}

/// The Green's function at `(z, 1)`, started from the sup metric.
pub fn green(lift: &Lift, z: Complex64, n: usize) -> Result<f64, MeasureError> {
    green_homogeneous(lift, z, Complex64::new(1.0, 0.0), n, StartMetric::Sup)
}

/// Green's function sampled at cell centers.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenField {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, row 0 at the bottom.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub metric: StartMetric,
    pub error_bound: f64,
}

impl GreenField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Pointwise difference `self − other` on equal grids.
    pub fn difference(&self, other: &GreenField) -> Result<Vec<f64>, MeasureError> {
        if (self.window, self.nx, self.ny) != (other.window, other.nx, other.ny) {
            return Err(MeasureError::ShapeMismatch(
                format!("{} {}x{}", self.window, self.nx, self.ny),
                format!("{} {}x{}", other.window, other.nx, other.ny),
            ));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }
}

pub fn green_field(lift: &Lift, window: Window, nx: usize, ny: usize, n: usize, metric: StartMetric) -> Result<GreenField, MeasureError> {
    let window = Window::new(window.x0, window.x1, window.y0, window.y1)?;
    if nx == 0 || ny == 0 {
        return Err(MeasureError::Resolution(nx, ny, 1));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            values.push(green_homogeneous(lift, window.cell_center(nx, ny, i, j), one, n, metric)?);
        }
    }
    Ok(GreenField { window, nx, ny, values, iterations: n, metric, error_bound: lift.tail_bound(n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadField;
    use crate::lattes::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> Lift {
        Lift::from_map(&RationalMap::power(QuadField::Rational, 2).unwrap()).unwrap()
    }

    #[test]
    fn power_map_closed_form() {
        let l = square();
        assert_eq!(l.constant(), 0.0);
        for n in [1, 5, 30] {
            assert!((green(&l, c(2.0, 0.0), n).unwrap() - 2f64.ln()).abs() < 1e-15);
            assert!(green(&l, Complex64::from_polar(1.0, 0.7), n).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn functional_equation_on_lattes_lift() {
        let l = Lift::from_map(&catalog("phi_1+i").unwrap()).unwrap();
        for k in 0..20 {
            let z = Complex64::from_polar(0.3 + 0.2 * k as f64, 1.3 * k as f64);
            let (fx, fy) = l.apply(z, c(1.0, 0.0));
            let g = green(&l, z, 30).unwrap();
            let gf = green_homogeneous(&l, fx, fy, 30, StartMetric::Sup).unwrap();
            assert!((gf / 2.0 - g).abs() < 1e-8);
        }
    }

    #[test]
    fn scaled_start_metric_differs_by_exact_power() {
        let l = Lift::from_map(&catalog("phi_2@E1").unwrap()).unwrap();
        let z = c(0.4, -1.7);
        let one = c(1.0, 0.0);
        for n in [3, 6] {
            let a = green_homogeneous(&l, z, one, n, StartMetric::Sup).unwrap();
            let b = green_homogeneous(&l, z, one, n, StartMetric::ScaledSup(5.0)).unwrap();
            assert!((b - a - 5f64.ln() / 4f64.powi(n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_lift_is_rejected() {
        // X² and XY share the zero (0 : 1)
        let err = Lift::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(err, Err(MeasureError::DegenerateLift));
        assert!(Lift::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn field_matches_closed_form() {
        let f = green_field(&square(), Window::square(2.0), 16, 16, 10, StartMetric::Sup).unwrap();
        for j in 0..16 {
            for i in 0..16 {
                let z = f.window.cell_center(16, 16, i, j);
                assert!((f.get(i, j) - z.norm().ln().max(0.0)).abs() < 1e-12);
            }
        }
    }
}
