//! Archimedean numerics: Green's functions of homogeneous lifts, the
//! measures they induce, preimage sampling, the Lattès density, periodic
//! points and rasters.

mod density;
mod grid;
mod lift;
mod periodic;
mod raster;
pub mod roots;
mod sample;

use std::fmt;
use std::str::FromStr;

pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use density::{lattes_density, singular_mask, total_mass};
pub use grid::{compare_l1, correlation, measure_from_green, DensityGrid};
pub use lift::{green, green_field, green_homogeneous, GreenField, Lift, StartMetric};
pub use periodic::{periodic_points, PeriodicPoint};
pub use raster::{julia_raster, Raster, RasterMode};
pub use sample::{ks_uniform_angles, preimage_sample, ComplexSampleSet};

use crate::map::MapError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("root finder did not converge (residual {residual:e} at {at:?})")]
    RootsDidNotConverge { residual: f64, at: (f64, f64) },
    #[error("lift is degenerate: F0 and F1 share a zero on the projective line")]
    DegenerateLift,
    #[error("lift coefficient lists must have equal length at least 2 (got {0} and {1})")]
    LiftShape(usize, usize),
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("empty window {0}")]
    EmptyWindow(Window),
    #[error("resolution {0}x{1} is below the minimum {2}")]
    Resolution(usize, usize, usize),
    #[error("discrete Laplacian vanishes on the window; nothing to normalize")]
    DegenerateMeasure,
    #[error("grids differ in shape: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error("seed point {0} is exceptional (its backward orbit collapses); choose a generic seed")]
    ExceptionalSeed(String),
    #[error("depth {depth} with degree {degree} gives too many samples (depth·ln(deg) must be ≤ 22)")]
    TooManySamples { depth: usize, degree: usize },
    #[error("degree^n = {0} exceeds the limit 200 for periodic points")]
    TooManyPeriodicPoints(u128),
    #[error("no samples fell inside the window")]
    EmptyHistogram,
    #[error("map must have degree at least 2 (got {0})")]
    DegreeTooSmall(usize),
    #[error("invalid window {0:?}: expected x0,x1,y0,y1")]
    WindowSyntax(String),
    #[error("fewer than two cells survive the mask")]
    TooFewCells,
}

/// An axis-parallel rectangle `[x0, x1] × [y0, y1]` of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, MeasureError> {
        let w = Window { x0, x1, y0, y1 };
        if !(x1 > x0 && y1 > y0 && [x0, x1, y0, y1].iter().all(|v| v.is_finite())) {
            return Err(MeasureError::EmptyWindow(w));
        }
        Ok(w)
    }

    /// `[−r, r]²`.
    pub fn square(r: f64) -> Self {
        Window { x0: -r, x1: r, y0: -r, y1: r }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Center of cell `(i, j)` on an `nx × ny` grid; row `j = 0` is the
    /// bottom edge.
    pub fn cell_center(&self, nx: usize, ny: usize, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.x0 + (i as f64 + 0.5) * self.width() / nx as f64,
            self.y0 + (j as f64 + 0.5) * self.height() / ny as f64,
        )
    }

    /// The cell containing `z`, if any.
    pub fn cell_of(&self, nx: usize, ny: usize, z: Complex64) -> Option<(usize, usize)> {
        let fx = (z.re - self.x0) / self.width();
        let fy = (z.im - self.y0) / self.height();
        if !(0.0..1.0).contains(&fx) || !(0.0..1.0).contains(&fy) {
            return None;
        }
        Some(((fx * nx as f64) as usize, (fy * ny as f64) as usize))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.x1, self.y0, self.y1)
    }
}

impl FromStr for Window {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match parts.as_deref() {
            Ok([x0, x1, y0, y1]) => Window::new(*x0, *x1, *y0, *y1),
            _ => Err(MeasureError::WindowSyntax(s.to_string())),
        }
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    /// Homogeneous coordinates `(z, 1)` or `(1, 0)`.
    pub fn homogeneous(self) -> (Complex64, Complex64) {
        match self {
            SpherePoint::Finite(z) => (z, Complex64::new(1.0, 0.0)),
            SpherePoint::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        }
    }

    /// Chordal distance, in `[0, 1]`.
    pub fn chordal(self, other: SpherePoint) -> f64 {
        let (a, b) = self.homogeneous();
        let (c, d) = other.homogeneous();
        (a * d - b * c).norm() / ((a.norm_sqr() + b.norm_sqr()).sqrt() * (c.norm_sqr() + d.norm_sqr()).sqrt())
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{},{}", z.re, z.im),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing_and_cells() {
        let w: Window = "-2,2,-1,1".parse().unwrap();
        assert_eq!(w, Window { x0: -2.0, x1: 2.0, y0: -1.0, y1: 1.0 });
        assert!("1,0,0,1".parse::<Window>().is_err());
        assert!("1,2,3".parse::<Window>().is_err());
        let c = w.cell_center(4, 2, 0, 0);
        assert_eq!(c, Complex64::new(-1.5, -0.5));
        assert_eq!(w.cell_of(4, 2, c), Some((0, 0)));
        assert_eq!(w.cell_of(4, 2, Complex64::new(3.0, 0.0)), None);
    }

    #[test]
    fn chordal_distance() {
        let inf = SpherePoint::Infinity;
        let zero = SpherePoint::Finite(Complex64::new(0.0, 0.0));
        assert!((inf.chordal(zero) - 1.0).abs() < 1e-15);
        assert_eq!(inf.chordal(inf), 0.0);
    }
}
