//! Probability masses on a rectangular grid of cells.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::json;

use super::{GreenField, MeasureError, Window};

#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, row 0 at the bottom; sums to 1.
    pub mass: Vec<f64>,
    /// Share of the underlying measure that falls inside the window, when
    /// known.
    pub window_fraction: Option<f64>,
}

impl DensityGrid {
    /// Normalizes nonnegative cell weights to unit mass.
    pub fn from_weights(window: Window, nx: usize, ny: usize, weights: Vec<f64>) -> Result<Self, MeasureError> {
        assert_eq!(weights.len(), nx * ny, "one weight per cell");
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(MeasureError::DegenerateMeasure);
        }
        Ok(DensityGrid { window, nx, ny, mass: weights.into_iter().map(|w| w / total).collect(), window_fraction: None })
    }

    /// Histogram of the points that fall in the window, normalized by
    /// their number.
    pub fn from_samples<'a>(points: impl IntoIterator<Item = &'a Complex64>, window: Window, nx: usize, ny: usize) -> Result<Self, MeasureError> {
        let mut counts = vec![0.0; nx * ny];
        let mut total = 0usize;
        let mut inside = 0usize;
        for &z in points {
            total += 1;
            if let Some((i, j)) = window.cell_of(nx, ny, z) {
                counts[j * nx + i] += 1.0;
                inside += 1;
            }
        }
        if inside == 0 {
            return Err(MeasureError::EmptyHistogram);
        }
        let mut grid = DensityGrid::from_weights(window, nx, ny, counts)?;
        grid.window_fraction = Some(inside as f64 / total as f64);
        Ok(grid)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mass[j * self.nx + i]
    }

    pub fn cell_area(&self) -> f64 {
        self.window.width() * self.window.height() / (self.nx * self.ny) as f64
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Merges `factor × factor` blocks of cells.
    pub fn coarsen(&self, factor: usize) -> Result<DensityGrid, MeasureError> {
        if factor == 0 || self.nx % factor != 0 || self.ny % factor != 0 {
            return Err(MeasureError::ShapeMismatch(format!("{}x{}", self.nx, self.ny), format!("blocks of {factor}")));
        }
        let (nx, ny) = (self.nx / factor, self.ny / factor);
        let mut mass = vec![0.0; nx * ny];
        for j in 0..self.ny {
            for i in 0..self.nx {
                mass[(j / factor) * nx + i / factor] += self.get(i, j);
            }
        }
        Ok(DensityGrid { window: self.window, nx, ny, mass, window_fraction: self.window_fraction })
    }

    /// Total mass of the cells whose centers satisfy `pred`.
    pub fn mass_where(&self, pred: impl Fn(Complex64) -> bool) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.ny {
            for i in 0..self.nx {
                if pred(self.window.cell_center(self.nx, self.ny, i, j)) {
                    sum += self.get(i, j);
                }
            }
        }
        sum
    }

    /// Row-major CSV, one grid row per line, bottom row first.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.mass.chunks(self.nx) {
            let line: Vec<String> = row.iter().map(|m| format!("{m:.12e}")).collect();
            writeln!(out, "{}", line.join(",")).expect("writing to a String");
        }
        out
    }

    /// Metadata sidecar for [`to_csv`](Self::to_csv).
    pub fn metadata_json(&self, extra: serde_json::Value) -> serde_json::Value {
        json!({
            "schema": 1,
            "window": [self.window.x0, self.window.x1, self.window.y0, self.window.y1],
            "resolution": [self.nx, self.ny],
            "order": "row-major, row 0 at y0",
            "total_mass": self.total(),
            "window_fraction": self.window_fraction,
            "extra": extra,
        })
    }

    fn check_shape(&self, other: &DensityGrid) -> Result<(), MeasureError> {
        if (self.window, self.nx, self.ny) != (other.window, other.nx, other.ny) {
            return Err(MeasureError::ShapeMismatch(
                format!("{} {}x{}", self.window, self.nx, self.ny),
                format!("{} {}x{}", other.window, other.nx, other.ny),
            ));
        }
        Ok(())
    }
}

/// `(1/2π)·Δg` by the five-point stencil, clamped at zero, normalized.
/// Boundary cells carry no mass.
pub fn measure_from_green(field: &GreenField) -> Result<DensityGrid, MeasureError> {
    let (nx, ny) = (field.nx, field.ny);
    if nx < 32 || ny < 32 {
        return Err(MeasureError::Resolution(nx, ny, 32));
    }
    let hx = field.window.width() / nx as f64;
    let hy = field.window.height() / ny as f64;
    let mut weights = vec![0.0; nx * ny];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let g = field.get(i, j);
            let lap = (field.get(i + 1, j) - 2.0 * g + field.get(i - 1, j)) / (hx * hx)
                + (field.get(i, j + 1) - 2.0 * g + field.get(i, j - 1)) / (hy * hy);
            weights[j * nx + i] = (lap * hx * hy / (2.0 * PI)).max(0.0);
        }
    }
    let raw: f64 = weights.iter().sum();
    if raw <= 1e-12 {
        return Err(MeasureError::DegenerateMeasure);
    }
    let mut grid = DensityGrid::from_weights(field.window, nx, ny, weights)?;
    // the unnormalized Laplacian mass is the share of μ inside the window
    grid.window_fraction = Some(raw);
    Ok(grid)
}

/// `½·Σ|a − b|`, in `[0, 1]` for probability grids.
pub fn compare_l1(a: &DensityGrid, b: &DensityGrid) -> Result<f64, MeasureError> {
    a.check_shape(b)?;
    Ok(0.5 * a.mass.iter().zip(&b.mass).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// Pearson correlation of the cell masses where `keep` is true.
pub fn correlation(a: &DensityGrid, b: &DensityGrid, keep: &[bool]) -> Result<f64, MeasureError> {
    a.check_shape(b)?;
    let pairs: Vec<(f64, f64)> = a.mass.iter().zip(&b.mass).zip(keep).filter(|(_, &k)| k).map(|((&x, &y), _)| (x, y)).collect();
    if pairs.len() < 2 {
        return Err(MeasureError::TooFewCells);
    }
    let n = pairs.len() as f64;
    let (mx, my) = (pairs.iter().map(|p| p.0).sum::<f64>() / n, pairs.iter().map(|p| p.1).sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    Ok(sxy / (sxx * syy).sqrt())
}
