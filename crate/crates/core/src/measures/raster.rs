//! Grayscale and color rasters in binary PGM (P5) / PPM (P6).

use std::io::{self, Write};

use super::{measure_from_green, GreenField, MeasureError};

/// What the pixels show.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterMode {
    /// The canonical measure (discrete Laplacian of the Green field);
    /// dark where the mass is.
    Density,
    /// The Green field itself, dark where it is small.
    Green,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first (image order), one byte per pixel.
    pub pixels: Vec<u8>,
    pub comments: Vec<String>,
}

impl Raster {
    pub fn write_pgm(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "P5")?;
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{} {}\n255", self.width, self.height)?;
        out.write_all(&self.pixels)
    }

    /// Color version: a blue-to-white ramp on the same intensities.
    pub fn write_ppm(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "P6")?;
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{} {}\n255", self.width, self.height)?;
        let rgb: Vec<u8> = self.pixels.iter().flat_map(|&v| [v, v, 96u8.saturating_add(v / 3 * 2).max(v)]).collect();
        out.write_all(&rgb)
    }
}

/// Renders a Green field. Row 0 of the field (bottom) becomes the last
/// image row.
pub fn julia_raster(field: &GreenField, mode: RasterMode, comments: Vec<String>) -> Result<Raster, MeasureError> {
    let (nx, ny) = (field.nx, field.ny);
    let values: Vec<f64> = match mode {
        RasterMode::Density => measure_from_green(field)?.mass,
        RasterMode::Green => field.values.iter().map(|g| g.abs()).collect(),
    };
    let max = values.iter().copied().fold(0.0, f64::max);
    let shade = |v: f64| -> u8 {
        let t = if max > 0.0 { v / max } else { 0.0 };
        let t = match mode {
            RasterMode::Density => 1.0 - t.sqrt(),
            RasterMode::Green => t.sqrt(),
        };
        (t * 255.0).round().clamp(0.0, 255.0) as u8
    };
    let mut pixels = Vec::with_capacity(nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            pixels.push(shade(values[j * nx + i]));
        }
    }
    Ok(Raster { width: nx, height: ny, pixels, comments })
}
