//! The Lattès density `dA / (Im τ · |G(z)|)` on a grid.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::roots::poly_roots;
use super::{DensityGrid, MeasureError, Window};
use crate::lattes::EllipticCurveCM;

const GAUSS3: [(f64, f64); 3] = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];

fn gauss_rect(f: &dyn Fn(f64, f64) -> f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let (cx, hx) = ((x0 + x1) / 2.0, (x1 - x0) / 2.0);
    let (cy, hy) = ((y0 + y1) / 2.0, (y1 - y0) / 2.0);
    let mut s = 0.0;
    for (u, wu) in GAUSS3 {
        for (v, wv) in GAUSS3 {
            s += wu * wv * f(cx + hx * u, cy + hy * v);
        }
    }
    s * hx * hy
}

fn adaptive_rect(f: &dyn Fn(f64, f64) -> f64, r: [f64; 4], whole: f64, tol: f64, depth: u32) -> f64 {
    let [x0, x1, y0, y1] = r;
    let (xm, ym) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let quads = [[x0, xm, y0, ym], [xm, x1, y0, ym], [x0, xm, ym, y1], [xm, x1, ym, y1]];
    let parts: Vec<f64> = quads.iter().map(|q| gauss_rect(f, q[0], q[1], q[2], q[3])).collect();
    let refined: f64 = parts.iter().sum();
    if depth == 0 || (refined - whole).abs() <= tol {
        return refined;
    }
    quads.iter().zip(parts).map(|(q, p)| adaptive_rect(f, *q, p, tol, depth - 1)).sum()
}

/// `∫∫_r f` by adaptive 3×3 Gauss–Legendre cubature; `tol` is the
/// acceptance threshold per cell.
fn integrate(f: &dyn Fn(f64, f64) -> f64, r: [f64; 4], tol: f64) -> f64 {
    adaptive_rect(f, r, gauss_rect(f, r[0], r[1], r[2], r[3]), tol, 36)
}

fn g_complex(curve: &EllipticCurveCM) -> Vec<Complex64> {
    curve.g().to_complex()
}

fn eval(cs: &[Complex64], z: Complex64) -> Complex64 {
    cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn roots_of_g(curve: &EllipticCurveCM) -> Vec<Complex64> {
    poly_roots(&g_complex(curve)).expect("G is a nonzero cubic")
}

/// `∫_ℂ dA / (Im τ·|G|)`: the disk `|z| ≤ R` in polar coordinates plus
/// its complement in the chart `w = 1/z`, where the integrand becomes
/// `1/|w³G(1/w)|` in polar coordinates and is smooth.
pub fn total_mass(curve: &EllipticCurveCM) -> f64 {
    let g = g_complex(curve);
    let radius = 2.0 * roots_of_g(curve).iter().map(|r| r.norm()).fold(0.0, f64::max) + 1.0;
    let inner = |r: f64, t: f64| r / eval(&g, Complex64::from_polar(r, t)).norm();
    let reversed: Vec<Complex64> = g.iter().rev().copied().collect();
    let outer = |rho: f64, t: f64| 1.0 / eval(&reversed, Complex64::from_polar(rho, t)).norm();
    let a = integrate(&inner, [0.0, radius, 0.0, TAU], 1e-10);
    let b = integrate(&outer, [0.0, 1.0 / radius, 0.0, TAU], 1e-12);
    (a + b) / curve.tau_im()
}

/// Keep-flags excluding cells whose centers lie within `margin` cell
/// widths of a root of `G`.
pub fn singular_mask(curve: &EllipticCurveCM, window: Window, nx: usize, ny: usize, margin: f64) -> Vec<bool> {
    let roots = roots_of_g(curve);
    let h = (window.width() / nx as f64).max(window.height() / ny as f64);
    let mut keep = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let c = window.cell_center(nx, ny, i, j);
            keep.push(roots.iter().all(|r| (c - r).norm() > margin * h));
        }
    }
    keep
}

/// Cell masses of the Lattès measure of `curve` on the window, normalized
/// to 1; `window_fraction` records the share of the total mass inside.
/// Cells containing a root of `G` are integrated adaptively, the others by
/// 4×4 midpoint subsampling.
pub fn lattes_density(curve: &EllipticCurveCM, window: Window, nx: usize, ny: usize) -> Result<DensityGrid, MeasureError> {
    let window = Window::new(window.x0, window.x1, window.y0, window.y1)?;
    if nx == 0 || ny == 0 {
        return Err(MeasureError::Resolution(nx, ny, 1));
    }
    let g = g_complex(curve);
    let roots = roots_of_g(curve);
    let inv_tau = 1.0 / curve.tau_im();
    let f = |x: f64, y: f64| inv_tau / eval(&g, Complex64::new(x, y)).norm();
    let (hx, hy) = (window.width() / nx as f64, window.height() / ny as f64);
    let mut weights = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let x0 = window.x0 + i as f64 * hx;
            let y0 = window.y0 + j as f64 * hy;
            let rect = [x0, x0 + hx, y0, y0 + hy];
            let singular = roots.iter().any(|r| r.re >= x0 - 1e-12 && r.re <= x0 + hx + 1e-12 && r.im >= y0 - 1e-12 && r.im <= y0 + hy + 1e-12);
            let w = if singular {
                integrate(&f, rect, 1e-9 * hx * hy)
            } else {
                let mut s = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        s += f(x0 + (a as f64 + 0.5) * hx / 4.0, y0 + (b as f64 + 0.5) * hy / 4.0);
                    }
                }
                s * hx * hy / 16.0
            };
            weights.push(w);
        }
    }
    let inside: f64 = weights.iter().sum();
    let mut grid = DensityGrid::from_weights(window, nx, ny, weights)?;
    grid.window_fraction = Some(inside / total_mass(curve));
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadElem;

    #[test]
    fn quadrature_of_a_point_singularity() {
        // ∫∫_{[−1,1]²} 1/|z| = 8·ln(1 + √2)
        let f = |x: f64, y: f64| 1.0 / (x * x + y * y).sqrt();
        let v = integrate(&f, [-1.0, 1.0, -1.0, 1.0], 1e-10);
        assert!((v - 8.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-7, "{v}");
    }

    #[test]
    fn total_mass_of_e1() {
        // ∫ dA/|z³ + z| = Γ(1/4)⁴ / (4π)
        let gamma_quarter = 3.625_609_908_221_908_f64;
        let expected = gamma_quarter.powi(4) / (4.0 * std::f64::consts::PI);
        assert!((total_mass(&EllipticCurveCM::e1()) - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn e1_density_is_odd_symmetric() {
        let d = lattes_density(&EllipticCurveCM::e1(), Window::square(3.0), 32, 32).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        for j in 0..32 {
            for i in 0..32 {
                assert!((d.get(i, j) - d.get(31 - i, 31 - j)).abs() < 1e-9);
            }
        }
        let frac = d.window_fraction.unwrap();
        assert!(frac > 0.5 && frac < 1.0);
    }

    #[test]
    fn e2_density_is_rotation_invariant() {
        let e2 = EllipticCurveCM::e2();
        let g = g_complex(&e2);
        let rho2 = (QuadElem::rho() * QuadElem::rho()).to_complex();
        for k in 0..50 {
            let z = Complex64::from_polar(0.2 + 0.05 * k as f64, 0.37 * k as f64);
            assert!((eval(&g, z).norm() - eval(&g, rho2 * z).norm()).abs() < 1e-12 * eval(&g, z).norm().max(1.0));
        }
    }

    #[test]
    fn mask_excludes_root_neighbourhoods() {
        let keep = singular_mask(&EllipticCurveCM::e1(), Window::square(3.0), 64, 64, 1.5);
        assert!(keep.iter().filter(|k| !**k).count() >= 12);
        assert!(keep.iter().filter(|k| **k).count() > 4000);
    }
}
