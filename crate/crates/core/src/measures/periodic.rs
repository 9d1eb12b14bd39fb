//! Points of period dividing `n` and their multipliers.

use num_complex::Complex64;

use super::roots::poly_roots;
use super::{MeasureError, SpherePoint};
use crate::map::RationalMap;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicPoint {
    pub point: SpherePoint,
    /// `(φⁿ)′` at the point, in a chart containing it.
    pub multiplier: Complex64,
}

impl PeriodicPoint {
    pub fn is_repelling(&self) -> bool {
        self.multiplier.norm() > 1.0
    }
}

fn eval(cs: &[Complex64], z: Complex64) -> Complex64 {
    cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn deriv(cs: &[Complex64]) -> Vec<Complex64> {
    cs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// `(N/D)′(z)`.
fn quotient_derivative(n: &[Complex64], d: &[Complex64], z: Complex64) -> Complex64 {
    let (nv, dv) = (eval(n, z), eval(d, z));
    (eval(&deriv(n), z) * dv - nv * eval(&deriv(d), z)) / (dv * dv)
}

/// Coefficients of `X^{deg}·p(1/X)`.
fn reversed(p: &Poly, deg: usize) -> Vec<Complex64> {
    let mut cs = p.to_complex();
    cs.resize(deg + 1, Complex64::new(0.0, 0.0));
    cs.reverse();
    cs
}

/// All fixed points of `φⁿ` (so period dividing `n`), with multiplicity,
/// and their multipliers. Needs `deg(φ)ⁿ ≤ 200`.
pub fn periodic_points(map: &RationalMap, n: u32) -> Result<Vec<PeriodicPoint>, MeasureError> {
    let total = (map.degree() as u128).checked_pow(n).unwrap_or(u128::MAX);
    if total > 200 || n == 0 {
        return Err(MeasureError::TooManyPeriodicPoints(total));
    }
    let r = map.iterate(n)?;
    let deg = r.degree();
    let fixed = r.num() - &(&Poly::z(r.field()) * r.den());
    let (num, den) = (r.num().to_complex(), r.den().to_complex());
    // In w = 1/z the map reads S(w) = rev(D)(w) / rev(N)(w).
    let (rn, rd) = (reversed(r.num(), deg), reversed(r.den(), deg));
    let mut out = Vec::new();
    for z in poly_roots(&fixed.to_complex())? {
        let multiplier = if z.norm() <= 1.0 { quotient_derivative(&num, &den, z) } else { quotient_derivative(&rd, &rn, z.inv()) };
        out.push(PeriodicPoint { point: SpherePoint::Finite(z), multiplier });
    }
    // deg(N − zD) < deg + 1 means ∞ is fixed, with the missing multiplicity
    let missing = deg + 1 - fixed.degree().unwrap_or(0);
    for _ in 0..missing {
        let multiplier = quotient_derivative(&rd, &rn, Complex64::new(0.0, 0.0));
        out.push(PeriodicPoint { point: SpherePoint::Infinity, multiplier });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadField;
    use crate::lattes::catalog;

    #[test]
    fn fixed_points_of_square() {
        let pts = periodic_points(&RationalMap::power(QuadField::Rational, 2).unwrap(), 1).unwrap();
        assert_eq!(pts.len(), 3);
        let inf = pts.iter().find(|p| p.point == SpherePoint::Infinity).unwrap();
        assert!(inf.multiplier.norm() < 1e-12);
        let rep: Vec<_> = pts.iter().filter(|p| p.is_repelling()).collect();
        assert_eq!(rep.len(), 1);
        assert!((rep[0].multiplier - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn period_two_of_square_are_cube_roots_of_unity() {
        let pts = periodic_points(&RationalMap::power(QuadField::Rational, 2).unwrap(), 2).unwrap();
        let rep: Vec<_> = pts.iter().filter(|p| p.is_repelling()).collect();
        assert_eq!(rep.len(), 3);
        for p in rep {
            let SpherePoint::Finite(z) = p.point else { panic!("finite") };
            assert!((z.powu(3) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn lattes_period_two_points_repel() {
        let pts = periodic_points(&catalog("phi_2@E1").unwrap(), 2).unwrap();
        assert_eq!(pts.len(), 17);
        assert!(pts.iter().all(PeriodicPoint::is_repelling));
    }

    #[test]
    fn too_many_points() {
        assert!(periodic_points(&catalog("phi_2@E1").unwrap(), 4).is_err());
    }
}
