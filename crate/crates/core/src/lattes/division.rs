//! Division polynomials for `y² = G(x)` and the x-coordinate of `[n]`.

use super::{EllipticCurveCM, LattesError};
use crate::arith::QuadElem;
use crate::map::RationalMap;
use crate::poly::Poly;

/// `poly · y^odd` with `y² = G`.
#[derive(Clone, Debug)]
struct YPoly {
    poly: Poly,
    odd: bool,
}

impl YPoly {
    fn mul(&self, rhs: &YPoly, g: &Poly) -> YPoly {
        let mut poly = &self.poly * &rhs.poly;
        if self.odd && rhs.odd {
            poly = &poly * g;
        }
        YPoly { poly, odd: self.odd ^ rhs.odd }
    }

    fn sub(&self, rhs: &YPoly) -> YPoly {
        debug_assert_eq!(self.odd, rhs.odd);
        YPoly { poly: &self.poly - &rhs.poly, odd: self.odd }
    }

    fn cube(&self, g: &Poly) -> YPoly {
        self.mul(self, g).mul(self, g)
    }

    fn square(&self, g: &Poly) -> YPoly {
        self.mul(self, g)
    }
}

fn division_polynomials(curve: &EllipticCurveCM, upto: usize) -> Vec<YPoly> {
    let field = curve.field();
    let g = curve.g();
    let c = |k: i64| QuadElem::from_int(field, k);
    let (a2, a4, a6) = (g.coeff(2), g.coeff(1), g.coeff(0));
    let b2 = &c(4) * &a2;
    let b4 = &c(2) * &a4;
    let b6 = &c(4) * &a6;
    let b8 = &(&c(4) * &(&a2 * &a6)) - &(&a4 * &a4);
    let p = |cs: Vec<QuadElem>| Poly::new(field, cs).expect("same field");

    let psi3 = p(vec![b8.clone(), &c(3) * &b6, &c(3) * &b4, b2.clone(), c(3)]);
    let psi4_rest = p(vec![
        &(&b4 * &b8) - &(&b6 * &b6),
        &(&b2 * &b8) - &(&b4 * &b6),
        &c(10) * &b8,
        &c(10) * &b6,
        &c(5) * &b4,
        b2.clone(),
        c(2),
    ]);
    let two_y = YPoly { poly: Poly::constant(c(2)), odd: true };
    let mut psi = vec![
        YPoly { poly: Poly::zero(field), odd: false },
        YPoly { poly: Poly::one(field), odd: false },
        two_y.clone(),
        YPoly { poly: psi3, odd: false },
        YPoly { poly: psi4_rest.scale(&c(2)), odd: true },
    ];
    let half = c(2).inv().expect("nonzero");
    for k in 5..=upto {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let a = psi[m + 2].mul(&psi[m].cube(g), g);
            let b = psi[m - 1].mul(&psi[m + 1].cube(g), g);
            a.sub(&b)
        } else {
            let a = psi[m + 2].mul(&psi[m - 1].square(g), g);
            let b = psi[m - 2].mul(&psi[m + 1].square(g), g);
            let t = psi[m].mul(&a.sub(&b), g);
            // divide by ψ₂ = 2y: t has odd y-parity exactly when ψ_m does not
            let (poly, odd) = if t.odd { (t.poly.scale(&half), false) } else { (t.poly.exact_div(g).expect("y² | t").scale(&half), true) };
            YPoly { poly, odd }
        };
        psi.push(next);
    }
    psi
}

/// The x-coordinate of multiplication by `n ≥ 1`:
/// `x([n]P) = x − ψ_{n−1}·ψ_{n+1} / ψ_n²`, a map of degree `n²`.
pub fn lattes_multiply(curve: &EllipticCurveCM, n: u32) -> Result<RationalMap, LattesError> {
    let field = curve.field();
    if n == 0 {
        return Err(LattesError::NoMapForLambda("0".into()));
    }
    if n == 1 {
        return Ok(RationalMap::identity(field));
    }
    let n = n as usize;
    let g = curve.g();
    let psi = division_polynomials(curve, n + 1);
    let a = psi[n - 1].mul(&psi[n + 1], g);
    let b = psi[n].square(g);
    debug_assert!(!a.odd && !b.odd);
    let num = &(&Poly::z(field) * &b.poly) - &a.poly;
    Ok(RationalMap::normalize(num, b.poly)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadField;
    use crate::lattes::lattes_double;

    #[test]
    fn degrees_are_squares() {
        for curve in [EllipticCurveCM::e1(), EllipticCurveCM::e2()] {
            for n in 1..=5u32 {
                assert_eq!(lattes_multiply(&curve, n).unwrap().degree(), (n * n) as usize);
            }
        }
    }

    #[test]
    fn two_is_doubling() {
        for curve in [EllipticCurveCM::e1(), EllipticCurveCM::e2()] {
            assert!(lattes_multiply(&curve, 2).unwrap().equals(&lattes_double(&curve)).unwrap());
        }
    }

    #[test]
    fn multiplication_composes() {
        let c = EllipticCurveCM::e1();
        let m2 = lattes_multiply(&c, 2).unwrap();
        let m3 = lattes_multiply(&c, 3).unwrap();
        let m6 = lattes_multiply(&c, 6).unwrap();
        assert!(m2.compose(&m3).unwrap().equals(&m6).unwrap());
        assert!(m3.commutes_with(&m2).unwrap());
        let m4 = lattes_multiply(&c, 4).unwrap();
        assert!(m2.iterate(2).unwrap().equals(&m4).unwrap());
    }

    #[test]
    fn triple_on_e2() {
        // (z⁹ − 96z⁶ + 48z³ + 64) / (9z²(z³ + 4)²)
        let f = QuadField::Eisenstein;
        let num = Poly::from_ints(f, &[64, 0, 0, 48, 0, 0, -96, 0, 0, 1]);
        let den = Poly::from_ints(f, &[0, 0, 144, 0, 0, 72, 0, 0, 9]);
        let expected = RationalMap::normalize(num, den).unwrap();
        assert!(lattes_multiply(&EllipticCurveCM::e2(), 3).unwrap().equals(&expected).unwrap());
    }
}
