//! Integral lifts and the Bezout identities `G·F₀ + H·F₁ = D·X^{2α−1}`
//! (and the same with `Y`), which bound how far `h(φP) − α·h(P)` can stray.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{integral_gcd, BigRational, IntegralElement, QuadElem};
use crate::map::RationalMap;

/// Solves `m·x = rhs` over the field; `None` if `m` is singular.
pub(crate) fn solve(mut m: Vec<Vec<QuadElem>>, mut rhs: Vec<QuadElem>) -> Option<Vec<QuadElem>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].inv().ok()?;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    Some((0..n).map(|i| &rhs[i] * &m[i][i].inv().expect("nonzero pivot")).collect())
}

/// The lift `(F₀, F₁)` scaled to integral, content-free coefficients.
/// `f[i][j]` is the coefficient of `X^j·Y^{α−j}` in `F_i`.
#[derive(Clone, Debug)]
pub(crate) struct IntegralLift {
    pub f: [Vec<IntegralElement>; 2],
    pub alpha: usize,
}

impl IntegralLift {
    pub fn new(map: &RationalMap) -> Self {
        let (num, den) = map.homogeneous_coeffs();
        let m = num.iter().chain(&den).fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
        let m = BigRational::from_integer(m);
        let to_int = |cs: &[QuadElem]| -> Vec<IntegralElement> {
            cs.iter().map(|c| IntegralElement::try_from(&c.scale(&m)).expect("cleared denominators")).collect()
        };
        let (mut f0, mut f1) = (to_int(&num), to_int(&den));
        let content = f0
            .iter()
            .chain(&f1)
            .filter(|c| !c.is_zero())
            .fold(None::<IntegralElement>, |acc, c| {
                Some(match acc {
                    None => c.clone(),
                    Some(g) => integral_gcd(&g, c).expect("nonzero"),
                })
            })
            .expect("map has a nonzero coefficient");
        if !content.is_unit() {
            for c in f0.iter_mut().chain(f1.iter_mut()) {
                *c = c.exact_div(&content).expect("content divides");
            }
        }
        IntegralLift { f: [f0, f1], alpha: map.degree() }
    }

    pub fn eval(&self, i: usize, x: &IntegralElement, y: &IntegralElement) -> IntegralElement {
        // Horner in x with y-powers folded in: Σ c_j x^j y^{α−j}
        let coeffs = &self.f[i];
        let mut acc = coeffs[self.alpha].clone();
        let mut ypow = y.clone();
        for j in (0..self.alpha).rev() {
            acc = acc.mul(x).add(&coeffs[j].mul(&ypow));
            if j > 0 {
                ypow = ypow.mul(y);
            }
        }
        acc
    }

    pub fn complex(&self) -> [Vec<Complex64>; 2] {
        [self.f[0].iter().map(IntegralElement::to_complex).collect(), self.f[1].iter().map(IntegralElement::to_complex).collect()]
    }

    /// `log max_i Σ_j |F_i,j|`: an upper bound for `log max|F_i(x, y)|`
    /// when `max(|x|, |y|) = 1`.
    pub fn upper_constant(&self) -> f64 {
        self.complex().iter().map(|cs| cs.iter().map(|c| c.norm()).sum::<f64>()).fold(0.0, f64::max).ln()
    }
}

/// Integral Bezout data for a lift: `D` and, for each of `X`, `Y`, the
/// integral forms `G̃`, `H̃` with `G̃·F₀ + H̃·F₁ = D·X^{2α−1}` (resp. `Y`).
#[derive(Clone, Debug)]
pub(crate) struct Bezout {
    pub d: BigInt,
    pub lower_constant: f64,
}

impl Bezout {
    pub fn new(lift: &IntegralLift) -> Self {
        let a = lift.alpha;
        let field = lift.f[0][0].field();
        let f: Vec<Vec<QuadElem>> = lift.f.iter().map(|cs| cs.iter().map(IntegralElement::to_quad).collect()).collect();
        let zero = QuadElem::zero(field);
        let mut matrix = vec![vec![zero.clone(); 2 * a]; 2 * a];
        for (m, row) in matrix.iter_mut().enumerate() {
            for j in 0..a {
                if m >= j && m - j <= a {
                    row[j] = f[0][m - j].clone();
                    row[a + j] = f[1][m - j].clone();
                }
            }
        }
        let solutions: Vec<Vec<QuadElem>> = [2 * a - 1, 0]
            .into_iter()
            .map(|target| {
                let mut rhs = vec![zero.clone(); 2 * a];
                rhs[target] = QuadElem::one(field);
                solve(matrix.clone(), rhs).expect("resultant of a normalized map is nonzero")
            })
            .collect();
        let d = solutions.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
        let dr = BigRational::from_integer(d.clone());
        let lower_constant = solutions
            .iter()
            .map(|s| s.iter().map(|c| c.scale(&dr).to_complex().norm()).sum::<f64>())
            .fold(0.0, f64::max)
            .ln();
        debug_assert!(!d.is_zero());
        Bezout { d, lower_constant }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadField;
    use crate::lattes::catalog;

    #[test]
    fn power_map_has_trivial_constants() {
        let m = RationalMap::power(QuadField::Rational, 3).unwrap();
        let lift = IntegralLift::new(&m);
        let b = Bezout::new(&lift);
        assert_eq!(b.d, BigInt::one());
        assert_eq!(b.lower_constant, 0.0);
        assert_eq!(lift.upper_constant(), 0.0);
    }

    #[test]
    fn lift_is_integral_and_primitive() {
        let m = catalog("phi_2@E1").unwrap();
        let lift = IntegralLift::new(&m);
        // (z⁴ − 2z² + 1) / (4z³ + 4z) after clearing the monic 1/4
        let expected: Vec<i64> = vec![1, 0, -2, 0, 1];
        for (c, e) in lift.f[0].iter().zip(expected) {
            assert_eq!(c, &IntegralElement::from_int(QuadField::Gaussian, e));
        }
        assert_eq!(lift.f[1][1], IntegralElement::from_int(QuadField::Gaussian, 4));
    }

    #[test]
    fn bezout_identity_holds() {
        for name in ["phi_2@E1", "phi_1+2i", "phi_sqrt-3", "phi_eps"] {
            let m = catalog(name).unwrap();
            let lift = IntegralLift::new(&m);
            let b = Bezout::new(&lift);
            // D·X^{2α−1} lies in the ideal generated by F₀(x, 1), F₁(x, 1)
            // evaluated at a few integers: gcd of the values divides D.
            for x in -3i64..=3 {
                let xi = IntegralElement::from_int(m.field(), x);
                let one = IntegralElement::one(m.field());
                let g = integral_gcd(&lift.eval(0, &xi, &one), &lift.eval(1, &xi, &one)).unwrap();
                assert!(g.divides(&IntegralElement::from_int(m.field(), b.d.clone())), "{name} at {x}");
            }
        }
    }

    #[test]
    fn solve_small_system() {
        let f = QuadField::Gaussian;
        let q = |a: i64, b: i64| QuadElem::from_ints(f, a, b).unwrap();
        let m = vec![vec![q(0, 1), q(1, 0)], vec![q(2, 0), q(0, 0)]];
        let x = solve(m, vec![q(1, 1), q(4, 0)]).unwrap();
        assert_eq!(x, vec![q(2, 0), q(1, -1)]);
    }
}
