//! Naive and canonical heights of points of ℙ¹ over ℚ, ℚ(i) and ℚ(√−3).
//!
//! With primitive integral coordinates `(x, y)` the naive height is
//! `½·log max(N(x), N(y))`; over ℚ this is `log max(|x|, |y|)`.

mod bezout;
mod canonical;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::ln_bigint;
use crate::arith::{ArithError, BigRational, IntegralElement, QuadElem, QuadField};
use crate::lattes::{lattes_double, EllipticCurveCM};
use crate::map::{MapError, ProjPoint};

pub use canonical::{canonical_height, CanonicalHeight, HeightOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeightError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("canonical heights need a map of degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("target error must be positive and finite, got {0}")]
    InvalidTarget(f64),
    #[error("{needed} iterations needed for the requested accuracy, budget is {budget}; partial value {partial} ± {error_bound}")]
    BudgetExceeded { needed: usize, budget: usize, partial: f64, error_bound: f64 },
    #[error("per-place decomposition is implemented over Q only, point lives in {0}")]
    NotRational(QuadField),
}

/// A height together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightValue {
    pub value: f64,
    /// Total number of map applications (0 for naive heights).
    pub iterations: usize,
    /// Of those, how many were carried out with exact coordinates.
    pub exact_iterations: usize,
    /// `|value − true value| ≤ error_bound`.
    pub error_bound: f64,
}

impl HeightValue {
    fn exact(value: f64) -> Self {
        HeightValue { value, iterations: 0, exact_iterations: 0, error_bound: 0.0 }
    }
}

/// A place of the base field.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Archimedean { local_degree: u32 },
    Finite { prime: IntegralElement, local_degree: u32 },
}

impl Place {
    pub fn local_degree(&self) -> u32 {
        match self {
            Place::Archimedean { local_degree } | Place::Finite { local_degree, .. } => *local_degree,
        }
    }
}

/// `½·log max(N(x), N(y))` for a primitive integral representative.
pub(crate) fn primitive_height(x: &IntegralElement, y: &IntegralElement) -> f64 {
    ln_bigint(&x.norm().max(y.norm())) / 2.0
}

pub fn naive_height(p: &ProjPoint) -> HeightValue {
    let (x, y) = p.primitive();
    HeightValue::exact(primitive_height(&x, &y))
}

fn valuation(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Primes dividing `n` by trial division below 10⁶; a remaining cofactor
/// is returned as if it were prime.
fn trial_primes(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= n && p < limit {
        if (&n % &p).is_zero() {
            while (&n % &p).is_zero() {
                n /= &p;
            }
            out.push(p.clone());
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Local terms `N_v·log max(|x|_v, |y|_v)` of a point over ℚ, computed
/// from the coordinates as given (no gcd reduction).
pub fn local_terms(p: &ProjPoint) -> Result<Vec<(Place, f64)>, HeightError> {
    if p.field() != QuadField::Rational || !p.x().is_rational() || !p.y().is_rational() {
        return Err(HeightError::NotRational(p.field()));
    }
    let (x, y): (&BigRational, &BigRational) = (p.x().re_part(), p.y().re_part());
    let arch = x.abs().max(y.abs());
    let arch_ln = ln_bigint(arch.numer()) - ln_bigint(arch.denom());
    let mut terms = vec![(Place::Archimedean { local_degree: 1 }, arch_ln)];
    let relevant = x.numer().gcd(y.numer()) * x.denom() * y.denom();
    for prime in trial_primes(&relevant) {
        let v = |r: &BigRational| -> Option<i64> {
            let num = valuation(r.numer(), &prime)? as i64;
            Some(num - valuation(r.denom(), &prime).expect("nonzero denominator") as i64)
        };
        let min_v = match (v(x), v(y)) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("projective point has a nonzero coordinate"),
        };
        if min_v != 0 {
            let ln_p = prime.to_f64().map(f64::ln).unwrap_or_else(|| ln_bigint(&prime));
            let prime_elem = IntegralElement::from_int(QuadField::Rational, prime);
            terms.push((Place::Finite { prime: prime_elem, local_degree: 1 }, -(min_v as f64) * ln_p));
        }
    }
    Ok(terms)
}

/// The naive height over ℚ as an explicit sum over places.
pub fn naive_height_by_places(p: &ProjPoint) -> Result<HeightValue, HeightError> {
    let terms = local_terms(p)?;
    Ok(HeightValue::exact(terms.iter().map(|(place, t)| place.local_degree() as f64 * t).sum()))
}

/// The Néron–Tate height of a point of `curve` with x-coordinate `x`,
/// as the canonical height of `x` under the doubling map.
pub fn neron_tate(curve: &EllipticCurveCM, x: &QuadElem, target_error: f64) -> Result<HeightValue, HeightError> {
    canonical_height(&lattes_double(curve), &ProjPoint::affine(x.clone()), target_error)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_coefficient;

    fn point(field: QuadField, x: &str, y: &str) -> ProjPoint {
        ProjPoint::new(parse_coefficient(x, field).unwrap(), parse_coefficient(y, field).unwrap()).unwrap()
    }

    #[test]
    fn naive_examples() {
        let r = QuadField::Rational;
        assert_eq!(naive_height(&point(r, "1", "1")).value, 0.0);
        assert!((naive_height(&point(r, "2", "1")).value - 2f64.ln()).abs() < 1e-15);
        assert!((naive_height(&point(r, "6", "4")).value - 3f64.ln()).abs() < 1e-15);
        assert!((naive_height(&point(r, "1/3", "1/2")).value - 3f64.ln()).abs() < 1e-15);
        let g = QuadField::Gaussian;
        assert!((naive_height(&point(g, "1+w", "1")).value - 0.5 * 2f64.ln()).abs() < 1e-15);
        // 2 = −i(1+i)², so (2 : 1+i) reduces to (1−i : 1)... up to units
        assert!((naive_height(&point(g, "2", "1+w")).value - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn by_places_examples() {
        let r = QuadField::Rational;
        let h = |x: &str, y: &str| naive_height_by_places(&point(r, x, y)).unwrap().value;
        assert!((h("6", "4") - 3f64.ln()).abs() < 1e-12);
        assert_eq!(h("1", "0"), 0.0);
        assert!((h("10", "1") - 10f64.ln()).abs() < 1e-12);
        assert!((h("0", "12") - 0.0).abs() < 1e-12);
        assert!((h("9/4", "15/8") - 6f64.ln()).abs() < 1e-12);
        let terms = local_terms(&point(r, "6", "4")).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(matches!(terms[1].0, Place::Finite { .. }));
    }

    #[test]
    fn by_places_rejects_gaussian_points() {
        assert!(naive_height_by_places(&point(QuadField::Gaussian, "w", "1")).is_err());
    }

    #[test]
    fn trial_division() {
        let ps = trial_primes(&BigInt::from(2 * 2 * 3 * 7 * 1_000_003i64));
        assert_eq!(ps, vec![BigInt::from(2), BigInt::from(3), BigInt::from(7), BigInt::from(1_000_003)]);
    }

    #[test]
    fn torsion_points_have_height_zero() {
        let e1 = EllipticCurveCM::e1();
        assert!(neron_tate(&e1, &QuadElem::zero(QuadField::Gaussian), 1e-9).unwrap().value.abs() < 1e-9);
        let e2 = EllipticCurveCM::e2();
        let v = neron_tate(&e2, &QuadElem::from_int(QuadField::Eisenstein, -1), 1e-9).unwrap();
        assert!(v.value.abs() <= v.error_bound + 1e-12);
    }
}
