//! Preimage counts over the images of the 2-torsion points, and the
//! parity table predicting them from the multiplier.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{two_torsion_targets, EllipticCurveCM, LattesError};
use crate::arith::QuadElem;
use crate::map::{ProjPoint, RationalMap};

/// `(r₀, r₁, r₂, r₃)`: numbers of distinct preimages of the four 2-torsion
/// images.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    pub counts: [usize; 4],
    pub degree: usize,
}

impl RamificationProfile {
    /// The counts sorted in decreasing order; profiles are compared this
    /// way because the labelling of the finite 2-torsion images is not
    /// canonical.
    pub fn multiset(&self) -> [usize; 4] {
        let mut c = self.counts;
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }

    pub fn same_multiset(&self, other: &RamificationProfile) -> bool {
        self.multiset() == other.multiset()
    }

    /// `Σ (deg − r_j)`, which is `2·deg − 2` for a Lattès map.
    pub fn total_ramification(&self) -> usize {
        self.counts.iter().map(|r| self.degree - r).sum()
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.counts;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetRamification {
    pub target: ProjPoint,
    pub distinct: usize,
    /// Local degrees of the preimages, largest first.
    pub multiplicities: Vec<usize>,
}

/// Preimage structure of `map` over each 2-torsion image of `curve`.
pub fn ramification_detail(map: &RationalMap, curve: &EllipticCurveCM) -> Result<Vec<TargetRamification>, LattesError> {
    let field = curve.field();
    let map = map.in_field(field)?;
    two_torsion_targets(curve)?
        .into_iter()
        .map(|t| {
            let multiplicities = map.preimage_multiplicities(&t)?;
            Ok(TargetRamification { distinct: multiplicities.len(), target: t, multiplicities })
        })
        .collect()
}

/// Checks that every critical value of `map` is a 2-torsion image: the
/// ramification over the four targets must already account for all
/// `2·deg − 2` of it. This is necessary for a Lattès map of `curve`, not
/// sufficient (power maps pass it for `E₁`).
pub fn verify_lattes(map: &RationalMap, curve: &EllipticCurveCM) -> Result<(), LattesError> {
    let detail = ramification_detail(map, curve)?;
    let deg = map.degree();
    let found: usize = detail.iter().map(|t| deg - t.distinct).sum();
    let expected = 2 * deg - 2;
    if found == expected {
        Ok(())
    } else {
        Err(LattesError::NotLattes { found, expected })
    }
}

/// Distinct preimage counts over `∞` and the roots of `G` (in the order of
/// [`two_torsion_targets`]).
pub fn ramification_profile(map: &RationalMap, curve: &EllipticCurveCM) -> Result<RamificationProfile, LattesError> {
    verify_lattes(map, curve)?;
    let detail = ramification_detail(map, curve)?;
    let mut counts = [0; 4];
    for (c, t) in counts.iter_mut().zip(&detail) {
        *c = t.distinct;
    }
    Ok(RamificationProfile { counts, degree: map.degree() })
}

/// Multiplication by `lambda` on `curve`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier {
    lambda: QuadElem,
    curve: EllipticCurveCM,
}

impl Multiplier {
    pub fn new(lambda: QuadElem, curve: EllipticCurveCM) -> Result<Self, LattesError> {
        let field = curve.field();
        let lambda = lambda.embed(field).map_err(|_| LattesError::LambdaField {
            lambda: lambda.to_string(),
            lambda_field: lambda.field(),
            curve_field: field,
        })?;
        Ok(Multiplier { lambda, curve })
    }

    pub fn lambda(&self) -> &QuadElem {
        &self.lambda
    }

    pub fn curve(&self) -> &EllipticCurveCM {
        &self.curve
    }
}

/// The table's `(r₀, r₁, r₂, r₃)` for `λ = a + b√−d`, selected by the
/// parities of `a` and `bd` and by `N(λ) = a² + d·b²`.
pub fn predict_profile(m: &Multiplier) -> Result<RamificationProfile, LattesError> {
    let lambda = &m.lambda;
    let d = m.curve.field().d();
    let (a, b) = (lambda.re_part(), lambda.w_part());
    if !a.is_integer() || !b.is_integer() {
        return Err(LattesError::HalfIntegralLambda(lambda.to_string()));
    }
    let (a, b) = (a.to_integer(), b.to_integer());
    let norm: BigInt = &a * &a + BigInt::from(d) * &b * &b;
    let bd = &b * BigInt::from(d);
    let no_row = || LattesError::NoTableRow {
        lambda: lambda.to_string(),
        a: a.to_string(),
        b: b.to_string(),
        d,
        norm: norm.to_string(),
        a_par: a.mod_floor(&BigInt::from(2)).to_string(),
        bd_par: bd.mod_floor(&BigInt::from(2)).to_string(),
    };
    let n = norm.to_usize().filter(|&n| n > 0).ok_or_else(no_row)?;
    let (a_odd, bd_odd, b_odd) = (a.is_odd(), bd.is_odd(), b.is_odd());
    let counts = if a_odd != bd_odd {
        [(n + 1) / 2; 4]
    } else if !a_odd && !b_odd {
        match n {
            4 => [4, 2, 2, 2],
            n if n > 4 => [n / 2 + 2, n / 2, n / 2, n / 2],
            _ => return Err(no_row()),
        }
    } else if a_odd && bd_odd {
        match n {
            2 => [1, 2, 1, 2],
            n if n > 2 => [n / 2, n / 2 + 1, n / 2, n / 2 + 1],
            _ => return Err(no_row()),
        }
    } else {
        return Err(no_row());
    };
    Ok(RamificationProfile { counts, degree: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_coefficient, QuadField};
    use crate::lattes::{catalog, lattes_double};
    use crate::poly::Poly;

    fn predict(s: &str, curve: EllipticCurveCM) -> Result<RamificationProfile, LattesError> {
        let f = curve.field();
        predict_profile(&Multiplier::new(parse_coefficient(s, f).unwrap(), curve).unwrap())
    }

    #[test]
    fn table_rows() {
        let e1 = EllipticCurveCM::e1;
        assert_eq!(predict("3", e1()).unwrap().counts, [5; 4]);
        assert_eq!(predict("2", e1()).unwrap().counts, [4, 2, 2, 2]);
        assert_eq!(predict("1+w", e1()).unwrap().counts, [1, 2, 1, 2]);
        assert_eq!(predict("4", e1()).unwrap().counts, [10, 8, 8, 8]);
        assert_eq!(predict("3+w", e1()).unwrap().counts, [5, 6, 5, 6]);
        assert_eq!(predict("w", EllipticCurveCM::e2()).unwrap().counts, [2; 4]);
    }

    #[test]
    fn table_rows_satisfy_riemann_hurwitz() {
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let l = QuadElem::from_ints(QuadField::Gaussian, a, b).unwrap();
                if let Ok(p) = predict_profile(&Multiplier::new(l, EllipticCurveCM::e1()).unwrap()) {
                    if p.degree >= 2 {
                        assert_eq!(p.total_ramification(), 2 * p.degree - 2, "a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn unmatched_rows_report_parity() {
        let err = predict("0", EllipticCurveCM::e1()).unwrap_err();
        assert!(err.to_string().contains("parity"));
        let err = predict("1/2+1/2*w", EllipticCurveCM::e2()).unwrap_err();
        assert!(matches!(err, LattesError::HalfIntegralLambda(_)));
    }

    #[test]
    fn computed_profiles() {
        let e1 = EllipticCurveCM::e1();
        let p = ramification_profile(&lattes_double(&e1), &e1).unwrap();
        assert_eq!(p.multiset(), [4, 2, 2, 2]);
        let p = ramification_profile(&catalog("phi_1+2i").unwrap(), &e1).unwrap();
        assert_eq!(p.counts, [3; 4]);
        let p = ramification_profile(&catalog("phi_1+i").unwrap(), &e1).unwrap();
        assert_eq!(p.counts, [2, 1, 2, 1]);
        assert!(p.same_multiset(&predict("1+w", e1.clone()).unwrap()));
    }

    #[test]
    fn quintic_multiplicity_pattern() {
        let e1 = EllipticCurveCM::e1();
        for t in ramification_detail(&catalog("phi_1+2i").unwrap(), &e1).unwrap() {
            assert_eq!(t.multiplicities, vec![2, 2, 1]);
        }
    }

    #[test]
    fn shifted_square_is_not_lattes() {
        let e1 = EllipticCurveCM::e1();
        let m = RationalMap::normalize(Poly::from_ints(QuadField::Gaussian, &[1, 0, 1]), Poly::one(QuadField::Gaussian)).unwrap();
        assert!(matches!(ramification_profile(&m, &e1), Err(LattesError::NotLattes { .. })));
    }
}
