//! Elliptic curves with complex multiplication and the maps they induce on
//! ℙ¹ through the quotient `E → E/[±1] ≅ ℙ¹`, `(x, y) ↦ x`.

mod catalog;
mod division;
mod ramification;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::arith::{ArithError, BigRational, IntegralElement, QuadElem, QuadField};
use crate::map::{MapError, ProjPoint, RationalMap};
use crate::measures::roots::poly_roots;
use crate::poly::{poly_gcd, Poly};

pub use catalog::{catalog, catalog_entries, catalog_entry, catalog_names, for_lambda, CatalogEntry, Provenance};
pub use division::lattes_multiply;
pub use ramification::{
    predict_profile, ramification_detail, ramification_profile, verify_lattes, Multiplier, RamificationProfile,
    TargetRamification,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LattesError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("unknown catalog name {name:?}; valid names: {}", valid.join(", "))]
    UnknownName { name: String, valid: Vec<String> },
    #[error("{poly} does not split over {field}; supply the splitting field")]
    NotSplit { poly: String, field: QuadField },
    #[error("not a Lattès map of this curve: ramification over the 2-torsion images is {found}, expected 2·deg − 2 = {expected}")]
    NotLattes { found: usize, expected: usize },
    #[error("no table row matches λ = {lambda} (a = {a}, b = {b}, d = {d}, N(λ) = {norm}; parity signature a mod 2 = {a_par}, bd mod 2 = {bd_par})")]
    NoTableRow { lambda: String, a: String, b: String, d: u32, norm: String, a_par: String, bd_par: String },
    #[error("λ = {0} has non-integral coordinates a, b in a + b·√−d; the table does not cover it")]
    HalfIntegralLambda(String),
    #[error("no map available for λ = {0}")]
    NoMapForLambda(String),
    #[error("multiplier λ = {lambda} lives in {lambda_field}, curve has CM by {curve_field}")]
    LambdaField { lambda: String, lambda_field: QuadField, curve_field: QuadField },
}

/// A Weierstrass curve `y² = G(x)` with CM by the ring of integers of
/// `field`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticCurveCM {
    name: String,
    g: Poly,
    tau_im: f64,
}

impl EllipticCurveCM {
    /// `G` must be a squarefree monic cubic over ℚ(i) or ℚ(√−3).
    pub fn new(name: impl Into<String>, g: Poly, tau_im: f64) -> Result<Self, LattesError> {
        if g.field() == QuadField::Rational {
            return Err(LattesError::InvalidCurve("CM field must be Q(i) or Q(sqrt(-3))".into()));
        }
        if g.degree() != Some(3) || !g.lead().is_some_and(QuadElem::is_one) {
            return Err(LattesError::InvalidCurve(format!("G = {g} is not a monic cubic")));
        }
        if poly_gcd(&g, &g.derivative())?.deg0() != 0 {
            return Err(LattesError::InvalidCurve(format!("G = {g} has a repeated root")));
        }
        if !(tau_im.is_finite() && tau_im > 0.0) {
            return Err(LattesError::InvalidCurve(format!("Im τ = {tau_im} must be positive")));
        }
        Ok(EllipticCurveCM { name: name.into(), g, tau_im })
    }

    /// `E₁ : y² = x³ + x`, CM by ℤ[i], square lattice.
    pub fn e1() -> Self {
        Self::new("E1", Poly::from_ints(QuadField::Gaussian, &[0, 1, 0, 1]), 1.0).expect("valid curve")
    }

    /// `E₂ : y² = x³ + 1`, CM by ℤ[ρ], hexagonal lattice.
    pub fn e2() -> Self {
        Self::new("E2", Poly::from_ints(QuadField::Eisenstein, &[1, 0, 0, 1]), 3f64.sqrt() / 2.0).expect("valid curve")
    }

    /// The catalog curve whose CM field is `field`.
    pub fn for_field(field: QuadField) -> Option<Self> {
        match field {
            QuadField::Gaussian => Some(Self::e1()),
            QuadField::Eisenstein => Some(Self::e2()),
            QuadField::Rational => None,
        }
    }

    pub fn with_tau_im(mut self, tau_im: f64) -> Result<Self, LattesError> {
        if !(tau_im.is_finite() && tau_im > 0.0) {
            return Err(LattesError::InvalidCurve(format!("Im τ = {tau_im} must be positive")));
        }
        self.tau_im = tau_im;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The cubic `G`.
    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn field(&self) -> QuadField {
        self.g.field()
    }

    pub fn tau_im(&self) -> f64 {
        self.tau_im
    }

    /// Coefficient of `x²` in `G`.
    pub(crate) fn a2(&self) -> QuadElem {
        self.g.coeff(2)
    }
}

/// The x-coordinate of doubling:
/// `φ₂(z) = (G′(z)² − 4(2z + a₂)·G(z)) / (4·G(z))`,
/// which for `a₂ = 0` is `((G′)² − 8zG)/(4G)`.
pub fn lattes_double(curve: &EllipticCurveCM) -> RationalMap {
    let field = curve.field();
    let g = curve.g();
    let gp = g.derivative();
    let four = QuadElem::from_int(field, 4);
    let shift = &Poly::from_ints(field, &[0, 2]) + &Poly::constant(curve.a2());
    let num = &(&gp * &gp) - &(&shift * g).scale(&four);
    RationalMap::normalize(num, g.scale(&four)).expect("G is squarefree, so the quotient is a degree-4 map")
}

/// The four points `{∞} ∪ {roots of G}`, the images of the 2-torsion under
/// `x`. ∞ comes first; finite roots follow in order of (Re, Im).
pub fn two_torsion_targets(curve: &EllipticCurveCM) -> Result<Vec<ProjPoint>, LattesError> {
    let roots = roots_in_field(curve.g())?;
    if roots.len() != 3 {
        return Err(LattesError::NotSplit { poly: curve.g().to_string(), field: curve.field() });
    }
    let mut out = vec![ProjPoint::infinity(curve.field())];
    out.extend(roots.into_iter().map(ProjPoint::affine));
    Ok(out)
}

/// The distinct roots of `p` lying in its coefficient field, found by
/// rounding numerical roots of an integral monic rescaling to the nearest
/// algebraic integers and verifying each candidate exactly.
pub fn roots_in_field(p: &Poly) -> Result<Vec<QuadElem>, LattesError> {
    let field = p.field();
    let Some(n) = p.degree() else { return Ok(Vec::new()) };
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = p.monic();
    // H(w) = mⁿ·P(w/m) is monic with integral coefficients.
    let m = monic.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
    let mr = BigRational::from_integer(m.clone());
    let h_coeffs: Vec<QuadElem> = monic
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.scale(&num_traits::pow(mr.clone(), n - i)))
        .collect();
    let h = Poly::new(field, h_coeffs)?;
    let numeric = poly_roots(&h.to_complex()).map_err(|_| LattesError::NotSplit { poly: p.to_string(), field })?;
    let mut found: Vec<QuadElem> = Vec::new();
    for z in numeric {
        let (u0, v0) = match field {
            QuadField::Rational => (z.re, 0.0),
            QuadField::Gaussian => (z.re, z.im),
            QuadField::Eisenstein => {
                let v = 2.0 * z.im / 3f64.sqrt();
                (z.re - v / 2.0, v)
            }
        };
        let (u0, v0) = (u0.round() as i64, v0.round() as i64);
        let vs: &[i64] = if field == QuadField::Rational { &[0] } else { &[-1, 0, 1] };
        let mut candidates: Vec<QuadElem> = (-1..=1)
            .flat_map(|du| vs.iter().map(move |&dv| (u0 + du, v0 + dv)))
            .map(|(u, v)| IntegralElement::from_basis(field, BigInt::from(u), BigInt::from(v)).to_quad())
            .collect();
        candidates.sort_by(|a, b| (a.to_complex() - z).norm().total_cmp(&(b.to_complex() - z).norm()));
        if let Some(w) = candidates.into_iter().find(|w| h.eval(w).is_zero()) {
            let root = w.scale(&mr.recip());
            if !found.contains(&root) {
                found.push(root);
            }
        }
    }
    found.sort_by(|a, b| {
        let (za, zb) = (a.to_complex(), b.to_complex());
        za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_on_e1_matches_displayed_formula() {
        let displayed = RationalMap::normalize(
            Poly::from_ints(QuadField::Gaussian, &[1, 0, -2, 0, 1]),
            Poly::from_ints(QuadField::Gaussian, &[0, 4, 0, 4]),
        )
        .unwrap();
        let m = lattes_double(&EllipticCurveCM::e1());
        assert!(m.equals(&displayed).unwrap());
        assert_eq!(m.degree(), 4);
    }

    #[test]
    fn doubling_on_e2() {
        // ((3z²)² − 8z(z³+1)) / (4(z³+1)) = (z⁴ − 8z)/(4z³ + 4)
        let expected = RationalMap::normalize(
            Poly::from_ints(QuadField::Eisenstein, &[0, -8, 0, 0, 1]),
            Poly::from_ints(QuadField::Eisenstein, &[4, 0, 0, 4]),
        )
        .unwrap();
        assert!(lattes_double(&EllipticCurveCM::e2()).equals(&expected).unwrap());
    }

    #[test]
    fn doubling_with_quadratic_term_matches_division_polynomials() {
        let g = Poly::from_ints(QuadField::Gaussian, &[0, -1, 2, 1]);
        let c = EllipticCurveCM::new("test", g, 1.0).unwrap();
        assert!(lattes_double(&c).equals(&lattes_multiply(&c, 2).unwrap()).unwrap());
    }

    #[test]
    fn targets() {
        let i = QuadElem::i();
        let t = two_torsion_targets(&EllipticCurveCM::e1()).unwrap();
        assert!(t[0].is_infinity());
        let finite: Vec<QuadElem> = t[1..].iter().map(|p| p.affine_coord().unwrap()).collect();
        assert_eq!(finite, vec![-i.clone(), QuadElem::zero(QuadField::Gaussian), i]);

        let rho = QuadElem::rho();
        let t = two_torsion_targets(&EllipticCurveCM::e2()).unwrap();
        let finite: Vec<QuadElem> = t[1..].iter().map(|p| p.affine_coord().unwrap()).collect();
        assert_eq!(finite, vec![QuadElem::from_int(QuadField::Eisenstein, -1), rho.conj(), rho.clone()]);
        for z in &finite {
            assert!(EllipticCurveCM::e2().g().eval(z).is_zero());
        }
    }

    #[test]
    fn nonsplit_cubic_is_rejected() {
        // z³ − 2 has no root in ℚ(i)
        let c = EllipticCurveCM::new("x", Poly::from_ints(QuadField::Gaussian, &[-2, 0, 0, 1]), 1.0).unwrap();
        assert!(matches!(two_torsion_targets(&c), Err(LattesError::NotSplit { .. })));
    }

    #[test]
    fn rational_roots_with_denominators() {
        // (2z − 1)(z + 3)(z − i)
        let f = QuadField::Gaussian;
        let p = &(&Poly::from_ints(f, &[-1, 2]) * &Poly::from_ints(f, &[3, 1])) * &Poly::new(f, vec![-QuadElem::i(), QuadElem::one(f)]).unwrap();
        let r = roots_in_field(&p).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.contains(&QuadElem::from_rational(f, crate::arith::rat_frac(1, 2))));
    }

    #[test]
    fn invalid_curves() {
        assert!(EllipticCurveCM::new("s", Poly::from_ints(QuadField::Gaussian, &[0, 0, 0, 1]), 1.0).is_err());
        assert!(EllipticCurveCM::new("q", Poly::from_ints(QuadField::Rational, &[0, 1, 0, 1]), 1.0).is_err());
        assert!(EllipticCurveCM::new("n", Poly::from_ints(QuadField::Gaussian, &[0, 1, 0, 2]), 1.0).is_err());
    }
}
