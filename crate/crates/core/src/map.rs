//! Rational self-maps of ℙ¹ over a quadratic field.
//!
//! A map of degree α is the homogeneous pair
//! `F₀(x, y) = Σ numᵢ xⁱ y^{α−i}`, `F₁(x, y) = Σ denᵢ xⁱ y^{α−i}`.
//! Maps are kept in a canonical form (coprime numerator and denominator,
//! monic denominator), so that equality of maps is equality of polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::arith::{integral_gcd, ArithError, IntegralElement, QuadElem, QuadField};
use crate::poly::{poly_gcd, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("denominator polynomial is zero")]
    ZeroDenominator,
    #[error("map is constant (degree 0)")]
    ConstantMap,
    #[error("projective point (0 : 0) is not allowed")]
    ZeroPoint,
}

/// A point `(x : y)` of ℙ¹; equality is equality up to a nonzero scalar.
#[derive(Clone)]
pub struct ProjPoint {
    x: QuadElem,
    y: QuadElem,
}

impl ProjPoint {
    pub fn new(x: QuadElem, y: QuadElem) -> Result<Self, MapError> {
        x.field().check(y.field())?;
        if x.is_zero() && y.is_zero() {
            return Err(MapError::ZeroPoint);
        }
        Ok(ProjPoint { x, y })
    }

    /// `(z : 1)`.
    pub fn affine(z: QuadElem) -> Self {
        let one = QuadElem::one(z.field());
        ProjPoint { x: z, y: one }
    }

    /// `(1 : 0)`.
    pub fn infinity(field: QuadField) -> Self {
        ProjPoint { x: QuadElem::one(field), y: QuadElem::zero(field) }
    }

    pub fn field(&self) -> QuadField {
        self.x.field()
    }

    pub fn x(&self) -> &QuadElem {
        &self.x
    }

    pub fn y(&self) -> &QuadElem {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// `x/y`, or `None` at infinity.
    pub fn affine_coord(&self) -> Option<QuadElem> {
        self.x.checked_div(&self.y).ok()
    }

    /// Embed a point with rational coordinates into a larger field.
    pub fn in_field(&self, field: QuadField) -> Result<Self, MapError> {
        Ok(ProjPoint { x: self.x.embed(field)?, y: self.y.embed(field)? })
    }

    /// Integral, coprime homogeneous coordinates (unique up to a unit).
    pub fn primitive(&self) -> (IntegralElement, IntegralElement) {
        let m: BigInt = self.x.denominator().lcm(&self.y.denominator());
        let scale = crate::arith::BigRational::from_integer(m);
        let xi = IntegralElement::try_from(&self.x.scale(&scale)).expect("cleared denominators");
        let yi = IntegralElement::try_from(&self.y.scale(&scale)).expect("cleared denominators");
        let g = integral_gcd(&xi, &yi).expect("not both zero");
        (xi.exact_div(&g).expect("gcd divides"), yi.exact_div(&g).expect("gcd divides"))
    }

    /// The primitive representative as a point.
    pub fn reduced(&self) -> ProjPoint {
        let (x, y) = self.primitive();
        ProjPoint { x: x.to_quad(), y: y.to_quad() }
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field() && &self.x * &other.y == &other.x * &self.y
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A reduced quotient of polynomials with no degree restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, MapError> {
        num.field().check(den.field())?;
        if den.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction { den: Poly::one(num.field()), num });
        }
        let g = poly_gcd(&num, &den)?;
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let c = den.lead().expect("nonzero").inv()?;
        Ok(RationalFunction { num: num.scale(&c), den: den.scale(&c) })
    }
}

/// A rational self-map of ℙ¹ of degree ≥ 1 in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    degree: usize,
}

impl RationalMap {
    /// Cancel common factors and make the denominator monic. A constant
    /// denominator becomes 1.
    pub fn normalize(num: Poly, den: Poly) -> Result<Self, MapError> {
        let RationalFunction { num, den } = RationalFunction::new(num, den)?;
        let degree = num.deg0().max(den.deg0());
        if degree == 0 {
            return Err(MapError::ConstantMap);
        }
        Ok(RationalMap { num, den, degree })
    }

    pub fn identity(field: QuadField) -> Self {
        RationalMap { num: Poly::z(field), den: Poly::one(field), degree: 1 }
    }

    /// `z ↦ z^k`.
    pub fn power(field: QuadField, k: u32) -> Result<Self, MapError> {
        Self::normalize(Poly::z(field).pow(k), Poly::one(field))
    }

    pub fn field(&self) -> QuadField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// α = max(deg num, deg den).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Homogeneous coefficient vectors of `(F₀, F₁)`, each of length α+1.
    pub fn homogeneous_coeffs(&self) -> (Vec<QuadElem>, Vec<QuadElem>) {
        let n = self.degree + 1;
        ((0..n).map(|i| self.num.coeff(i)).collect(), (0..n).map(|i| self.den.coeff(i)).collect())
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<ProjPoint, MapError> {
        let p = p.in_field(self.field())?;
        let f0 = self.num.eval_homogeneous(p.x(), p.y(), self.degree);
        let f1 = self.den.eval_homogeneous(p.x(), p.y(), self.degree);
        Ok(ProjPoint::new(f0, f1).expect("coprime lift has no common zero").reduced())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap, MapError> {
        self.field().check(inner.field())?;
        let a = self.degree;
        let field = self.field();
        let mut ppow = vec![Poly::one(field)];
        let mut qpow = vec![Poly::one(field)];
        for _ in 0..a {
            ppow.push(ppow.last().expect("nonempty") * &inner.num);
            qpow.push(qpow.last().expect("nonempty") * &inner.den);
        }
        let homog = |f: &Poly| {
            (0..=a).fold(Poly::zero(field), |acc, i| {
                let c = f.coeff(i);
                if c.is_zero() {
                    acc
                } else {
                    &acc + &(&ppow[i] * &qpow[a - i]).scale(&c)
                }
            })
        };
        Self::normalize(homog(&self.num), homog(&self.den))
    }

    /// n-fold iterate; `iterate(0)` is the identity.
    pub fn iterate(&self, n: u32) -> Result<RationalMap, MapError> {
        let mut acc = RationalMap::identity(self.field());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Same map of ℙ¹: `num_f·den_g = num_g·den_f`.
    pub fn equals(&self, other: &RationalMap) -> Result<bool, MapError> {
        self.field().check(other.field())?;
        Ok(&self.num * &other.den == &other.num * &self.den)
    }

    /// Whether `self ∘ other = other ∘ self`.
    pub fn commutes_with(&self, other: &RationalMap) -> Result<bool, MapError> {
        self.compose(other)?.equals(&other.compose(self)?)
    }

    /// `c·φ`.
    pub fn scale_output(&self, c: &QuadElem) -> Result<RationalMap, MapError> {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    /// Map with conjugated coefficients.
    pub fn conj(&self) -> RationalMap {
        RationalMap { num: self.num.conj(), den: self.den.conj(), degree: self.degree }
    }

    /// Embed a map over ℚ into a larger field.
    pub fn in_field(&self, field: QuadField) -> Result<RationalMap, MapError> {
        if field == self.field() {
            return Ok(self.clone());
        }
        let lift = |p: &Poly| Poly::new(field, p.coeffs().to_vec());
        Self::normalize(lift(&self.num)?, lift(&self.den)?)
    }

    /// `t₁·num − t₀·den`, whose roots are the finite preimages of `t = (t₀ : t₁)`.
    fn fibre_poly(&self, t: &ProjPoint) -> Result<Poly, MapError> {
        let t = t.in_field(self.field())?;
        Ok(&self.num.scale(t.y()) - &self.den.scale(t.x()))
    }

    /// Number of distinct `z ∈ ℙ¹(K̄)` with `φ(z) = t`, computed without
    /// root finding as a squarefree-part degree. ∞ counts when the fibre
    /// polynomial drops degree.
    pub fn distinct_preimages(&self, t: &ProjPoint) -> Result<usize, MapError> {
        let h = self.fibre_poly(t)?;
        let at_infinity = usize::from(h.deg0() < self.degree);
        Ok(h.distinct_root_count() + at_infinity)
    }

    /// Local degrees of `φ` at the points of the fibre over `t`, sorted
    /// descending. They sum to α.
    pub fn preimage_multiplicities(&self, t: &ProjPoint) -> Result<Vec<usize>, MapError> {
        let h = self.fibre_poly(t)?;
        let mut out: Vec<usize> = h
            .root_multiplicities()
            .into_iter()
            .flat_map(|(mult, count)| std::iter::repeat(mult).take(count))
            .collect();
        let at_inf = self.degree - h.deg0();
        if at_inf > 0 {
            out.push(at_inf);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    /// Formal derivative `(num′·den − num·den′)/den²`, reduced.
    pub fn derivative(&self) -> Result<RationalFunction, MapError> {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::new(n, &self.den * &self.den)
    }

    /// Whether the coefficients of the canonical form are integral.
    pub fn has_integral_coeffs(&self) -> bool {
        self.num.coeffs().iter().chain(self.den.coeffs()).all(QuadElem::is_integral)
    }

    /// Least common denominator of the coefficients.
    pub fn coeff_denominator(&self) -> BigInt {
        self.num.coeffs().iter().chain(self.den.coeffs()).fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (deg {}, d={})", self, self.degree, self.field().d())
    }
}

/// Free-function form of [`RationalMap::commutes_with`].
pub fn commute_check(f: &RationalMap, g: &RationalMap) -> Result<bool, MapError> {
    f.commutes_with(g)
}
