//! Exact arithmetic in ℚ and the imaginary quadratic fields ℚ(i), ℚ(√−3).
//!
//! Every element is stored as `a + b·w` with `w = √−d` and rational `a, b`.
//! The rational field is tagged `d = 0` and always has `b = 0`.

mod integral;
mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use integral::{integral_gcd, IntegralElement};
pub(crate) use integral::ln_bigint;
pub use num_rational::BigRational;
pub use parse::{parse_coefficient, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: ℚ(√-{0}) vs ℚ(√-{1})")]
    FieldMismatch(u32, u32),
    #[error("unsupported field tag d = {0} (expected 0, 1 or 3)")]
    UnsupportedField(u32),
    #[error("element {0} is not integral")]
    NotIntegral(String),
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("rational field element with nonzero √-d part")]
    RationalWithImaginaryPart,
}

/// One of the three supported fields, tagged by `d` in `ℚ(√−d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadField {
    /// ℚ, `d = 0`.
    Rational,
    /// ℚ(i), `d = 1`, ring of integers ℤ[i].
    Gaussian,
    /// ℚ(√−3), `d = 3`, ring of integers ℤ[ρ] with ρ = (1+√−3)/2.
    Eisenstein,
}

impl QuadField {
    pub fn d(self) -> u32 {
        match self {
            QuadField::Rational => 0,
            QuadField::Gaussian => 1,
            QuadField::Eisenstein => 3,
        }
    }

    pub fn from_d(d: u32) -> Result<Self, ArithError> {
        match d {
            0 => Ok(QuadField::Rational),
            1 => Ok(QuadField::Gaussian),
            3 => Ok(QuadField::Eisenstein),
            other => Err(ArithError::UnsupportedField(other)),
        }
    }

    /// `[K : ℚ]`.
    pub fn degree(self) -> u32 {
        if self == QuadField::Rational {
            1
        } else {
            2
        }
    }

    /// The units of the ring of integers.
    pub fn units(self) -> Vec<IntegralElement> {
        let u = |a: i64, b: i64| IntegralElement::from_basis(self, BigInt::from(a), BigInt::from(b));
        match self {
            QuadField::Rational => vec![u(1, 0), u(-1, 0)],
            QuadField::Gaussian => vec![u(1, 0), u(0, 1), u(-1, 0), u(0, -1)],
            // 1, ρ, ρ² = ρ − 1, −1, −ρ, −ρ²
            QuadField::Eisenstein => vec![u(1, 0), u(0, 1), u(-1, 1), u(-1, 0), u(0, -1), u(1, -1)],
        }
    }

    pub(crate) fn check(self, other: QuadField) -> Result<(), ArithError> {
        if self == other {
            Ok(())
        } else {
            Err(ArithError::FieldMismatch(self.d(), other.d()))
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadField::Rational => write!(f, "Q"),
            QuadField::Gaussian => write!(f, "Q(sqrt(-1))"),
            QuadField::Eisenstein => write!(f, "Q(sqrt(-3))"),
        }
    }
}

/// An element `a + b·√−d` of a supported field.
///
/// Arithmetic operators panic when the operands live in different fields;
/// the `checked_*` methods return [`ArithError::FieldMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    field: QuadField,
    a: BigRational,
    b: BigRational,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadElem {
    pub fn new(field: QuadField, a: BigRational, b: BigRational) -> Result<Self, ArithError> {
        if field == QuadField::Rational && !b.is_zero() {
            return Err(ArithError::RationalWithImaginaryPart);
        }
        Ok(QuadElem { field, a, b })
    }

    pub fn zero(field: QuadField) -> Self {
        QuadElem { field, a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one(field: QuadField) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: QuadField, n: i64) -> Self {
        QuadElem { field, a: rat(n), b: BigRational::zero() }
    }

    pub fn from_rational(field: QuadField, a: BigRational) -> Self {
        QuadElem { field, a, b: BigRational::zero() }
    }

    /// `a + b·√−d` with small integer parts.
    pub fn from_ints(field: QuadField, a: i64, b: i64) -> Result<Self, ArithError> {
        Self::new(field, rat(a), rat(b))
    }

    /// The generator `w = √−d`. Panics for ℚ.
    pub fn w(field: QuadField) -> Self {
        assert!(field != QuadField::Rational, "ℚ has no √−d generator");
        QuadElem { field, a: BigRational::zero(), b: rat(1) }
    }

    /// `i ∈ ℚ(i)`.
    pub fn i() -> Self {
        Self::w(QuadField::Gaussian)
    }

    /// `ρ = (1 + √−3)/2 ∈ ℚ(√−3)`, a primitive sixth root of unity.
    pub fn rho() -> Self {
        QuadElem { field: QuadField::Eisenstein, a: rat_frac(1, 2), b: rat_frac(1, 2) }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Rational part `a`.
    pub fn re_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of `√−d`.
    pub fn w_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Re-tag a rational element into `field`. Elements already in `field`
    /// are returned unchanged.
    pub fn embed(&self, field: QuadField) -> Result<Self, ArithError> {
        if self.field == field {
            return Ok(self.clone());
        }
        if self.field == QuadField::Rational {
            return Ok(QuadElem { field, a: self.a.clone(), b: BigRational::zero() });
        }
        Err(ArithError::FieldMismatch(self.field.d(), field.d()))
    }

    pub fn conj(&self) -> Self {
        QuadElem { field: self.field, a: self.a.clone(), b: -self.b.clone() }
    }

    /// `a² + d·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + rat(self.field.d() as i64) * &self.b * &self.b
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.field.check(rhs.field)?;
        Ok(QuadElem { field: self.field, a: &self.a + &rhs.a, b: &self.b + &rhs.b })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.field.check(rhs.field)?;
        Ok(QuadElem { field: self.field, a: &self.a - &rhs.a, b: &self.b - &rhs.b })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.field.check(rhs.field)?;
        let d = rat(self.field.d() as i64);
        Ok(QuadElem {
            field: self.field,
            a: &self.a * &rhs.a - d * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        })
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadElem { field: self.field, a: &self.a / &n, b: -(&self.b / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.field.check(rhs.field)?;
        self.checked_mul(&rhs.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadElem { field: self.field, a: &self.a * r, b: &self.b * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Image under the embedding `√−d ↦ i·√d`.
    pub fn to_complex(&self) -> Complex64 {
        let re = ratio_to_f64(&self.a);
        let im = ratio_to_f64(&self.b) * (self.field.d() as f64).sqrt();
        Complex64::new(re, im)
    }

    /// Whether the element lies in the ring of integers.
    pub fn is_integral(&self) -> bool {
        IntegralElement::try_from(self).is_ok()
    }

    /// The least positive integer `m` with `m·self` integral.
    pub fn denominator(&self) -> BigInt {
        let (u, v) = integral::basis_coords(self);
        num_integer::Integer::lcm(u.denom(), v.denom())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // shift both to ~60 significant bits
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift_n = (nb - 60).max(0);
            let shift_d = (db - 60).max(0);
            let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
            n / d * 2f64.powi((shift_n - shift_d) as i32)
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let b_abs = self.b.abs();
        let b_str = if b_abs.is_one() { "w".to_string() } else { format!("{}*w", fmt_rational(&b_abs)) };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{b_str}")
            } else {
                write!(f, "{b_str}")
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rational(&self.a), sign, b_str)
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [d={}]", self, self.field.d())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadElem> for &'a QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &'a QuadElem) -> QuadElem {
                self.$checked(rhs).expect("quadratic field operands must share a field")
            }
        }
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &'a QuadElem) -> QuadElem {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { field: self.field, a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> QuadElem {
        QuadElem::from_ints(QuadField::Gaussian, a, b).unwrap()
    }

    #[test]
    fn gaussian_norm_identity() {
        assert_eq!(&g(1, 1) * &g(1, -1), g(2, 0));
        let x = g(2, 1);
        assert_eq!(&x * &x.conj(), QuadElem::from_rational(QuadField::Gaussian, x.norm()));
        assert_eq!(x.norm(), rat(5));
    }

    #[test]
    fn rho_cubed_is_minus_one() {
        let rho = QuadElem::rho();
        let sq = &rho * &rho;
        assert_eq!(sq, QuadElem::new(QuadField::Eisenstein, rat_frac(-1, 2), rat_frac(1, 2)).unwrap());
        assert_eq!(&sq * &rho, QuadElem::from_int(QuadField::Eisenstein, -1));
    }

    #[test]
    fn inverse_law() {
        let x = g(3, 2);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn norms_from_catalog_degrees() {
        assert_eq!(g(1, 2).norm(), rat(5));
        assert_eq!(QuadElem::w(QuadField::Eisenstein).norm(), rat(3));
        assert!(QuadElem::zero(QuadField::Gaussian).norm().is_zero());
    }

    #[test]
    fn conj_fixes_rationals() {
        assert_eq!(g(1, 2).conj(), g(1, -2));
        assert_eq!(g(5, 0).conj(), g(5, 0));
    }

    #[test]
    fn errors() {
        assert_eq!(QuadElem::zero(QuadField::Gaussian).inv(), Err(ArithError::DivisionByZero));
        let e = QuadElem::one(QuadField::Eisenstein);
        assert_eq!(g(1, 0).checked_add(&e), Err(ArithError::FieldMismatch(1, 3)));
        assert!(QuadElem::from_ints(QuadField::Rational, 1, 1).is_err());
        assert!(QuadField::from_d(2).is_err());
    }

    #[test]
    fn display_matches_grammar() {
        assert_eq!(g(0, 2).to_string(), "2*w");
        assert_eq!(g(3, 0).to_string(), "3");
        assert_eq!(QuadElem::rho().to_string(), "1/2+1/2*w");
        assert_eq!(g(1, -1).to_string(), "1-w");
    }

    #[test]
    fn complex_embedding() {
        let z = QuadElem::rho().to_complex();
        assert!((z - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }
}
