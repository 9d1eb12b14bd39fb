//! The rings of integers ℤ, ℤ[i] and ℤ[ρ].
//!
//! Elements are stored in the integral basis `{1, θ}` with θ = i for ℤ[i]
//! and θ = ρ = (1+√−3)/2 for ℤ[ρ], so all coordinates are plain integers.
//! Both quadratic rings are norm-Euclidean: rounding the exact quotient
//! coordinate-wise leaves a remainder of norm at most 1/2 (resp. 3/4) of
//! the divisor's norm.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ArithError, BigRational, QuadElem, QuadField};

/// An element of the ring of integers of a [`QuadField`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegralElement {
    field: QuadField,
    u: BigInt,
    v: BigInt,
}

/// Coordinates of `x` in the basis `{1, θ}`.
pub(crate) fn basis_coords(x: &QuadElem) -> (BigRational, BigRational) {
    match x.field() {
        QuadField::Rational | QuadField::Gaussian => (x.re_part().clone(), x.w_part().clone()),
        QuadField::Eisenstein => {
            let v = x.w_part() * BigRational::from_integer(BigInt::from(2));
            (x.re_part() - x.w_part(), v)
        }
    }
}

impl TryFrom<&QuadElem> for IntegralElement {
    type Error = ArithError;

    fn try_from(x: &QuadElem) -> Result<Self, ArithError> {
        let (u, v) = basis_coords(x);
        if !u.is_integer() || !v.is_integer() {
            return Err(ArithError::NotIntegral(x.to_string()));
        }
        Ok(IntegralElement { field: x.field(), u: u.to_integer(), v: v.to_integer() })
    }
}

impl From<&IntegralElement> for QuadElem {
    fn from(x: &IntegralElement) -> QuadElem {
        let u = BigRational::from_integer(x.u.clone());
        let v = BigRational::from_integer(x.v.clone());
        match x.field {
            QuadField::Rational | QuadField::Gaussian => QuadElem::new(x.field, u, v).expect("valid coordinates"),
            QuadField::Eisenstein => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let b = &v * &half;
                QuadElem::new(x.field, u + &b, b).expect("valid coordinates")
            }
        }
    }
}

impl IntegralElement {
    pub fn from_basis(field: QuadField, u: BigInt, v: BigInt) -> Self {
        debug_assert!(field != QuadField::Rational || v.is_zero());
        IntegralElement { field, u, v }
    }

    pub fn from_int(field: QuadField, n: impl Into<BigInt>) -> Self {
        IntegralElement { field, u: n.into(), v: BigInt::zero() }
    }

    pub fn zero(field: QuadField) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: QuadField) -> Self {
        Self::from_int(field, 1)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Coordinates `(u, v)` with `self = u + v·θ`.
    pub fn basis(&self) -> (&BigInt, &BigInt) {
        (&self.u, &self.v)
    }

    pub fn to_quad(&self) -> QuadElem {
        QuadElem::from(self)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn norm(&self) -> BigInt {
        match self.field {
            QuadField::Rational => &self.u * &self.u,
            QuadField::Gaussian => &self.u * &self.u + &self.v * &self.v,
            QuadField::Eisenstein => &self.u * &self.u + &self.u * &self.v + &self.v * &self.v,
        }
    }

    pub fn conj(&self) -> Self {
        match self.field {
            QuadField::Rational | QuadField::Gaussian => {
                IntegralElement { field: self.field, u: self.u.clone(), v: -&self.v }
            }
            // conj(ρ) = 1 − ρ
            QuadField::Eisenstein => IntegralElement { field: self.field, u: &self.u + &self.v, v: -&self.v },
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        IntegralElement { field: self.field, u: &self.u + &rhs.u, v: &self.v + &rhs.v }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        IntegralElement { field: self.field, u: &self.u - &rhs.u, v: &self.v - &rhs.v }
    }

    pub fn neg(&self) -> Self {
        IntegralElement { field: self.field, u: -&self.u, v: -&self.v }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        let (a, b, c, d) = (&self.u, &self.v, &rhs.u, &rhs.v);
        match self.field {
            QuadField::Rational => IntegralElement { field: self.field, u: a * c, v: BigInt::zero() },
            QuadField::Gaussian => IntegralElement { field: self.field, u: a * c - b * d, v: a * d + b * c },
            // θ² = θ − 1
            QuadField::Eisenstein => {
                let bd = b * d;
                IntegralElement { field: self.field, u: a * c - &bd, v: a * d + b * c + bd }
            }
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        IntegralElement { field: self.field, u: &self.u * k, v: &self.v * k }
    }

    /// Division by a rational integer, `None` unless exact.
    pub fn div_int_exact(&self, k: &BigInt) -> Option<Self> {
        let (qu, ru) = self.u.div_rem(k);
        let (qv, rv) = self.v.div_rem(k);
        if ru.is_zero() && rv.is_zero() {
            Some(IntegralElement { field: self.field, u: qu, v: qv })
        } else {
            None
        }
    }

    /// Reduce both coordinates into `[0, m)`.
    pub fn mod_int(&self, m: &BigInt) -> Self {
        IntegralElement { field: self.field, u: self.u.mod_floor(m), v: self.v.mod_floor(m) }
    }

    /// Euclidean division: `self = q·rhs + r` with `norm(r) < norm(rhs)`.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self), ArithError> {
        self.field.check(rhs.field)?;
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = rhs.norm();
        let num = self.mul(&rhs.conj());
        let q = IntegralElement { field: self.field, u: round_div(&num.u, &n), v: round_div(&num.v, &n) };
        let r = self.sub(&q.mul(rhs));
        Ok((q, r))
    }

    /// Exact quotient, `None` when `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm();
        self.mul(&rhs.conj()).div_int_exact(&n)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// The associate with argument in `[0, π/2)` for ℤ[i], `[0, π/3)` for
    /// ℤ[ρ], positive for ℤ. In basis coordinates both sectors read
    /// `u > 0, v ≥ 0`.
    pub fn normalize_unit(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.field
            .units()
            .iter()
            .map(|e| self.mul(e))
            .find(|c| c.u.is_positive() && !c.v.is_negative())
            .expect("exactly one associate lies in the fundamental sector")
    }

    pub fn to_complex(&self) -> Complex64 {
        self.to_quad().to_complex()
    }

    /// `log |self|` at the complex place, i.e. `½·log norm(self)`.
    pub fn ln_abs(&self) -> f64 {
        0.5 * ln_bigint(&self.norm())
    }

    /// Bit length of the larger coordinate.
    pub fn bits(&self) -> u64 {
        self.u.bits().max(self.v.bits())
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // floor((2n + d) / 2d), d > 0
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * two))
}

/// Natural logarithm of a positive big integer.
pub(crate) fn ln_bigint(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    assert!(n.is_positive(), "logarithm of a non-positive integer");
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            return f.ln();
        }
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A generator of the ideal `(x, y)`, unit-normalized.
pub fn integral_gcd(x: &IntegralElement, y: &IntegralElement) -> Result<IntegralElement, ArithError> {
    x.field.check(y.field)?;
    if x.is_zero() && y.is_zero() {
        return Err(ArithError::GcdOfZeros);
    }
    let mut a = x.clone();
    let mut b = y.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.normalize_unit())
}

impl fmt::Display for IntegralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_quad())
    }
}

impl fmt::Debug for IntegralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [d={}]", self.to_quad(), self.field.d())
    }
}
