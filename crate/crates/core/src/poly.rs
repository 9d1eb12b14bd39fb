//! Dense univariate polynomials over a [`QuadField`], lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::arith::{ArithError, QuadElem, QuadField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: QuadField,
    coeffs: Vec<QuadElem>,
}

impl Poly {
    /// Builds a polynomial from coefficients, lowest degree first.
    /// Rational coefficients are embedded into `field`.
    pub fn new(field: QuadField, coeffs: Vec<QuadElem>) -> Result<Self, ArithError> {
        let coeffs = coeffs.into_iter().map(|c| c.embed(field)).collect::<Result<Vec<_>, _>>()?;
        let mut p = Poly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_ints(field: QuadField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| QuadElem::from_int(field, c)).collect()).expect("same field")
    }

    pub fn zero(field: QuadField) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: QuadField) -> Self {
        Self::constant(QuadElem::one(field))
    }

    pub fn constant(c: QuadElem) -> Self {
        let field = c.field();
        let mut p = Poly { field, coeffs: vec![c] };
        p.trim();
        p
    }

    /// `c·z^k`.
    pub fn monomial(c: QuadElem, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![QuadElem::zero(field); k];
        coeffs.push(c);
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    /// The identity polynomial `z`.
    pub fn z(field: QuadField) -> Self {
        Self::monomial(QuadElem::one(field), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(QuadElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn coeffs(&self) -> &[QuadElem] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&QuadElem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> QuadElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| QuadElem::zero(self.field))
    }

    pub fn checked_add(&self, rhs: &Poly) -> Result<Poly, ArithError> {
        self.field.check(rhs.field)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn checked_sub(&self, rhs: &Poly) -> Result<Poly, ArithError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly, ArithError> {
        self.field.check(rhs.field)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        let mut coeffs = vec![QuadElem::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn scale(&self, c: &QuadElem) -> Poly {
        let mut p = Poly { field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect() };
        p.trim();
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Long division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), ArithError> {
        self.field.check(d.field)?;
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = d.lead().expect("nonzero").inv()?;
        let mut r = self.clone();
        let mut q = vec![QuadElem::zero(self.field); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead().expect("nonzero") * &lead_inv;
            let shift = rd - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r.coeffs[shift + j] = &r.coeffs[shift + j] - &(&c * dc);
            }
            // the leading term cancels exactly
            r.coeffs[rd] = QuadElem::zero(self.field);
            r.trim();
            q[shift] = c;
        }
        let mut q = Poly { field: self.field, coeffs: q };
        q.trim();
        Ok((q, r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Scale to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&crate::arith::rat(i as i64)))
            .collect();
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        self.coeffs.iter().rev().fold(QuadElem::zero(self.field), |acc, c| &(&acc * x) + c)
    }

    /// `Σ cᵢ xⁱ y^{deg−i}`, the homogenization to total degree `deg`.
    pub fn eval_homogeneous(&self, x: &QuadElem, y: &QuadElem, deg: usize) -> QuadElem {
        let mut acc = QuadElem::zero(self.field);
        let mut ypow = QuadElem::one(self.field);
        // ascending powers of y pair with descending powers of x
        for i in (0..=deg).rev() {
            let c = self.coeff(i);
            if !c.is_zero() {
                acc = &acc + &(&(&c * &x.pow(i as u32)) * &ypow);
            }
            ypow = &ypow * y;
        }
        acc
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(self.field), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    /// Coefficient-wise conjugation.
    pub fn conj(&self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(QuadElem::conj).collect() }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(QuadElem::to_complex).collect()
    }

    /// Number of distinct roots over the algebraic closure,
    /// `deg f − deg gcd(f, f′)`.
    pub fn distinct_root_count(&self) -> usize {
        let Some(d) = self.degree() else { return 0 };
        if d == 0 {
            return 0;
        }
        let g = poly_gcd(self, &self.derivative()).expect("f nonzero");
        d - g.deg0()
    }

    /// Squarefree decomposition (Yun): returns `(multiplicity, number of
    /// distinct roots with that multiplicity)` for every multiplicity present.
    pub fn root_multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let fp = self.derivative();
        let a0 = poly_gcd(self, &fp).expect("nonzero");
        let mut b = self.exact_div(&a0).expect("gcd divides");
        let c = fp.exact_div(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg0() > 0 {
            let a = poly_gcd(&b, &d).expect("b nonzero");
            let k = a.deg0();
            if k > 0 {
                out.push((i, k));
            }
            let b_next = b.exact_div(&a).expect("divides");
            let c = d.exact_div(&a).expect("divides");
            d = &c - &b_next.derivative();
            b = b_next;
            i += 1;
        }
        out
    }
}

/// Monic gcd by the Euclidean algorithm over the field.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly, ArithError> {
    f.field.check(g.field)?;
    if f.is_zero() && g.is_zero() {
        return Err(ArithError::GcdOfZeros);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs).expect("polynomials must share a field")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if i > 0 && c.is_one() {
                write!(f, "{mono}")?;
            } else if i > 0 {
                write!(f, "({c}){mono}")?;
            } else {
                write!(f, "({c})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [d={}]", self, self.field.d())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: QuadField = QuadField::Rational;

    #[test]
    fn gcd_examples() {
        let f = Poly::from_ints(Q, &[-1, 0, 1]);
        let g = Poly::from_ints(Q, &[-1, 1]);
        assert_eq!(poly_gcd(&f, &g).unwrap(), g);
        let f = Poly::from_ints(Q, &[0, 1, 0, 1]);
        let g = Poly::from_ints(Q, &[1, 0, 1]);
        assert_eq!(poly_gcd(&f, &g).unwrap(), g);
        assert_eq!(poly_gcd(&f, &Poly::one(Q)).unwrap(), Poly::one(Q));
        assert!(poly_gcd(&Poly::zero(Q), &Poly::zero(Q)).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Poly::from_ints(Q, &[0, 1, 0, 1]).derivative(), Poly::from_ints(Q, &[1, 0, 3]));
        assert!(Poly::from_ints(Q, &[7]).derivative().is_zero());
    }

    #[test]
    fn multiplicities() {
        // (z−1)²(z+2)³ z
        let f = Poly::from_ints(Q, &[-1, 1]).pow(2) * Poly::from_ints(Q, &[2, 1]).pow(3) * Poly::z(Q);
        assert_eq!(f.root_multiplicities(), vec![(1, 1), (2, 1), (3, 1)]);
        assert_eq!(f.distinct_root_count(), 3);
    }

    #[test]
    fn division_by_zero_poly() {
        assert_eq!(Poly::z(Q).div_rem(&Poly::zero(Q)).unwrap_err(), ArithError::DivisionByZero);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-9i64..9, 0..6).prop_map(|c| Poly::from_ints(QuadField::Gaussian, &c))
    }

    proptest! {
        #[test]
        fn leibniz((f, g) in (arb_poly(), arb_poly())) {
            prop_assert_eq!((&f * &g).derivative(), &(&f.derivative() * &g) + &(&f * &g.derivative()));
        }

        #[test]
        fn division_identity((f, g) in (arb_poly(), arb_poly())) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.div_rem(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.is_zero() || r.deg0() < g.deg0());
        }
    }
}
