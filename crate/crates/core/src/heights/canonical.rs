//! Canonical heights as Tate limits `lim h(φⁿP)/αⁿ`.
//!
//! Write `aₙ = h(φⁿP)/αⁿ`. Then `a_{n+1} − aₙ = (h(φQ) − α·h(Q))/α^{n+1}`
//! with `Q = φⁿP`, and the bracket lies in `[−C_lower, C_upper]`, both
//! computed from the lift. The iteration stops at the first `n` with
//! `C/(αⁿ(α − 1)) ≤ target`.
//!
//! Coordinates are kept exact (and gcd-reduced) until they exceed a bit
//! budget. From then on each step is split into its archimedean part,
//! `log max|F_i(x̂, ŷ)|` on a sup-normalized floating direction, and its
//! finite part, `−½·log N(g)` where `g = gcd(F₀, F₁)`. Since `g` divides
//! the Bezout integer `D`, it only depends on the coordinates modulo `D`,
//! so residues modulo a suitable power of `D` carry it exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};

use super::bezout::{Bezout, IntegralLift};
use super::{primitive_height, HeightError, HeightValue};
use crate::arith::{integral_gcd, IntegralElement, QuadField};
use crate::map::{ProjPoint, RationalMap};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightOptions {
    pub target_error: f64,
    /// Fail rather than iterate more than this.
    pub max_iterations: usize,
    /// Switch from exact to residue-plus-float steps once a coordinate
    /// has more bits than this.
    pub exact_bits: u64,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions { target_error: 1e-9, max_iterations: 400, exact_bits: 1 << 14 }
    }
}

/// Precomputed data for evaluating `ĥ_φ` at many points.
#[derive(Clone, Debug)]
pub struct CanonicalHeight {
    map: RationalMap,
    lift: IntegralLift,
    lift_c: [Vec<Complex64>; 2],
    d: BigInt,
    c_upper: f64,
    c_lower: f64,
}

fn complex_of(x: &IntegralElement, shift: u64) -> Complex64 {
    let (u, v) = x.basis();
    let f = |n: &BigInt| (n >> shift).to_f64().expect("at most 64 significant bits");
    let (u, v) = (f(u), f(v));
    match x.field() {
        QuadField::Rational => Complex64::new(u, 0.0),
        QuadField::Gaussian => Complex64::new(u, v),
        QuadField::Eisenstein => Complex64::new(u + v / 2.0, v * 3f64.sqrt() / 2.0),
    }
}

/// Sup-normalized floating direction of `(x : y)`.
fn direction(x: &IntegralElement, y: &IntegralElement) -> (Complex64, Complex64) {
    let shift = x.bits().max(y.bits()).saturating_sub(60);
    let (cx, cy) = (complex_of(x, shift), complex_of(y, shift));
    let s = cx.norm().max(cy.norm());
    (cx / s, cy / s)
}

fn eval_c(cs: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let alpha = cs.len() - 1;
    let mut acc = cs[alpha];
    let mut ypow = y;
    for j in (0..alpha).rev() {
        acc = acc * x + cs[j] * ypow;
        ypow *= y;
    }
    acc
}

impl CanonicalHeight {
    pub fn new(map: &RationalMap) -> Result<Self, HeightError> {
        if map.degree() < 2 {
            return Err(HeightError::DegreeTooSmall(map.degree()));
        }
        let lift = IntegralLift::new(map);
        let bezout = Bezout::new(&lift);
        Ok(CanonicalHeight {
            map: map.clone(),
            lift_c: lift.complex(),
            c_upper: lift.upper_constant(),
            c_lower: bezout.lower_constant,
            d: bezout.d,
            lift,
        })
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    /// `C` with `|h(φQ) − α·h(Q)| ≤ C` for every `Q`.
    pub fn constant(&self) -> f64 {
        self.c_upper.max(self.c_lower).max(0.0)
    }

    /// The Bezout integer `D`; `gcd(F₀(x, y), F₁(x, y))` divides it for
    /// coprime `(x, y)`.
    pub fn bezout_integer(&self) -> &BigInt {
        &self.d
    }

    fn alpha(&self) -> f64 {
        self.lift.alpha as f64
    }

    fn tail_bound(&self, n: usize) -> f64 {
        self.constant() / (self.alpha().powi(n as i32) * (self.alpha() - 1.0))
    }

    /// Iterations needed for a tail bound of at most `target`.
    pub fn iterations_for(&self, target: f64) -> usize {
        let c = self.constant();
        if c == 0.0 {
            return 0;
        }
        let n = ((c / ((self.alpha() - 1.0) * target)).ln() / self.alpha().ln()).ceil();
        n.max(0.0) as usize
    }

    fn gcd_with_d(&self, f0: &IntegralElement, f1: &IntegralElement) -> IntegralElement {
        let d = IntegralElement::from_int(f0.field(), self.d.clone());
        let g = integral_gcd(&d, &f0.mod_int(&self.d)).expect("D ≠ 0");
        integral_gcd(&g, &f1.mod_int(&self.d)).expect("D ≠ 0")
    }

    fn step_exact(&self, x: &IntegralElement, y: &IntegralElement) -> (IntegralElement, IntegralElement) {
        let f0 = self.lift.eval(0, x, y);
        let f1 = self.lift.eval(1, x, y);
        if self.d.is_one() {
            return (f0, f1);
        }
        let g = self.gcd_with_d(&f0, &f1);
        if g.is_unit() {
            (f0, f1)
        } else {
            (f0.exact_div(&g).expect("g | F₀"), f1.exact_div(&g).expect("g | F₁"))
        }
    }

    pub fn eval(&self, p: &ProjPoint, opts: &HeightOptions) -> Result<HeightValue, HeightError> {
        if !(opts.target_error.is_finite() && opts.target_error > 0.0) {
            return Err(HeightError::InvalidTarget(opts.target_error));
        }
        let p = p.in_field(self.map.field())?;
        let needed = self.iterations_for(opts.target_error);
        let n = needed.min(opts.max_iterations);
        let value = self.run(&p, n, opts.exact_bits);
        if needed > opts.max_iterations {
            return Err(HeightError::BudgetExceeded {
                needed,
                budget: opts.max_iterations,
                partial: value.value,
                error_bound: value.error_bound,
            });
        }
        Ok(value)
    }

    fn run(&self, p: &ProjPoint, n: usize, exact_bits: u64) -> HeightValue {
        let alpha = self.alpha();
        let (mut x, mut y) = p.primitive();
        let mut a = primitive_height(&x, &y);
        let mut k = 0;
        while k < n && x.bits().max(y.bits()) <= exact_bits {
            (x, y) = self.step_exact(&x, &y);
            k += 1;
            a = primitive_height(&x, &y) / alpha.powi(k as i32);
        }
        let exact_iterations = k;
        if k < n {
            a += self.hybrid_tail(&x, &y, k, n - k);
        }
        let rounding = 8.0 * f64::EPSILON * (a.abs() + self.constant() + 1.0) * (n as f64 + 1.0);
        HeightValue { value: a, iterations: n, exact_iterations, error_bound: self.tail_bound(n) + rounding }
    }

    /// `Σ_{j<steps} (h(φ^{k+j+1}P) − α·h(φ^{k+j}P)) / α^{k+j+1}`, starting
    /// from exact coordinates of `φᵏP`.
    fn hybrid_tail(&self, x: &IntegralElement, y: &IntegralElement, k: usize, steps: usize) -> f64 {
        let alpha = self.alpha();
        let (mut xf, mut yf) = direction(x, y);
        let track = !self.d.is_one();
        let mut modulus = if track { num_traits::pow(self.d.clone(), 2 * steps + 2) } else { BigInt::one() };
        let (mut xr, mut yr) = (x.mod_int(&modulus), y.mod_int(&modulus));
        let mut sum = 0.0;
        for j in 0..steps {
            let f0 = eval_c(&self.lift_c[0], xf, yf);
            let f1 = eval_c(&self.lift_c[1], xf, yf);
            let s = f0.norm().max(f1.norm());
            let mut term = s.ln();
            if track {
                let f0r = self.lift.eval(0, &xr, &yr).mod_int(&modulus);
                let f1r = self.lift.eval(1, &xr, &yr).mod_int(&modulus);
                let g = self.gcd_with_d(&f0r, &f1r);
                let norm = g.norm();
                if !norm.is_one() {
                    term -= 0.5 * super::ln_bigint(&norm);
                    let gc = g.conj();
                    xr = f0r.mul(&gc).mod_int(&modulus).div_int_exact(&norm).expect("N(g) | M");
                    yr = f1r.mul(&gc).mod_int(&modulus).div_int_exact(&norm).expect("N(g) | M");
                    modulus /= &norm;
                    xr = xr.mod_int(&modulus);
                    yr = yr.mod_int(&modulus);
                } else {
                    (xr, yr) = (f0r, f1r);
                }
            }
            sum += term / alpha.powi((k + j + 1) as i32);
            (xf, yf) = (f0 / s, f1 / s);
        }
        sum
    }
}

/// `ĥ_φ(P)` to within `target_error`. A map over ℚ is evaluated at points
/// of ℚ(i) or ℚ(√−3) by extension of scalars.
pub fn canonical_height(map: &RationalMap, p: &ProjPoint, target_error: f64) -> Result<HeightValue, HeightError> {
    let map = if map.field() == QuadField::Rational && p.field() != QuadField::Rational {
        map.in_field(p.field())?
    } else {
        map.clone()
    };
    CanonicalHeight::new(&map)?.eval(p, &HeightOptions { target_error, ..HeightOptions::default() })
}
