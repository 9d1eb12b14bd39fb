//! Canonical heights, canonical metrics and canonical measures of rational
//! maps on the projective line.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact arithmetic in ℚ, ℚ(i) and ℚ(√−3), including the
//!   Euclidean rings ℤ[i] and ℤ[ρ].
//! * [`poly`] and [`map`]: dense polynomials and rational self-maps of ℙ¹
//!   with exact composition, equality and preimage counting.
//! * [`heights`]: naive heights and canonical heights computed as Tate
//!   limits with explicit error bounds.
//! * [`lattes`]: CM elliptic curves, their Lattès quotient maps and the
//!   ramification of those maps over the 2-torsion.
//! * [`measures`]: Green's functions, canonical measures, preimage
//!   equidistribution, periodic points and raster output.
//! * [`cli`]: the command-line front end.

pub mod arith;
pub mod cli;
pub mod heights;
pub mod lattes;
pub mod map;
pub mod mapfile;
pub mod measures;
pub mod poly;

mod error;

pub use arith::{integral_gcd, BigRational, IntegralElement, QuadElem, QuadField};
pub use error::Error;
pub use map::{ProjPoint, RationalMap};
pub use poly::Poly;
