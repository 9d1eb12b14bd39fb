//! Named maps: the displayed Lattès examples for `E₁` and `E₂`, a few maps
//! derived from division polynomials and compositions, and power maps.

use super::{lattes_double, lattes_multiply, EllipticCurveCM, LattesError};
use crate::arith::{parse_coefficient, QuadElem, QuadField};
use crate::map::RationalMap;
use crate::poly::Poly;

const MAX_POWER: u32 = 12;

/// Where a catalog map comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Transcribed coefficient for coefficient.
    Transcribed,
    /// Computed from the curve (division polynomials, automorphisms,
    /// compositions).
    Derived,
    /// `z ↦ z^k`.
    Power,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub map: RationalMap,
    /// `"E1"` or `"E2"` for Lattès maps.
    pub curve: Option<&'static str>,
    /// The multiplier the map is induced by, up to sign.
    pub lambda: Option<QuadElem>,
    /// Whether the map passes the Lattès ramification test for its curve.
    pub lattes: bool,
    pub provenance: Provenance,
    pub note: Option<&'static str>,
}

impl CatalogEntry {
    pub fn curve(&self) -> Option<EllipticCurveCM> {
        match self.curve? {
            "E1" => Some(EllipticCurveCM::e1()),
            _ => Some(EllipticCurveCM::e2()),
        }
    }
}

fn q(field: QuadField, s: &str) -> QuadElem {
    parse_coefficient(s, field).expect("catalog literal")
}

fn poly(field: QuadField, cs: &[&str]) -> Poly {
    Poly::new(field, cs.iter().map(|s| q(field, s)).collect()).expect("catalog literal")
}

fn map(num: Poly, den: Poly) -> RationalMap {
    RationalMap::normalize(num, den).expect("catalog map")
}

/// `c·z·(z² + s)² / (5z² + t)²` over ℚ(i).
fn quintic(c: &str, s: &str, t: &str) -> RationalMap {
    let g = QuadField::Gaussian;
    let inner = poly(g, &[s, "0", "1"]);
    let num = &(&inner * &inner) * &poly(g, &["0", c]);
    let outer = poly(g, &[t, "0", "5"]);
    map(num, &outer * &outer)
}

fn lattes_entry(
    name: &str,
    map: RationalMap,
    curve: &'static str,
    lambda: &str,
    provenance: Provenance,
    lattes: bool,
    note: Option<&'static str>,
) -> CatalogEntry {
    let field = map.field();
    CatalogEntry {
        name: name.to_string(),
        lambda: Some(q(field, lambda)),
        map,
        curve: Some(curve),
        lattes,
        provenance,
        note,
    }
}

/// Every named map, in listing order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    use Provenance::*;
    let g = QuadField::Gaussian;
    let e = QuadField::Eisenstein;
    let e1 = EllipticCurveCM::e1();
    let e2 = EllipticCurveCM::e2();

    let phi_1pi = map(poly(g, &["1", "0", "1"]).scale(&q(g, "1+w").pow(2).inv().expect("unit")), poly(g, &["0", "1"]));
    let phi_1mi = phi_1pi.scale_output(&q(g, "-1")).expect("nonzero");
    let q_num = poly(e, &["4", "0", "0", "1"]);
    let phi_sqrt3 = map(q_num.scale(&q(e, "-1")), poly(e, &["0", "0", "3"]));
    let rho = QuadElem::rho();
    let phi_sqrt3_rho_printed = map(q_num.scale(&-rho.clone()), poly(e, &["0", "0", "3"]));
    let eps_num = Poly::from_ints(e, &[64, 0, 0, 48, 0, 0, -96, 0, 0, 1]);
    let eps_den = &Poly::monomial(&rho * &QuadElem::from_int(e, 9), 2) * &q_num.pow(2);
    let phi_eps = map(eps_num, eps_den);
    let phi_sqrt3_rho = phi_sqrt3.scale_output(&-rho.clone()).expect("nonzero");
    let phi_3_e2 = lattes_multiply(&e2, 3).expect("n ≥ 1");
    let phi_m3_rho = phi_3_e2.scale_output(&-rho).expect("nonzero");

    let mut out = vec![
        lattes_entry("phi_1+i", phi_1pi, "E1", "1+w", Transcribed, true, None),
        lattes_entry("phi_1-i", phi_1mi, "E1", "1-w", Transcribed, true, None),
        lattes_entry("phi_2@E1", lattes_double(&e1), "E1", "2", Transcribed, true, None),
        lattes_entry("phi_1+2i", quintic("-3-4*w", "1+2*w", "1-2*w"), "E1", "1+2*w", Transcribed, true, None),
        lattes_entry(
            "phi_1-2i",
            quintic("3+4*w", "1+2*w", "1-2*w"),
            "E1",
            "2-w",
            Transcribed,
            true,
            Some("equals -phi_1+2i, the map of i·(1+2i) ~ 2-i"),
        ),
        lattes_entry("phi_2+i", quintic("3-4*w", "1-2*w", "1+2*w"), "E1", "2+w", Transcribed, true, None),
        lattes_entry(
            "phi_2-i",
            quintic("-3+4*w", "1-2*w", "1+2*w"),
            "E1",
            "1-2*w",
            Transcribed,
            true,
            Some("coefficient conjugate of phi_1+2i, the map of 1-2i"),
        ),
        lattes_entry("phi_3@E1", lattes_multiply(&e1, 3).expect("n ≥ 1"), "E1", "3", Derived, true, None),
        lattes_entry("phi_sqrt-3", phi_sqrt3, "E2", "w", Transcribed, true, None),
        lattes_entry(
            "phi_sqrt-3*rho",
            phi_sqrt3_rho_printed,
            "E2",
            "3/2+1/2*w",
            Transcribed,
            false,
            Some("as printed; its critical values are not all 2-torsion images, see phi_sqrt-3*rho@E2"),
        ),
        lattes_entry(
            "phi_eps",
            phi_eps,
            "E2",
            "3/2-3/2*w",
            Transcribed,
            false,
            Some("as printed; equals conj(rho)·phi_3@E2 and is not a Lattès map of E2"),
        ),
        lattes_entry("phi_2@E2", lattes_double(&e2), "E2", "2", Derived, true, None),
        lattes_entry("phi_3@E2", phi_3_e2, "E2", "3", Derived, true, Some("equals phi_sqrt-3 ∘ phi_sqrt-3")),
        lattes_entry(
            "phi_sqrt-3*rho@E2",
            phi_sqrt3_rho,
            "E2",
            "3/2+1/2*w",
            Derived,
            true,
            Some("phi_sqrt-3 followed by the automorphism z ↦ -rho·z"),
        ),
        lattes_entry(
            "phi_-3*rho@E2",
            phi_m3_rho,
            "E2",
            "-3/2-3/2*w",
            Derived,
            true,
            Some("phi_sqrt-3 ∘ phi_sqrt-3*rho@E2"),
        ),
    ];
    for k in 2..=MAX_POWER {
        out.push(CatalogEntry {
            name: format!("pow_{k}"),
            map: RationalMap::power(QuadField::Rational, k).expect("k ≥ 1"),
            curve: None,
            lambda: None,
            lattes: false,
            provenance: Power,
            note: None,
        });
    }
    out
}

/// Accepts the Unicode spellings `−` and `·` as well as `-` and `*`.
fn canonical_name(name: &str) -> String {
    name.trim().replace('−', "-").replace('·', "*").replace('√', "sqrt")
}

pub fn catalog_names() -> Vec<String> {
    catalog_entries().into_iter().map(|e| e.name).collect()
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry, LattesError> {
    let wanted = canonical_name(name);
    let entries = catalog_entries();
    let valid: Vec<String> = entries.iter().map(|e| e.name.clone()).collect();
    entries
        .into_iter()
        .find(|e| e.name == wanted)
        .ok_or(LattesError::UnknownName { name: name.to_string(), valid })
}

/// The map with the given catalog name.
pub fn catalog(name: &str) -> Result<RationalMap, LattesError> {
    Ok(catalog_entry(name)?.map)
}

/// A Lattès map for multiplication by `lambda` on `curve`: a catalog map
/// whose multiplier is `±lambda`, or the division-polynomial map when
/// `lambda` is a rational integer.
pub fn for_lambda(curve: &EllipticCurveCM, lambda: &QuadElem) -> Result<RationalMap, LattesError> {
    let field = curve.field();
    let lambda = lambda.embed(field).map_err(|_| LattesError::LambdaField {
        lambda: lambda.to_string(),
        lambda_field: lambda.field(),
        curve_field: field,
    })?;
    let neg = -lambda.clone();
    let found = catalog_entries().into_iter().find(|e| {
        e.lattes
            && e.map.field() == field
            && e.curve().is_some_and(|c| c.g() == curve.g())
            && e.lambda.as_ref().is_some_and(|l| *l == lambda || *l == neg)
    });
    if let Some(e) = found {
        return Ok(e.map);
    }
    if lambda.is_rational() && lambda.re_part().is_integer() {
        let n = lambda.re_part().to_integer();
        let n: u32 = n.magnitude().try_into().map_err(|_| LattesError::NoMapForLambda(lambda.to_string()))?;
        if n >= 1 && n <= 64 {
            return lattes_multiply(curve, n);
        }
    }
    Err(LattesError::NoMapForLambda(lambda.to_string()))
}
