//! Map files: a JSON object naming the field and listing numerator and
//! denominator coefficients, lowest degree first, as coefficient strings.
//!
//! ```json
//! {"field": {"d": 1}, "num": ["1", "0", "1"], "den": ["0", "2*w"]}
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_coefficient, ParseError, QuadField};
use crate::map::{MapError, RationalMap};
use crate::poly::Poly;

/// Which coefficient list a parse error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Num,
    Den,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Num => "num",
            Side::Den => "den",
        })
    }
}

#[derive(Debug, Error)]
pub enum MapFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed map file at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("unsupported field d = {0} (expected 0, 1 or 3)")]
    Field(u32),
    #[error("{side}[{index}]: {source}")]
    Coefficient { side: Side, index: usize, source: ParseError },
    #[error("{side} has no coefficients")]
    Empty { side: Side },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldTag {
    d: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    field: FieldTag,
    num: Vec<String>,
    den: Vec<String>,
}

fn parse_side(field: QuadField, side: Side, items: &[String]) -> Result<Poly, MapFileError> {
    if items.is_empty() {
        return Err(MapFileError::Empty { side });
    }
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(index, s)| parse_coefficient(s, field).map_err(|source| MapFileError::Coefficient { side, index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(field, coeffs).expect("coefficients parsed in one field"))
}

/// Parses the JSON text of a map file.
pub fn parse_map(text: &str) -> Result<RationalMap, MapFileError> {
    let doc: MapDoc = serde_json::from_str(text).map_err(|e| MapFileError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = QuadField::from_d(doc.field.d).map_err(|_| MapFileError::Field(doc.field.d))?;
    let num = parse_side(field, Side::Num, &doc.num)?;
    let den = parse_side(field, Side::Den, &doc.den)?;
    Ok(RationalMap::normalize(num, den)?)
}

pub fn read_map(path: &Path) -> Result<RationalMap, MapFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| MapFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_map(&text)
}

/// The map file for `map`, in normalized form. [`parse_map`] reads it back
/// to an equal map.
pub fn map_to_json(map: &RationalMap) -> String {
    let side = |p: &Poly| p.coeffs().iter().map(|c| c.to_string()).collect();
    let doc = MapDoc {
        field: FieldTag { d: map.field().d() },
        num: side(map.num()),
        den: side(map.den()),
    };
    serde_json::to_string(&doc).expect("map file serializes")
}
