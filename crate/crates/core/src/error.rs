use thiserror::Error;

use crate::arith::{ArithError, ParseError};
use crate::heights::HeightError;
use crate::lattes::LattesError;
use crate::map::MapError;
use crate::mapfile::MapFileError;
use crate::measures::MeasureError;

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Lattes(#[from] LattesError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    MapFile(#[from] MapFileError),
}
