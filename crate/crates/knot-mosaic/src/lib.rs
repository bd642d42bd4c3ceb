//! Knot mosaics: tiles, grids, local moves, space-efficient layouts,
//! diagram invariants, and survey machinery for size-7 mosaics.

pub mod invariants;
pub mod knottable;
pub mod layouts;
pub mod mosaic;
pub mod moves;
pub mod search;
pub mod tiles;

pub mod cli;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid mosaic: {0}")]
    Invalid(String),
    #[error("not a knot: {0}")]
    NotAKnot(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}
