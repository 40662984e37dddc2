//! Charts, differential forms, vector fields and smooth maps.

pub mod chart;
pub mod field;
pub mod form;
pub mod map;

pub use chart::{Chart, ChartRef};
pub use field::VectorField;
pub use form::DifferentialForm;
pub use map::SmoothMap;

use crate::symbolic::SymbolicError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExteriorError {
    #[error("chart mismatch: expected `{expected}`, found `{found}`")]
    ChartMismatch { expected: String, found: String },
    #[error("unknown coordinate `{coord}` in chart `{chart}`")]
    UnknownCoordinate { chart: String, coord: String },
    #[error("duplicate coordinate `{coord}` in `{chart}`")]
    DuplicateCoordinate { chart: String, coord: String },
    #[error("invalid coordinate name `{0}`")]
    InvalidName(String),
    #[error("{what}: expected {expected} components, found {found}")]
    Arity {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("map {map}: component `{component}` uses `{var}`, which is not a source coordinate")]
    FreeVariable {
        map: String,
        component: String,
        var: String,
    },
    #[error("map {map}: no expression for target coordinate `{component}`")]
    MissingComponent { map: String, component: String },
    #[error("degree error: {0}")]
    Degree(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
