//! Coordinate-level verification of cosymplectic geometry: structures,
//! groupoids, actions, reduction, and Morita bimodules.

pub mod action;
pub mod cosymplectic;
pub mod error;
pub mod exterior;
pub mod fixtures;
pub mod gallery;
pub mod group;
pub mod groupoid;
pub mod manifest;
pub mod morita;
pub mod mutate;
pub mod reduction;
pub mod report;
pub mod residual;
pub mod submanifold;
pub mod symbolic;
pub mod testdata;

pub use error::{Error, Result};
