//! Thin band complexes, the cone-contraction width solver, a 9-interval
//! exchange with its renormalization cocycle, and plane sections of the
//! `{4,6|4}` skew polyhedron.

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub mod band;
pub mod cone;
pub mod iet;
pub mod surface;
pub mod cli;
