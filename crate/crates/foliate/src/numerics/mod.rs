//! Certified scalars, exact integer matrices, Hilbert projective distance and
//! bounded integer-relation search.

mod dyadic;
mod hilbert;
mod matrix;
mod relation;
mod scalar;

pub use dyadic::{Dyadic, Round};
pub use hilbert::{hilbert_diameter, hilbert_distance};
pub use matrix::{IMatrix, Matrix};
pub use relation::integer_relation;
pub use scalar::{parse_decimal_rational, refine, tribonacci, Scalar, DEFAULT_PRECISION};
