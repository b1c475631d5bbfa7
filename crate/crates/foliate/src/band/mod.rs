//! Band complexes over exact rationals: free arcs, collapses, the families
//! `Z(w)` and `Z(w, l)`, the Rips step, isomorphism, symmetry, area and rank.

mod complex;
mod families;
mod json;
mod ops;

pub use complex::{q, qi, Band, BandComplex, Interval, MultiInterval, Q};
pub use families::{contract_band, make_z3, make_z4, recognize_z4, rips_step, z4_area, RipsStep};
pub use json::{format_decimal, format_exact, parse_number};
pub use ops::{
    collapse, complex_area, free_arcs, is_isomorphic, is_symmetric, merge_seams, rank_estimate, FreeArc,
    RankEstimate,
};

use crate::numerics::Scalar;

/// Rational stand-in for a certified scalar (its midpoint).
pub fn rational_of(x: &Scalar) -> Q {
    x.mid().to_rational()
}
