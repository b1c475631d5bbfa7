//! The matrix families `A(k)`, `B(k)`, `B'(k,l,m)`, `B''`, k-sequences, the
//! nested-cone width solver, the length recursion, area certificates and the
//! map from widths to the plane normal `H`.

mod kseq;
mod matrices;
mod solver;

pub use kseq::KSequence;
pub use matrices::{mat_a, mat_a_big, mat_b, mat_b_big, mat_bpp, mat_bprime, mat_c};
pub use solver::{
    area_sequence, h_from_w, lengths_recursion, solve_widths, AreaCertificate, AreaSequence, StageCheck,
    WidthSolution, SEED_MARGIN,
};
