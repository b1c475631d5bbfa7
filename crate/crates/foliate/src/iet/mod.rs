//! The nine-interval exchange on three transversals, its renormalization and
//! the cone of invariant measures.

mod ergodic;
mod exchange;
mod orbit;
mod rauzy;
mod renorm;
mod stage;

pub use ergodic::{ergodic_cone, ErgodicCone};
pub use exchange::{BlockPermutation, Iet, Point};
pub use orbit::{equidistribution_test, orbit, write_orbit_csv, EquidistributionReport, OrbitStep};
pub use rauzy::{
    rauzy_composite, rauzy_matches, schedule, x_from_w_exact, RauzyMove, RauzyOp, RauzyRun, RauzyState,
    FINAL_RELABEL,
};
pub use renorm::{
    check_v, in_v_exact, mat_r, mat_r_big, renormalize_check, split_r, transversal_integrals, u_inf, v_basis,
    v_inf, VCheck,
};
pub use stage::{x_from_w, IetStage};
