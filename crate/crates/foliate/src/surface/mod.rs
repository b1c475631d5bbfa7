//! Sections of the triply periodic surface by planes orthogonal to `H`: the
//! section graph, its components, traced section curves and their directions.

mod faces;
mod graph;
mod model;
mod output;
mod sample;
mod tracer;

pub use faces::{face_membership, faces_of_edge, genus_check, FaceId, GenusReport};
pub use graph::{explore_component, explore_patch, summarize_patch, ComponentSummary, GraphPatch};
pub use model::{Lattice, SurfaceModel};
pub use output::{write_components_csv, write_patch_svg, write_polyline_csv};
pub use sample::{
    angle_between, cluster_angles, model_for, sample_components, sample_model, Cluster, ClusterReport, LevelSample,
    SampleConfig, TracedCurve,
};
pub use tracer::{find_face, fit_direction, start_point, trace_section_curve, DirectionFit, Polyline};
