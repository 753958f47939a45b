//! Potentials, droplets, skeleton curves and boundary normals.

pub mod curves;
pub mod params;
pub mod potentials;

pub use curves::{
    inside_sa, outside_s1, outside_sa, outside_sad, point_in_polygon, skeleton_residual, trace_curve, Curve,
    CurveComponent, CurveSample,
};
pub use params::EnsembleParams;
pub use potentials::{boundary_normal, in_droplet, laplacian_v, potential_qc, potential_v, potential_vc};
