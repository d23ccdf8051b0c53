//! Closed-form fields, maps, Jacobians and coefficient matrices.

mod coefficient;
mod domain;
mod graph;
mod profile;
mod scale;
mod signed;
mod szulkin;
mod twist;

pub use coefficient::{fit_lipschitz, graph_coefficient, graph_frame, pullback_coefficient, pullback_matrix, CoefficientMatrix};
pub use domain::{DomainKind, Side};
pub use graph::{graph_envelope, graph_jet, graph_jet_at, graph_map, graph_map_jacobian, graph_value};
pub use profile::{
    circular_distance, reduce_angle, theta_jet, AngleJet, GraphAmplitude, HermiteBlend, TwistLaw, TwistProfile,
    GRAPH_INTERPOLATION_SPEC, INTERPOLATION_SPEC,
};
pub use scale::{LogScale, MAX_RHO, MAX_THETA, PURE_RHO};
pub use signed::SignedField;
pub use szulkin::{szulkin, szulkin_gradient, szulkin_hessian, szulkin_jet, GRADIENT_ENVELOPE, HESSIAN_ENVELOPE};
pub use twist::{rotation_z, twist_angle, twist_frame, twist_map, FrameDecomposition, MapDirection};
