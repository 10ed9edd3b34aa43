//! Pinnings, the recursive flow coefficients phi, transport flows and their congestion,
//! and exhaustive checks of the lemmas that bound them.

#![forbid(unsafe_code)]

pub mod averages;
pub mod error;
pub mod lemmas;
pub mod msf;
pub mod phi;
pub mod pinning;
pub mod transport;

pub use error::FlowError;
pub use lemmas::LemmaReport;
pub use msf::{msf_decomposition_check, Composition, MsfProblem};
pub use phi::{aggregate_flow, build_flow_function, phi_edge, FlowCoefficientTable, FlowContext, FlowFunction};
pub use pinning::{all_pinnings, eta_xy, pinning_depth_of_edge, validate_pinning, Pinning, PinningIndex, Side};
pub use transport::{
    check_st_axioms, congestion, congestion_of_flow, flow_to_transport, normalize_one_direction,
    verify_boundary_transport, verify_transport_inequality, CongestionReport, EdgeFlow, TransportFlow,
    WeightedPath,
};
