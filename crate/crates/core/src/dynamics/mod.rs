//! Hamiltonian and geodesic flows, with invariant bookkeeping.

mod flows;
mod geodesic;
mod ode;
mod trajectory;

pub use flows::{first_integral, geodesic_flow, hamilton_flow, standoff, GeodesicStart, GEODESIC_FIELDS, STANDOFF};
pub use geodesic::{
    closed_form_residual, fit_closed_form, flat_residual, has_closed_form, velocity_identity_residual, GeodesicClosedForm,
};
pub use ode::{integrate, Control, FlowOptions, Method, State, StepStats};
pub use trajectory::{drift_report, format_real, Drift, FlowStatus, Sample, Trajectory};
