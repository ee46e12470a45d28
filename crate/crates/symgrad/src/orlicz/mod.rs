//! Scalar nonlinearity laws, the Young functions they induce, and the
//! inequality battery for the regularized family.

mod battery;
mod law;
mod young;

pub use battery::{
    convergence_battery, envelope_battery, estimate_indices, law_battery, log_grid,
    section_battery, BatteryConfig, IndexEstimate,
};
pub use law::{LawKind, NonlinearityLaw, StressJacobian};
pub use young::YoungFunctionView;
