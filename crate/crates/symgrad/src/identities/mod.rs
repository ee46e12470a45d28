//! Pointwise identities and inequalities for stress-tensor derivatives,
//! the planar quadratic-form claim, and the admissible exponent thresholds.

mod drivers;
mod pointwise;
mod range;
mod reduced;

pub use drivers::{
    claim_2d_search, identity_battery, inequality_battery, lowdim_counterexample_search,
    IdentityBatteryConfig, IdentityReport,
};
pub use pointwise::{identity_residual, IdentityEval, IdentityKind};
pub use range::{admissible_range, AdmissibleRange};
pub use reduced::{
    alldim_theta_interval, claim_2d, claim_2d_coords, claim_2d_tensor, claim_matrix,
    claim_matrix_spectrum, reduced_inequality_alldim, reduced_inequality_lowdim,
    InequalitySlack, SecondOrderSample,
};
