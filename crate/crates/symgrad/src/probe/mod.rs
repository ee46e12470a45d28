//! Measurement layer: stress projections, ball norms, the empirical local
//! estimate, the singular threshold scan, translation seminorms, and Korn
//! ratio checks.

mod estimate;
mod korn;
mod nikolskii;
mod region;
mod stress;
mod threshold;

pub use estimate::{
    estimate_ratio, estimate_stability_sweep, smooth_benchmark_field, EstimateRatio,
    EstimateRow,
};
pub use korn::{
    korn_poincare_ratios, random_zero_boundary_field, ratios_for_field, KornReport,
};
pub use nikolskii::{
    embedding_ratio, nikolskii_alpha, nikolskii_seminorm, NikolskiiNorm, ShiftRecord,
};
pub use region::{ball_norms, masked_l2_of_fn, BallNorms, BallRegion};
pub use stress::{
    strain_nodal_field, stress_project_analytic, stress_project_discrete, StressField,
};
pub use threshold::{
    shear_threshold_analytic, singular_threshold_scan, ThresholdClass, ThresholdRow,
    ThresholdScan, DIVERGENCE_GROWTH_FACTOR,
};
