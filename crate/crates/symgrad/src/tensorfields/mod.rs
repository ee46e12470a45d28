//! Exact differential calculus on polynomial vector fields: gradients,
//! symmetric gradients, Hessians, and the structural identities tying them
//! together.

mod checks;
mod field;
mod poly;

pub use checks::{
    check_comparability, hessian_from_sym, strain_identity_residual, strain_linearity_defect,
    sym_laplacian, sym_laplacian_routes, ComparabilityRatios,
};
pub use field::{FieldJets, PolyVectorField, TensorSample, MAX_DIM, MIN_DIM};
pub use poly::{Coeff, Polynomial};
