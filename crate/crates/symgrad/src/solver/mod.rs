//! Structured-grid finite element solver for the regularized Dirichlet
//! problem: multilinear elements, exact tangents, Newton with backtracking,
//! and pinch continuation.

mod assemble;
mod continuation;
mod field;
mod grid;
mod linsolve;
mod manufactured;
mod newton;

pub use assemble::{
    energy, gather_interior, residual, scatter_interior, tangent, DirichletProblem, DofMap,
};
pub use continuation::{
    continuation_solve, continuation_solve_from, eps_schedule, ContinuationOutcome,
    ContinuationStage,
};
pub use field::{
    nodal_spatial_fn, poly_spatial_fn, zero_spatial_fn, DiscreteVectorField, NodalField,
    SpatialFn,
};
pub use grid::{CellRule, StructuredGrid};
pub use linsolve::{BandCholesky, SymBandMatrix};
pub use manufactured::{
    convergence_study, manufactured_rhs, ConvergenceLevel, ConvergenceStudy,
};
pub use newton::{newton_solve, SolveReport, SolverConfig};
