//! Desk-scale laboratory for symmetric-gradient power-law systems.
//!
//! The crate has five layers:
//!
//! * [`orlicz`] — scalar nonlinearity laws `t ↦ a(t)` (pure power,
//!   regularized pinch, Carreau), their Young functions and conjugates,
//!   index estimates, and an inequality battery;
//! * [`tensorfields`] — exact differential calculus on multivariate
//!   polynomial vector fields (gradients, symmetric gradients, Hessians)
//!   and the structural identities connecting them;
//! * [`identities`] — pointwise identities and reduced inequalities for
//!   derivatives of the stress tensor, the 2-d quadratic-form claim, and
//!   the admissible exponent thresholds per dimension;
//! * [`solver`] — a structured-grid multilinear finite element solver for
//!   the regularized Dirichlet problem, with Newton iteration and pinch
//!   continuation;
//! * [`probe`] — stress-field Sobolev norms on balls, the singular
//!   threshold scan, Nikolskii seminorms, and Korn/Poincare ratio checks.
//!
//! All numerics are generic over the scalar type via [`scalar::Real`];
//! the aliases below fix `f64` for ordinary use.

pub mod error;
pub mod identities;
pub mod linalg;
pub mod orlicz;
pub mod probe;
pub mod quad;
pub mod report;
pub mod scalar;
pub mod solver;
pub mod tensorfields;

pub use error::{Error, Result};

/// Default scalar for applications.
pub type Scalar = f64;

pub type Law = orlicz::NonlinearityLaw<Scalar>;
pub type Mat = linalg::Matrix<Scalar>;
pub type Poly = tensorfields::Polynomial<Scalar>;
pub type VectorField = tensorfields::PolyVectorField<Scalar>;
pub type Sample = tensorfields::TensorSample<Scalar>;
pub type Grid = solver::StructuredGrid<Scalar>;
pub type Field = solver::DiscreteVectorField<Scalar>;
