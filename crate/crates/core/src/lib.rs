//! One-stage recovery of a structured signal from misspecified
//! phase-retrieval measurements `y = f(⟨a, x*⟩)`.
//!
//! The pipeline forms the reweighted covariance `Σ̂ = (1/m) Σ yᵢ (aᵢaᵢᵀ − I)`,
//! solves the sparse-PCA semidefinite relaxation
//! `max ⟨X, Σ̂⟩ s.t. X ⪰ 0, Tr X = 1, ‖X‖₁ ≤ s`, and returns the leading
//! eigenvector of the solution. The same pipeline accepts an arbitrary convex
//! constraint set through a projection oracle.

pub mod error;
pub mod estimator;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::SymMatrix;
