//! Dense symmetric-matrix kernel: Jacobi eigendecomposition, the two
//! factor projections of the sparse-PCA feasible set, and leading
//! eigenvector extraction.

mod eigen;
mod project;
mod sym;

pub use eigen::{
    eigh, eigh_warm, leading_eigenvector, normalize_sign, spectral_norm, EigenDecomposition,
    LeadingEigen, DEGENERATE_GAP, MAX_SWEEPS, OFF_DIAGONAL_TOL,
};
pub(crate) use eigen::leading_from;
pub(crate) use project::project_psd_trace1_warm;
pub use project::{l1_threshold, project_l1_ball, project_psd_trace1, project_simplex};
pub use sym::SymMatrix;
