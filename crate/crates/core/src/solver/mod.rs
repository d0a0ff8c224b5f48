//! Sparse-PCA semidefinite relaxation, its generalization to an arbitrary
//! convex set of unit-trace PSD matrices, and the recovery pipelines built
//! on them.

mod config;
mod kpca;
mod oracle;
mod pipeline;
mod sdp;
mod width;

pub use config::{RecoveryReport, SdpConfig, REPORT_CSV_HEADER};
pub use kpca::solve_k_pca;
pub use oracle::{Dykstra, DYKSTRA_MAX_CYCLES, DYKSTRA_TOL, L1Ball, ProjectionOracle, Segment, Singleton, SparseSpectrahedron, Spectrahedron, SPARSE_SPECTRAHEDRON_TOL};
pub use pipeline::{attach_truth, recover, recover_from_covariance, recover_k_pca, recover_with_verdict};
pub use sdp::solve_sparse_pca;
pub use width::{estimate_gaussian_width, WidthEstimate};

use crate::error::Result;
use crate::linalg::{eigh, leading_from, SymMatrix};

fn finish(
    x_hat_matrix: SymMatrix,
    sigma_hat: &SymMatrix,
    iters: usize,
    primal_residual: f64,
    dual_residual: f64,
    converged: bool,
    objective_history: Vec<f64>,
) -> Result<RecoveryReport> {
    let lead = if x_hat_matrix.max_abs() == 0.0 {
        crate::linalg::leading_eigenvector(&x_hat_matrix)?
    } else {
        leading_from(&eigh(&x_hat_matrix)?)
    };
    Ok(RecoveryReport {
        objective: x_hat_matrix.dot(sigma_hat),
        x_hat: lead.vector,
        x_hat_matrix,
        iters,
        primal_residual,
        dual_residual,
        converged,
        degenerate: lead.degenerate,
        eigengap: lead.gap,
        error_up_to_sign: None,
        frobenius_error: None,
        verdict: None,
        objective_history,
    })
}
