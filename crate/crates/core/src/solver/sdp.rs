use super::config::{RecoveryReport, SdpConfig};
use super::finish;
use super::oracle::{ProjectionOracle, SparseSpectrahedron};
use crate::error::Result;
use crate::linalg::{project_l1_ball, project_psd_trace1_warm, spectral_norm, SymMatrix};

// Residual balancing: rescale ρ when one residual exceeds the other by this factor.
const BALANCE_RATIO: f64 = 10.0;
const BALANCE_STEP: f64 = 2.0;
const RHO_BOUNDS: (f64, f64) = (1e-6, 1e6);

/// Maximizes `⟨X, Σ̂⟩` over `{X ⪰ 0, Tr X = 1, ‖X‖₁ ≤ s}`.
///
/// Scaled ADMM on the splitting `X ∈ spectrahedron`, `Z ∈ ℓ1 ball`,
/// `X = Z`, with `Σ̂` normalized to unit operator norm so that `ρ` is
/// scale-free. Each iteration costs one warm-started eigendecomposition and
/// one ℓ1 projection; `ρ` adapts by residual balancing. The returned matrix
/// is the spectrahedron iterate, pushed into the ℓ1 ball by an exact
/// intersection projection when it overshoots.
///
/// Residuals in the report are measured in the normalized scale.
pub fn solve_sparse_pca(sigma_hat: &SymMatrix, cfg: &SdpConfig) -> Result<RecoveryReport> {
    cfg.validate()?;
    sigma_hat.check_finite()?;
    let n = sigma_hat.dim();
    let start = cfg.start(n)?;
    let scale = spectral_norm(sigma_hat);
    if scale == 0.0 {
        return finish(start, sigma_hat, 0, 0.0, 0.0, true, Vec::new());
    }
    let c = sigma_hat.scaled(1.0 / scale);
    let s = cfg.sparsity_radius;

    let mut rho = cfg.rho;
    let mut x = start.clone();
    let mut z = start;
    let mut u = SymMatrix::zeros(n);
    let mut hint = None;
    let (mut r, mut d) = (f64::INFINITY, f64::INFINITY);
    let mut converged = false;
    let mut iters = 0;

    while iters < cfg.max_iters {
        iters += 1;
        let mut target = &z - &u;
        target.axpy(1.0 / rho, &c);
        let (x_next, eig) = project_psd_trace1_warm(&target, hint.as_ref())?;
        hint = Some(eig);
        x = x_next;

        let z_prev = z;
        z = project_l1_ball(&(&x + &u), s)?;
        u.axpy(1.0, &x);
        u.axpy(-1.0, &z);

        r = x.frobenius_distance(&z);
        d = rho * z.frobenius_distance(&z_prev);
        if r <= cfg.tol_primal && d <= cfg.tol_dual {
            converged = true;
            break;
        }
        if r > BALANCE_RATIO * d && rho * BALANCE_STEP <= RHO_BOUNDS.1 {
            rho *= BALANCE_STEP;
            u = u.scaled(1.0 / BALANCE_STEP);
        } else if d > BALANCE_RATIO * r && rho / BALANCE_STEP >= RHO_BOUNDS.0 {
            rho /= BALANCE_STEP;
            u = u.scaled(BALANCE_STEP);
        }
    }
    log::debug!("sparse PCA ADMM: {iters} iterations, r = {r:.3e}, d = {d:.3e}, ρ = {rho}");

    if x.l1_norm() > s {
        x = SparseSpectrahedron::new(s)?.project(&x)?;
    }
    finish(x, sigma_hat, iters, r, d, converged, Vec::new())
}
