use super::config::{RecoveryReport, SdpConfig};
use super::kpca::solve_k_pca;
use super::oracle::ProjectionOracle;
use super::sdp::solve_sparse_pca;
use crate::error::{Error, Result};
use crate::estimator::{check_assumptions, reweighted_covariance, MomentReport};
use crate::linalg::SymMatrix;
use crate::model::{Distribution, LinkFunction, MeasurementSet, Signal};

/// Fills `error_up_to_sign` and `frobenius_error` against the truth.
pub fn attach_truth(report: &mut RecoveryReport, truth: &Signal) -> Result<()> {
    let n = report.x_hat.len();
    if truth.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: truth.dim(),
        });
    }
    report.error_up_to_sign = Some(truth.error_up_to_sign(&report.x_hat));
    report.frobenius_error = Some(report.x_hat_matrix.frobenius_distance(&truth.outer()));
    Ok(())
}

/// Reweighted covariance, sparse-PCA relaxation, leading eigenvector.
pub fn recover(data: &MeasurementSet, cfg: &SdpConfig, truth: Option<&Signal>) -> Result<RecoveryReport> {
    recover_from_covariance(&reweighted_covariance(data), cfg, truth)
}

/// [`recover`] starting from a given covariance, e.g. a population one.
pub fn recover_from_covariance(
    sigma_hat: &SymMatrix,
    cfg: &SdpConfig,
    truth: Option<&Signal>,
) -> Result<RecoveryReport> {
    let mut report = solve_sparse_pca(sigma_hat, cfg)?;
    if let Some(t) = truth {
        attach_truth(&mut report, t)?;
    }
    Ok(report)
}

/// Recovery over the constraint set behind `oracle`.
pub fn recover_k_pca<O>(
    data: &MeasurementSet,
    oracle: &O,
    cfg: &SdpConfig,
    truth: Option<&Signal>,
) -> Result<RecoveryReport>
where
    O: ProjectionOracle + ?Sized,
{
    let mut report = solve_k_pca(&reweighted_covariance(data), oracle, cfg)?;
    if let Some(t) = truth {
        attach_truth(&mut report, t)?;
    }
    Ok(report)
}

/// [`recover`] with the assumption verdict for `(link, dist, s)` attached.
/// The solver runs whatever the verdict says.
#[allow(clippy::too_many_arguments)]
pub fn recover_with_verdict(
    data: &MeasurementSet,
    cfg: &SdpConfig,
    truth: Option<&Signal>,
    moments: &MomentReport,
    link: &LinkFunction,
    dist: &Distribution,
    s: usize,
    seed: u64,
) -> Result<RecoveryReport> {
    let mut report = recover(data, cfg, truth)?;
    report.verdict = Some(check_assumptions(moments, link, dist, s, seed)?);
    Ok(report)
}
