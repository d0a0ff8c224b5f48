use super::config::{RecoveryReport, SdpConfig};
use super::finish;
use super::oracle::ProjectionOracle;
use crate::error::{Error, Result};
use crate::linalg::{eigh, spectral_norm, SymMatrix};

const PROBE_FEASIBILITY: f64 = 1e-6;
const PROBE_IDEMPOTENCE: f64 = 1e-8;

/// Maximizes `⟨X, Σ̂⟩` over the set behind `oracle` by projected gradient
/// ascent `X ← oracle(X + ηΣ̂)` with `η = 1/(ρ‖Σ̂‖)`.
///
/// Before iterating, the oracle is probed on a few fixed inputs and must
/// return unit-trace PSD matrices that it maps to themselves.
pub fn solve_k_pca<O>(sigma_hat: &SymMatrix, oracle: &O, cfg: &SdpConfig) -> Result<RecoveryReport>
where
    O: ProjectionOracle + ?Sized,
{
    cfg.validate()?;
    sigma_hat.check_finite()?;
    validate_oracle(oracle, sigma_hat)?;
    ascend(sigma_hat, oracle, cfg)
}

/// [`solve_k_pca`] without the probes; for repeated solves against one
/// already validated oracle.
pub(crate) fn ascend<O>(sigma_hat: &SymMatrix, oracle: &O, cfg: &SdpConfig) -> Result<RecoveryReport>
where
    O: ProjectionOracle + ?Sized,
{
    let n = sigma_hat.dim();
    let mut x = oracle.project(&cfg.start(n)?)?;
    let norm = spectral_norm(sigma_hat);
    if norm == 0.0 {
        return finish(x, sigma_hat, 0, 0.0, 0.0, true, Vec::new());
    }
    let eta = 1.0 / (cfg.rho * norm);
    let mut objective = x.dot(sigma_hat);
    let mut history = vec![objective];
    let (mut step, mut change) = (f64::INFINITY, f64::INFINITY);
    let mut converged = false;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        let mut target = x.clone();
        target.axpy(eta, sigma_hat);
        let next = oracle.project(&target)?;
        let next_objective = next.dot(sigma_hat);
        step = next.frobenius_distance(&x);
        change = (next_objective - objective).abs();
        let tol_obj = cfg.tol_dual * (1.0 + objective.abs());
        x = next;
        objective = next_objective;
        history.push(objective);
        if step <= cfg.tol_primal && change <= tol_obj {
            converged = true;
            break;
        }
    }
    finish(x, sigma_hat, iters, step, change, converged, history)
}

fn validate_oracle<O>(oracle: &O, sigma_hat: &SymMatrix) -> Result<()>
where
    O: ProjectionOracle + ?Sized,
{
    let n = sigma_hat.dim();
    let probes = [
        SymMatrix::identity(n).scaled(1.0 / n as f64),
        SymMatrix::from_upper_fn(n, |i, j| ((i * 7 + j * 13) % 11) as f64 / 5.0 - 1.0),
        sigma_hat.clone(),
    ];
    for (k, probe) in probes.iter().enumerate() {
        let y = oracle.project(probe)?;
        let fail = |what: String| Err(Error::Oracle(format!("{} on probe {k}: {what}", oracle.name())));
        if y.dim() != n {
            return fail(format!("returned a {}×{} matrix", y.dim(), y.dim()));
        }
        if y.check_finite().is_err() {
            return fail("returned non-finite entries".into());
        }
        let trace = y.trace();
        if (trace - 1.0).abs() > PROBE_FEASIBILITY {
            return fail(format!("trace {trace} is not 1"));
        }
        let lambda_min = *eigh(&y)?.values().last().unwrap_or(&0.0);
        if lambda_min < -PROBE_FEASIBILITY {
            return fail(format!("not PSD, λ_min = {lambda_min:e}"));
        }
        let moved = oracle.project(&y)?.frobenius_distance(&y);
        if moved > PROBE_IDEMPOTENCE {
            return fail(format!("not idempotent, moved {moved:e}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::oracle::{L1Ball, Singleton, Spectrahedron};

    #[test]
    fn rejects_non_unit_trace_oracle() {
        let a = SymMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let err = solve_k_pca(&a, &L1Ball { radius: 5.0 }, &SdpConfig::new(3.0)).unwrap_err();
        assert!(matches!(err, Error::Oracle(_)));
    }

    #[test]
    fn rejects_non_idempotent_oracle() {
        let bad = |a: &SymMatrix| -> Result<SymMatrix> {
            let y = crate::linalg::project_psd_trace1(a)?;
            let n = y.dim();
            Ok(SymMatrix::from_upper_fn(n, |i, j| y.get((i + 1) % n, (j + 1) % n)))
        };
        let a = SymMatrix::from_diag(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            solve_k_pca(&a, &bad, &SdpConfig::new(3.0)),
            Err(Error::Oracle(_))
        ));
    }

    #[test]
    fn spectrahedron_finds_top_projector() {
        let a = SymMatrix::from_diag(&[0.5, 2.0, 1.0]);
        let report = solve_k_pca(&a, &Spectrahedron, &SdpConfig::new(3.0)).unwrap();
        assert!(report.converged);
        assert!(report.x_hat_matrix.frobenius_distance(&SymMatrix::from_diag(&[0.0, 1.0, 0.0])) < 1e-10);
        assert!(report.objective_history.windows(2).all(|w| w[1] >= w[0] - 1e-10));
    }

    #[test]
    fn singleton_returns_its_point() {
        let p = SymMatrix::from_diag(&[0.25, 0.75]);
        let a = SymMatrix::from_diag(&[3.0, -1.0]);
        let report = solve_k_pca(&a, &Singleton(p.clone()), &SdpConfig::new(2.0)).unwrap();
        assert_eq!(report.x_hat_matrix, p);
        assert_eq!(report.objective, 0.0);
    }
}
