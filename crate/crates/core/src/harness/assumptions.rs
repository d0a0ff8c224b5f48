use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{
    check_assumptions, estimate_moments_gaussian, estimate_moments_subgaussian, AssumptionVerdict,
    MomentMode, MomentReport, DEFAULT_MC_SAMPLES,
};
use crate::model::{Distribution, LinkFunction};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub moments: MomentReport,
    pub verdict: AssumptionVerdict,
}

impl AssumptionReport {
    /// Process exit code for scripted gating: 0 iff `μ > 0` is established.
    pub fn exit_code(&self) -> i32 {
        if self.verdict.mu_positive.holds {
            0
        } else {
            1
        }
    }
}

/// Moments of `(link, dist, s)` by the most exact method available
/// (closed form, then enumeration, then Monte-Carlo) and the verdict on them.
pub fn moments_auto(link: &LinkFunction, dist: &Distribution, s: usize, seed: u64) -> Result<MomentReport> {
    if dist.is_gaussian() {
        return estimate_moments_gaussian(link, DEFAULT_MC_SAMPLES, seed);
    }
    let mc = MomentMode::MonteCarlo {
        samples: DEFAULT_MC_SAMPLES,
    };
    if dist.finite_support().is_some() {
        match estimate_moments_subgaussian(link, dist, s, MomentMode::Enumeration, seed) {
            Err(Error::EnumerationBudget { required, .. }) => {
                log::info!("enumeration needs {required:e} tuples; falling back to Monte-Carlo");
            }
            other => return other,
        }
    }
    estimate_moments_subgaussian(link, dist, s, mc, seed)
}

pub fn report_assumptions(
    link: &LinkFunction,
    dist: &Distribution,
    s: usize,
    seed: u64,
) -> Result<AssumptionReport> {
    let moments = moments_auto(link, dist, s, seed)?;
    let verdict = check_assumptions(&moments, link, dist, s, seed)?;
    Ok(AssumptionReport { moments, verdict })
}
