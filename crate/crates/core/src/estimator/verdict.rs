use serde::Serialize;

use super::moments::{response_norms, MomentReport};
use crate::error::{invalid, Result};
use crate::model::{Distribution, LinkFunction};

const ROUNDOFF: f64 = 1e-12;
const GROWTH_SAMPLES: usize = 200_000;
const GROWTH_ORDERS: [i32; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub estimate: f64,
    /// Estimate moved 3 standard errors against the claim.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentGrowth {
    pub p: i32,
    /// `(E|f|ᵖ)^{1/p}`.
    pub norm: f64,
    /// `C·p` with `C` calibrated as the `p = 1` norm.
    pub bound: f64,
}

/// Verdict on the correlation assumptions for one `(link, law, s)`.
///
/// The ψ₁ entries only compare empirical moment growth against linear
/// growth in `p`; a ψ₁ norm cannot be certified from finitely many draws,
/// so they are a heuristic and never gate the solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionVerdict {
    pub mu_positive: Check,
    pub sigma_nonpositive: Option<Check>,
    pub psi1_moment_growth: Vec<MomentGrowth>,
    pub psi1_growth_linear: bool,
}

pub fn check_assumptions(
    report: &MomentReport,
    link: &LinkFunction,
    dist: &Distribution,
    s: usize,
    seed: u64,
) -> Result<AssumptionVerdict> {
    if !report.mu.is_finite() || report.sigma.is_some_and(|v| !v.is_finite()) {
        return invalid("moment report contains non-finite values");
    }
    let mu_margin = report.mu - 3.0 * report.mu_stderr();
    let mu_positive = Check {
        holds: mu_margin > ROUNDOFF,
        estimate: report.mu,
        margin: mu_margin,
    };
    let sigma_nonpositive = report.sigma.map(|sigma| {
        let margin = sigma + 3.0 * report.sigma_stderr();
        Check {
            holds: margin <= ROUNDOFF,
            estimate: sigma,
            margin,
        }
    });

    let norms = response_norms(link, dist, s, &GROWTH_ORDERS, GROWTH_SAMPLES, seed);
    let c = norms[0];
    let psi1_moment_growth: Vec<MomentGrowth> = GROWTH_ORDERS
        .iter()
        .zip(&norms)
        .map(|(&p, &norm)| MomentGrowth {
            p,
            norm,
            bound: c * p as f64,
        })
        .collect();
    let psi1_growth_linear = psi1_moment_growth
        .iter()
        .all(|g| g.norm <= g.bound * (1.0 + 1e-9) + ROUNDOFF);

    if link.declares_positive_correlation() && !mu_positive.holds {
        log::warn!(
            "link {} is declared positively correlated but μ = {:.4e} (margin {:.4e})",
            link.tag(),
            report.mu,
            mu_margin
        );
    }
    if let LinkFunction::Custom(custom) = link {
        if !custom.positive_correlation && mu_positive.holds {
            log::warn!(
                "link {} is declared without positive correlation, yet μ = {:.4e} > 0",
                link.tag(),
                report.mu
            );
        }
    }

    Ok(AssumptionVerdict {
        mu_positive,
        sigma_nonpositive,
        psi1_moment_growth,
        psi1_growth_linear,
    })
}
