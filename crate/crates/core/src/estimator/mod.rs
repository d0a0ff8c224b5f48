//! Reweighted sample covariance, its population counterparts, and the
//! moment functionals that control the size of the spike.

mod covariance;
mod moments;
mod verdict;

pub use covariance::{
    population_covariance_gaussian, population_covariance_subgaussian, reweighted_covariance,
};
pub use moments::{
    estimate_moments_gaussian, estimate_moments_subgaussian, monte_carlo_moments_gaussian,
    MomentMethod, MomentMode, MomentReport, DEFAULT_MC_SAMPLES, ENUMERATION_BUDGET,
    MIN_MC_SAMPLES,
};
pub use verdict::{check_assumptions, AssumptionVerdict, Check, MomentGrowth};
