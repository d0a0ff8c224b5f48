use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{Distribution, LinkFunction, SignalKind};
use crate::solver::SdpConfig;

/// Signal family for a sweep; the sparsity comes from the grid's `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalFamily {
    #[default]
    RandomAdmissible,
    SparseGaussian,
    DenseUnit,
}

impl SignalFamily {
    pub fn kind(self, s: usize) -> SignalKind {
        match self {
            SignalFamily::RandomAdmissible => SignalKind::RandomAdmissible { sparsity: s },
            SignalFamily::SparseGaussian => SignalKind::SparseGaussian { sparsity: s },
            SignalFamily::DenseUnit => SignalKind::DenseUnit,
        }
    }
}

fn default_max_iters() -> usize {
    5000
}

fn default_tol() -> f64 {
    1e-7
}

fn default_one() -> f64 {
    1.0
}

/// Solver settings for a sweep. The ℓ1 radius of each cell is
/// `radius_scale · s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSolver {
    #[serde(default = "default_one")]
    pub radius_scale: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tol")]
    pub tol_primal: f64,
    #[serde(default = "default_tol")]
    pub tol_dual: f64,
    #[serde(default = "default_one")]
    pub rho: f64,
}

impl Default for SweepSolver {
    fn default() -> Self {
        Self {
            radius_scale: 1.0,
            max_iters: default_max_iters(),
            tol_primal: default_tol(),
            tol_dual: default_tol(),
            rho: 1.0,
        }
    }
}

impl SweepSolver {
    pub fn for_sparsity(&self, s: usize) -> SdpConfig {
        SdpConfig {
            sparsity_radius: self.radius_scale * s as f64,
            max_iters: self.max_iters,
            tol_primal: self.tol_primal,
            tol_dual: self.tol_dual,
            rho: self.rho,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// Per-trial rows.
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Scaling fits and assumption verdict as JSON.
    #[serde(default)]
    pub summary: Option<PathBuf>,
    /// Adds a wall-time column to the CSV, which then differs between runs.
    #[serde(default)]
    pub wall_time: bool,
}

/// One sweep, read from a single JSON document. Unknown keys are rejected.
///
/// ```json
/// {
///   "n": [64], "s": [4], "m": [250, 1000, 4000],
///   "distribution": "gaussian",
///   "link": "quadratic",
///   "signal": "random-admissible",
///   "trials": 20,
///   "base_seed": 0,
///   "solver": { "radius_scale": 1.0, "max_iters": 5000,
///               "tol_primal": 1e-7, "tol_dual": 1e-7, "rho": 1.0 },
///   "output": { "csv": "sweep.csv", "summary": "summary.json", "wall_time": false }
/// }
/// ```
///
/// `signal`, `base_seed`, `solver` and `output` are optional with the
/// defaults shown. Trial `t` of cell `(n, s, m)` uses the seed
/// `derive_seed(base_seed, &[n, s, m, t])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub s: Vec<usize>,
    pub m: Vec<usize>,
    pub distribution: Distribution,
    pub link: LinkFunction,
    #[serde(default)]
    pub signal: SignalFamily,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub solver: SweepSolver,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.s.is_empty() || self.m.is_empty() {
            return invalid("grid axes n, s and m must be non-empty");
        }
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if let Some(&m) = self.m.iter().find(|&&m| m == 0) {
            return invalid(format!("measurement count m = {m} must be at least 1"));
        }
        for &n in &self.n {
            for &s in &self.s {
                if s == 0 || s > n {
                    return invalid(format!("grid cell has s = {s} outside 1..={n}"));
                }
                self.solver.for_sparsity(s).validate()?;
            }
        }
        Ok(())
    }

    /// Grid cells `(n, s, m)` in row order.
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.n.len() * self.s.len() * self.m.len());
        for &n in &self.n {
            for &s in &self.s {
                for &m in &self.m {
                    out.push((n, s, m));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"n": [8], "s": [2], "m": [10, 20], "distribution": "rademacher",
        "link": "abs", "trials": 2}"#;

    #[test]
    fn defaults() {
        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.signal, SignalFamily::RandomAdmissible);
        assert_eq!(cfg.solver, SweepSolver::default());
        assert_eq!(cfg.cells(), vec![(8, 2, 10), (8, 2, 20)]);
        assert!(matches!(cfg.link, LinkFunction::AbsValue));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"trials\"", "\"trails\": 1, \"trials\"");
        assert!(ExperimentConfig::from_json(&text).is_err());
    }

    #[test]
    fn invalid_cells_are_rejected() {
        for (from, to) in [("\"s\": [2]", "\"s\": [9]"), ("[10, 20]", "[0]"), ("\"trials\": 2", "\"trials\": 0")] {
            assert!(ExperimentConfig::from_json(&MINIMAL.replace(from, to)).is_err(), "{to}");
        }
    }
}
