use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estimator::AssumptionVerdict;
use crate::linalg::SymMatrix;

fn default_max_iters() -> usize {
    5000
}

fn default_tol() -> f64 {
    1e-7
}

fn default_rho() -> f64 {
    1.0
}

/// Settings shared by both solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdpConfig {
    /// `s` in `‖X‖₁ ≤ s`; must be at least 1.
    pub sparsity_radius: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tol")]
    pub tol_primal: f64,
    #[serde(default = "default_tol")]
    pub tol_dual: f64,
    /// ADMM penalty for the sparse solver; the projected-gradient step is
    /// `1/(ρ‖Σ̂‖)`.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<SymMatrix>,
}

impl SdpConfig {
    pub fn new(sparsity_radius: f64) -> Self {
        Self {
            sparsity_radius,
            max_iters: default_max_iters(),
            tol_primal: default_tol(),
            tol_dual: default_tol(),
            rho: default_rho(),
            warm_start: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sparsity_radius >= 1.0) || !self.sparsity_radius.is_finite() {
            return invalid(format!(
                "sparsity radius must be a finite value ≥ 1, got {}",
                self.sparsity_radius
            ));
        }
        if self.max_iters == 0 {
            return invalid("max_iters must be positive");
        }
        for (name, v) in [
            ("tol_primal", self.tol_primal),
            ("tol_dual", self.tol_dual),
            ("rho", self.rho),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if let Some(w) = &self.warm_start {
            w.check_finite()?;
        }
        Ok(())
    }

    /// Warm start if given, else the barycenter `I/n`.
    pub(crate) fn start(&self, n: usize) -> Result<SymMatrix> {
        match &self.warm_start {
            Some(w) if w.dim() != n => Err(crate::Error::DimensionMismatch {
                expected: n,
                got: w.dim(),
            }),
            Some(w) => Ok(w.clone()),
            None => Ok(SymMatrix::identity(n).scaled(1.0 / n as f64)),
        }
    }
}

/// Solver output plus, when the truth is known, the recovery error.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    /// Solution matrix `X̂`.
    pub x_hat_matrix: SymMatrix,
    /// Leading eigenvector of `X̂` under the sign convention.
    pub x_hat: Vec<f64>,
    /// `⟨X̂, Σ̂⟩`.
    pub objective: f64,
    pub iters: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub converged: bool,
    /// Leading eigengap of `X̂` below 1e-12 (or `X̂` was zero).
    pub degenerate: bool,
    pub eigengap: f64,
    pub error_up_to_sign: Option<f64>,
    /// `‖X̂ − x*x*ᵀ‖_F`.
    pub frobenius_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<AssumptionVerdict>,
    /// Objective after each projected-gradient step (k-PCA only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objective_history: Vec<f64>,
}

/// Column order of [`RecoveryReport::csv_row`].
pub const REPORT_CSV_HEADER: [&str; 9] = [
    "error_up_to_sign",
    "frobenius_error",
    "objective",
    "iters",
    "converged",
    "degenerate",
    "primal_residual",
    "dual_residual",
    "eigengap",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RecoveryReport {
    /// Flat summary row; floats print in shortest round-trip form.
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            opt(self.error_up_to_sign),
            opt(self.frobenius_error),
            self.objective.to_string(),
            self.iters.to_string(),
            self.converged.to_string(),
            self.degenerate.to_string(),
            self.primal_residual.to_string(),
            self.dual_residual.to_string(),
            self.eigengap.to_string(),
        ]
    }
}
