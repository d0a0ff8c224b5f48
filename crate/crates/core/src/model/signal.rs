use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::SymMatrix;
use crate::rng::{stream, stream_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How the ground-truth vector is built. Support indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignalKind {
    /// `±1/√|I|` on the given support with the given signs.
    Admissible { support: Vec<usize>, signs: Vec<Sign> },
    /// Admissible with a uniformly random support of size `sparsity` and random signs.
    RandomAdmissible { sparsity: usize },
    /// Gaussian entries on a random support of size `sparsity`, normalized.
    SparseGaussian { sparsity: usize },
    /// Gaussian entries everywhere, normalized.
    DenseUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub dim: usize,
    pub kind: SignalKind,
}

/// Unit-norm ground-truth vector `x*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    /// Wraps an arbitrary vector, which must have unit norm within 1e-12.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("signal must have at least one coordinate");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("signal has non-finite entries");
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return invalid(format!("signal must have unit ℓ2 norm, got {norm}"));
        }
        Ok(Self { values })
    }

    /// Normalizes `values` to unit norm.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Self::new(values.into_iter().map(|v| v / norm).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.values[i] != 0.0).collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// Nonzero entries all have magnitude `1/√|I|` (within 1e-12).
    pub fn is_admissible(&self) -> bool {
        let support = self.support();
        let level = 1.0 / (support.len() as f64).sqrt();
        support
            .iter()
            .all(|&i| (self.values[i].abs() - level).abs() <= 1e-12)
    }

    pub fn outer(&self) -> SymMatrix {
        SymMatrix::outer(&self.values)
    }

    /// `min(‖x − x*‖₂, ‖x + x*‖₂)`.
    pub fn error_up_to_sign(&self, estimate: &[f64]) -> f64 {
        let (mut minus, mut plus) = (0.0, 0.0);
        for (a, b) in estimate.iter().zip(&self.values) {
            minus += (a - b) * (a - b);
            plus += (a + b) * (a + b);
        }
        minus.min(plus).sqrt()
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = crate::Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Signal> for Vec<f64> {
    fn from(s: Signal) -> Self {
        s.values
    }
}

pub fn admissible(dim: usize, support: &[usize], signs: &[Sign]) -> Result<Signal> {
    if support.is_empty() {
        return invalid("admissible signal needs a non-empty support");
    }
    if support.len() != signs.len() {
        return invalid(format!(
            "support has {} indices but {} signs were given",
            support.len(),
            signs.len()
        ));
    }
    let mut values = vec![0.0; dim];
    let level = 1.0 / (support.len() as f64).sqrt();
    for (&i, &sign) in support.iter().zip(signs) {
        if i >= dim {
            return invalid(format!("support index {i} out of range for dimension {dim}"));
        }
        if values[i] != 0.0 {
            return invalid(format!("duplicate support index {i}"));
        }
        values[i] = sign.value() * level;
    }
    Signal::new(values)
}

fn check_sparsity(dim: usize, sparsity: usize) -> Result<()> {
    if sparsity == 0 || sparsity > dim {
        return invalid(format!("sparsity must lie in 1..={dim}, got {sparsity}"));
    }
    Ok(())
}

/// Builds the signal described by `spec`; random kinds draw from the
/// signal stream of `seed`.
pub fn make_signal(spec: &SignalSpec, seed: u64) -> Result<Signal> {
    let n = spec.dim;
    if n == 0 {
        return invalid("signal dimension must be positive");
    }
    let mut rng = stream_rng(seed, stream::SIGNAL);
    match &spec.kind {
        SignalKind::Admissible { support, signs } => admissible(n, support, signs),
        SignalKind::RandomAdmissible { sparsity } => {
            check_sparsity(n, *sparsity)?;
            let mut support = index::sample(&mut rng, n, *sparsity).into_vec();
            support.sort_unstable();
            let signs: Vec<Sign> = support
                .iter()
                .map(|_| if rng.random::<bool>() { Sign::Plus } else { Sign::Minus })
                .collect();
            admissible(n, &support, &signs)
        }
        SignalKind::SparseGaussian { sparsity } => {
            check_sparsity(n, *sparsity)?;
            let mut support = index::sample(&mut rng, n, *sparsity).into_vec();
            support.sort_unstable();
            let mut values = vec![0.0; n];
            for &i in &support {
                values[i] = rng.sample(StandardNormal);
            }
            Signal::normalized(values)
        }
        SignalKind::DenseUnit => {
            Signal::normalized((0..n).map(|_| rng.sample(StandardNormal)).collect())
        }
    }
}
