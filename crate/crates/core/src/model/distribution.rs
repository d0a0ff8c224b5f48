use std::fmt;

use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::{stream, stream_rng};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Finite symmetric law given by support points and weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteRepr", into = "DiscreteRepr")]
pub struct DiscreteSymmetric {
    points: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteRepr {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteSymmetric {
    /// Validates that the law is centered, symmetric and of unit variance
    /// (each within 1e-12) with weights summing to one.
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return invalid("discrete law needs equally many (non-zero) points and weights");
        }
        if points.iter().chain(&weights).any(|v| !v.is_finite()) {
            return invalid("discrete law has non-finite points or weights");
        }
        if weights.iter().any(|&w| w < 0.0) {
            return invalid("discrete law has a negative weight");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("weights must sum to 1, got {total}"));
        }
        let mean: f64 = points.iter().zip(&weights).map(|(p, w)| p * w).sum();
        if mean.abs() > 1e-12 {
            return invalid(format!("law must be centered, mean is {mean}"));
        }
        let var: f64 = points.iter().zip(&weights).map(|(p, w)| p * p * w).sum();
        if (var - 1.0).abs() > 1e-12 {
            return invalid(format!("law must have unit variance, got {var}"));
        }
        for (p, w) in points.iter().zip(&weights) {
            let mirrored: f64 = points
                .iter()
                .zip(&weights)
                .filter(|(q, _)| (**q + p).abs() <= 1e-12)
                .map(|(_, v)| v)
                .sum();
            let own: f64 = points
                .iter()
                .zip(&weights)
                .filter(|(q, _)| (**q - p).abs() <= 1e-12)
                .map(|(_, v)| v)
                .sum();
            if (mirrored - own).abs() > 1e-12 {
                return invalid(format!("law is not symmetric at point {p} (weight {w})"));
            }
        }
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            points,
            weights,
            cumulative,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.points[k.min(self.points.len() - 1)]
    }
}

impl TryFrom<DiscreteRepr> for DiscreteSymmetric {
    type Error = crate::Error;

    fn try_from(r: DiscreteRepr) -> Result<Self> {
        Self::new(r.points, r.weights)
    }
}

impl From<DiscreteSymmetric> for DiscreteRepr {
    fn from(d: DiscreteSymmetric) -> Self {
        Self {
            points: d.points,
            weights: d.weights,
        }
    }
}

/// Law of the i.i.d. coordinates of a sampling vector. All variants are
/// centered, symmetric and of unit variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    Gaussian,
    Rademacher,
    /// Uniform on `[−√3, √3]`.
    UniformScaled,
    DiscreteSymmetric(DiscreteSymmetric),
}

impl Distribution {
    pub fn tag(&self) -> &'static str {
        match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Rademacher => "rademacher",
            Distribution::UniformScaled => "uniform-scaled",
            Distribution::DiscreteSymmetric(_) => "discrete-symmetric",
        }
    }

    /// Small integer folded into stream ids.
    pub fn stream_tag(&self) -> u64 {
        match self {
            Distribution::Gaussian => 0,
            Distribution::Rademacher => 1,
            Distribution::UniformScaled => 2,
            Distribution::DiscreteSymmetric(_) => 3,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, Distribution::Gaussian)
    }

    /// `(point, weight)` pairs for finite-support laws.
    pub fn finite_support(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Distribution::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            Distribution::DiscreteSymmetric(d) => Some(
                d.points
                    .iter()
                    .copied()
                    .zip(d.weights.iter().copied())
                    .filter(|&(_, w)| w > 0.0)
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Distribution::Gaussian => rng.sample(StandardNormal),
            Distribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Distribution::UniformScaled => SQRT_3 * (2.0 * rng.random::<f64>() - 1.0),
            Distribution::DiscreteSymmetric(d) => d.sample(rng),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gaussian" => Ok(Distribution::Gaussian),
            "rademacher" => Ok(Distribution::Rademacher),
            "uniform" | "uniform-scaled" => Ok(Distribution::UniformScaled),
            other => invalid(format!(
                "unknown distribution '{other}' (expected gaussian, rademacher or uniform)"
            )),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `m × n` matrix of i.i.d. draws, filled row by row from the sampling-vector
/// stream of `seed`.
pub fn sample_vectors(dist: &Distribution, m: usize, n: usize, seed: u64) -> Result<Array2<f64>> {
    if m == 0 || n == 0 {
        return invalid(format!("need m, n ≥ 1, got m = {m}, n = {n}"));
    }
    let mut rng = stream_rng(seed, stream::VECTORS + dist.stream_tag());
    Ok(Array2::from_shape_simple_fn((m, n), || dist.sample(&mut rng)))
}
