use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::config::SdpConfig;
use super::kpca::{ascend, solve_k_pca};
use super::oracle::ProjectionOracle;
use crate::error::{invalid, Result};
use crate::linalg::SymMatrix;
use crate::rng::{derive_seed, stream, stream_rng};

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Monte-Carlo Gaussian width `E sup_{X∈K} ⟨G, X − X₀⟩` of the set behind
/// `oracle`, with `X₀ = reference` a point of `K`.
///
/// `G = (W + Wᵀ)/2` for `W` with i.i.d. standard normal entries, so that
/// `⟨G, D⟩ ~ N(0, ‖D‖_F²)` for every symmetric `D`. Each supremum is a
/// [`solve_k_pca`] call with `Σ̂ = G`. The result does not depend on the
/// number of worker threads.
pub fn estimate_gaussian_width<O>(
    oracle: &O,
    reference: &SymMatrix,
    samples: usize,
    seed: u64,
    cfg: &SdpConfig,
) -> Result<WidthEstimate>
where
    O: ProjectionOracle + ?Sized,
{
    if samples < 2 {
        return invalid("the width estimate needs at least 2 samples");
    }
    reference.check_finite()?;
    let n = reference.dim();
    // Validates the oracle and the config once.
    solve_k_pca(&SymMatrix::identity(n), oracle, cfg)?;

    let key = derive_seed(seed, &[stream::WIDTH]);
    let chunks = samples.div_ceil(CHUNK);
    let values: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(samples - c * CHUNK);
            let mut rng = stream_rng(key, stream::CHUNKED + c as u64);
            (0..len)
                .map(|_| {
                    let g = symmetric_gaussian(n, &mut rng);
                    let report = ascend(&g, oracle, cfg)?;
                    Ok(report.objective - g.dot(reference))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let values: Vec<f64> = values.into_iter().flatten().collect();
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(WidthEstimate {
        mean,
        stderr: (var / k).sqrt(),
        samples,
    })
}

fn symmetric_gaussian<R: Rng>(n: usize, rng: &mut R) -> SymMatrix {
    let w: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    SymMatrix::from_upper_fn(n, |i, j| 0.5 * (w[i * n + j] + w[j * n + i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::oracle::Singleton;

    #[test]
    fn singleton_has_zero_width() {
        let p = SymMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let w = estimate_gaussian_width(&Singleton(p.clone()), &p, 500, 1, &SdpConfig::new(3.0)).unwrap();
        assert_eq!(w.mean, 0.0);
        assert_eq!(w.stderr, 0.0);
    }

    #[test]
    fn symmetric_gaussian_variances() {
        let mut rng = stream_rng(5, 0);
        let draws: Vec<SymMatrix> = (0..20_000).map(|_| symmetric_gaussian(2, &mut rng)).collect();
        let var = |i: usize, j: usize| draws.iter().map(|g| g.get(i, j).powi(2)).sum::<f64>() / 20_000.0;
        assert!((var(0, 0) - 1.0).abs() < 0.05);
        assert!((var(0, 1) - 0.5).abs() < 0.03);
    }
}
