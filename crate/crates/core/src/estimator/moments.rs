use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::{Distribution, LinkFunction};
use crate::rng::{stream, stream_rng, StreamRng};

/// Largest number of raw `s`-tuples enumeration will accept.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const MIN_MC_SAMPLES: usize = 1_000;

const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MomentMethod {
    Analytic,
    Enumeration,
    MonteCarlo {
        samples: usize,
        mu_stderr: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        sigma_stderr: Option<f64>,
    },
}

/// Moment functionals of a link under a sampling law.
///
/// `mu` is `Cov(W², f(W))` with `W = √s·Z̄ₛ` (for Gaussian sampling `W = g`
/// and `s` is irrelevant). `sigma` is `Cov(‖r‖², f(W))` for the residual
/// vector `r = (Zᵢ − Z̄ₛ)ᵢ`; it is absent in the Gaussian case, where it is
/// identically zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub mu: f64,
    pub sigma: Option<f64>,
    pub method: MomentMethod,
    pub s: Option<usize>,
    pub distribution: String,
    pub link: String,
}

impl MomentReport {
    pub fn mu_stderr(&self) -> f64 {
        match self.method {
            MomentMethod::MonteCarlo { mu_stderr, .. } => mu_stderr,
            _ => 0.0,
        }
    }

    pub fn sigma_stderr(&self) -> f64 {
        match self.method {
            MomentMethod::MonteCarlo { sigma_stderr, .. } => sigma_stderr.unwrap_or(0.0),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    Enumeration,
    MonteCarlo { samples: usize },
}

/// `μ(f, g)` in closed form when the link has one, Monte-Carlo otherwise.
pub fn estimate_moments_gaussian(
    link: &LinkFunction,
    mc_samples: usize,
    seed: u64,
) -> Result<MomentReport> {
    match link.analytic_gaussian_mu() {
        Some(mu) => Ok(MomentReport {
            mu,
            sigma: None,
            method: MomentMethod::Analytic,
            s: None,
            distribution: "gaussian".into(),
            link: link.tag(),
        }),
        None => monte_carlo_moments_gaussian(link, mc_samples, seed),
    }
}

/// Monte-Carlo `μ(f, g)` regardless of whether a closed form exists.
pub fn monte_carlo_moments_gaussian(
    link: &LinkFunction,
    samples: usize,
    seed: u64,
) -> Result<MomentReport> {
    check_samples(samples)?;
    let est = monte_carlo(samples, seed, false, |rng| {
        let g: f64 = rng.sample(StandardNormal);
        (g * g, 0.0, link.sample(g, rng))
    });
    Ok(MomentReport {
        mu: est.mu,
        sigma: None,
        method: MomentMethod::MonteCarlo {
            samples,
            mu_stderr: est.mu_stderr,
            sigma_stderr: None,
        },
        s: None,
        distribution: "gaussian".into(),
        link: link.tag(),
    })
}

/// `μ(f, Z, s)` and `σ(f, Z, s)`, jointly over the law of an `s`-tuple.
pub fn estimate_moments_subgaussian(
    link: &LinkFunction,
    dist: &Distribution,
    s: usize,
    mode: MomentMode,
    seed: u64,
) -> Result<MomentReport> {
    if s == 0 {
        return invalid("sparsity parameter s must be at least 1");
    }
    let (mu, sigma, method) = match mode {
        MomentMode::Enumeration => {
            let support = dist.finite_support().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "enumeration needs a finite-support law but '{}' is continuous; \
                     use Monte-Carlo mode",
                    dist.tag()
                ))
            })?;
            let (mu, sigma) = enumerate_moments(link, &support, s)?;
            (mu, sigma, MomentMethod::Enumeration)
        }
        MomentMode::MonteCarlo { samples } => {
            check_samples(samples)?;
            let root_s = (s as f64).sqrt();
            let mut z = vec![0.0; s];
            let est = monte_carlo(samples, seed, true, move |rng| {
                for zi in z.iter_mut() {
                    *zi = dist.sample(rng);
                }
                let (w, resid) = mean_and_residual(&z, root_s);
                (w * w, resid, link.sample(w, rng))
            });
            (
                est.mu,
                est.sigma,
                MomentMethod::MonteCarlo {
                    samples,
                    mu_stderr: est.mu_stderr,
                    sigma_stderr: Some(est.sigma_stderr),
                },
            )
        }
    };
    Ok(MomentReport {
        mu,
        sigma: Some(sigma),
        method,
        s: Some(s),
        distribution: dist.tag().into(),
        link: link.tag(),
    })
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_MC_SAMPLES {
        return invalid(format!(
            "Monte-Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        ));
    }
    Ok(())
}

/// `(√s Z̄ₛ, ‖r‖²)` for one tuple.
fn mean_and_residual(z: &[f64], root_s: f64) -> (f64, f64) {
    let s = z.len() as f64;
    let sum: f64 = z.iter().sum();
    let mean = sum / s;
    let resid = z.iter().map(|v| (v - mean) * (v - mean)).sum();
    (sum / root_s, resid)
}

/// Calls `visit(probability, sum, sum_of_squares)` once per multiset of `s`
/// draws from a finite law. Errors when `kˢ` exceeds the budget.
pub(crate) fn for_each_tuple_class(
    support: &[(f64, f64)],
    s: usize,
    mut visit: impl FnMut(f64, f64, f64),
) -> Result<()> {
    let k = support.len();
    let required = (k as f64).powi(s as i32);
    if required > ENUMERATION_BUDGET as f64 {
        return Err(Error::EnumerationBudget {
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut counts = vec![0usize; k];
    fn recurse(
        idx: usize,
        left: usize,
        s: usize,
        counts: &mut [usize],
        support: &[(f64, f64)],
        visit: &mut dyn FnMut(f64, f64, f64),
    ) {
        if idx + 1 == counts.len() {
            counts[idx] = left;
            // Multinomial coefficient as a product of binomials; exact in u64
            // since s ≤ 24 under the budget.
            let mut coef: u64 = 1;
            let mut remaining = s as u64;
            let mut p = 1.0;
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for (&c, &(v, w)) in counts.iter().zip(support) {
                let c64 = c as u64;
                let mut binom: u64 = 1;
                for i in 0..c64 {
                    binom = binom * (remaining - i) / (i + 1);
                }
                coef *= binom;
                remaining -= c64;
                p *= w.powi(c as i32);
                sum += c as f64 * v;
                sumsq += c as f64 * v * v;
            }
            visit(coef as f64 * p, sum, sumsq);
            return;
        }
        for c in 0..=left {
            counts[idx] = c;
            recurse(idx + 1, left - c, s, counts, support, visit);
        }
    }
    recurse(0, s, s, &mut counts, support, &mut visit);
    Ok(())
}

fn enumerate_moments(link: &LinkFunction, support: &[(f64, f64)], s: usize) -> Result<(f64, f64)> {
    let root_s = (s as f64).sqrt();
    let sf = s as f64;
    // (p, W², ‖r‖², f(W)); the noise part of f is independent of W and
    // drops out of both covariances.
    let mut rows = Vec::new();
    for_each_tuple_class(support, s, |p, sum, sumsq| {
        let w = sum / root_s;
        let w2 = sum * sum / sf;
        rows.push((p, w2, sumsq - w2, link.deterministic(w)));
    })?;
    let total: f64 = rows.iter().map(|r| r.0).sum();
    let mean = |f: fn(&(f64, f64, f64, f64)) -> f64| {
        rows.iter().map(|r| r.0 * f(r)).sum::<f64>() / total
    };
    let (ex, er, ef) = (mean(|r| r.1), mean(|r| r.2), mean(|r| r.3));
    let mu = rows
        .iter()
        .map(|r| r.0 * (r.1 - ex) * (r.3 - ef))
        .sum::<f64>()
        / total;
    let sigma = rows
        .iter()
        .map(|r| r.0 * (r.2 - er) * (r.3 - ef))
        .sum::<f64>()
        / total;
    Ok((mu, sigma))
}

struct McEstimate {
    mu: f64,
    mu_stderr: f64,
    sigma: f64,
    sigma_stderr: f64,
}

/// Sum of a slice in a fixed pairwise tree, independent of thread count.
pub(crate) fn pairwise_sum<const K: usize>(parts: &[[f64; K]]) -> [f64; K] {
    match parts.len() {
        0 => [0.0; K],
        1 => parts[0],
        len => {
            let (l, r) = parts.split_at(len / 2);
            let (a, b) = (pairwise_sum(l), pairwise_sum(r));
            std::array::from_fn(|i| a[i] + b[i])
        }
    }
}

/// Two-pass covariance estimator over chunked streams. `draw` returns
/// `(W², ‖r‖², f)`; the second pass regenerates the same draws to form the
/// centered products whose sample variance gives the standard errors.
fn monte_carlo<F>(samples: usize, seed: u64, with_residual: bool, draw: F) -> McEstimate
where
    F: FnMut(&mut StreamRng) -> (f64, f64, f64) + Clone + Send + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let chunk_len = |c: usize| CHUNK.min(samples - c * CHUNK);
    let chunk_rng = |c: usize| stream_rng(seed, stream::CHUNKED + c as u64);

    let first: Vec<[f64; 3]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut draw = draw.clone();
            let mut rng = chunk_rng(c);
            let mut acc = [0.0; 3];
            for _ in 0..chunk_len(c) {
                let (x, r, f) = draw(&mut rng);
                acc[0] += x;
                acc[1] += r;
                acc[2] += f;
            }
            acc
        })
        .collect();
    let n = samples as f64;
    let sums = pairwise_sum(&first);
    let (mx, mr, mf) = (sums[0] / n, sums[1] / n, sums[2] / n);

    let second: Vec<[f64; 4]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut draw = draw.clone();
            let mut rng = chunk_rng(c);
            let mut acc = [0.0; 4];
            for _ in 0..chunk_len(c) {
                let (x, r, f) = draw(&mut rng);
                let u = (x - mx) * (f - mf);
                let v = (r - mr) * (f - mf);
                acc[0] += u;
                acc[1] += u * u;
                acc[2] += v;
                acc[3] += v * v;
            }
            acc
        })
        .collect();
    let t = pairwise_sum(&second);
    let stats = |sum: f64, sumsq: f64| {
        let mean = sum / n;
        let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
        (sum / (n - 1.0), (var / n).sqrt())
    };
    let (mu, mu_stderr) = stats(t[0], t[1]);
    let (sigma, sigma_stderr) = if with_residual {
        stats(t[2], t[3])
    } else {
        (0.0, 0.0)
    };
    McEstimate {
        mu,
        mu_stderr,
        sigma,
        sigma_stderr,
    }
}

/// Empirical `(E|f(W)|ᵖ)^{1/p}` for each `p`, with `W` drawn as in the
/// moment functionals. Exact under enumeration for finite laws within
/// budget, otherwise Monte-Carlo from the moment-growth stream of `seed`.
pub(crate) fn response_norms(
    link: &LinkFunction,
    dist: &Distribution,
    s: usize,
    orders: &[i32],
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let s = s.max(1);
    let root_s = (s as f64).sqrt();
    let mut acc = vec![0.0; orders.len()];
    let mut total = 0.0;
    let enumerated = match (dist.is_gaussian(), dist.finite_support()) {
        (false, Some(support)) if link.noise_std() == 0.0 => {
            for_each_tuple_class(&support, s, |p, sum, _| {
                let f = link.deterministic(sum / root_s).abs();
                total += p;
                for (a, &q) in acc.iter_mut().zip(orders) {
                    *a += p * f.powi(q);
                }
            })
            .is_ok()
        }
        _ => false,
    };
    if !enumerated {
        acc.iter_mut().for_each(|a| *a = 0.0);
        total = samples as f64;
        let mut rng = stream_rng(seed, stream::MOMENT_GROWTH);
        let mut z = vec![0.0; s];
        for _ in 0..samples {
            let w = if dist.is_gaussian() {
                rng.sample(StandardNormal)
            } else {
                for zi in z.iter_mut() {
                    *zi = dist.sample(&mut rng);
                }
                z.iter().sum::<f64>() / root_s
            };
            let f = link.sample(w, &mut rng).abs();
            for (a, &q) in acc.iter_mut().zip(orders) {
                *a += f.powi(q);
            }
        }
    }
    acc.iter()
        .zip(orders)
        .map(|(a, &q)| (a / total).powf(1.0 / q as f64))
        .collect()
}
