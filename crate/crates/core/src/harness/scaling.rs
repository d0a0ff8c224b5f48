use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::sweep::{median, SweepResult};
use crate::error::{invalid, Result};
use crate::rng::{derive_seed, stream, stream_rng};

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Log-log fit of median error against `m` at one `(n, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub n: usize,
    pub s: usize,
    pub m: Vec<usize>,
    pub median_error: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// 95% percentile bootstrap interval for the slope, resampling trials
    /// within each `m`.
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept)`.
pub fn fit_log_log(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return invalid("a log-log fit needs at least two paired points");
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return invalid("log-log fit needs positive finite values");
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("log-log fit needs at least two distinct x values");
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Fits `ln(median error) ~ ln m` for every `(n, s)` that has at least three
/// values of `m`. Errors when no such group exists.
pub fn report_scaling(result: &SweepResult) -> Result<Vec<ScalingFit>> {
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, Vec<f64>)>> = BTreeMap::new();
    for ((n, s, m), errors) in result.cell_errors() {
        if !errors.is_empty() {
            groups.entry((n, s)).or_default().push((m, errors));
        }
    }
    let mut fits = Vec::new();
    for ((n, s), mut cells) in groups {
        cells.sort_by_key(|(m, _)| *m);
        cells.dedup_by_key(|(m, _)| *m);
        if cells.len() < 3 {
            continue;
        }
        let ms: Vec<f64> = cells.iter().map(|(m, _)| *m as f64).collect();
        let medians: Vec<f64> = cells.iter().map(|(_, e)| median(e)).collect();
        let (slope, intercept) = fit_log_log(&ms, &medians)?;

        let mut rng = stream_rng(derive_seed(result.base_seed, &[n as u64, s as u64]), stream::BOOTSTRAP);
        let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
        let mut resample = Vec::new();
        for _ in 0..BOOTSTRAP_RESAMPLES {
            let boot: Vec<f64> = cells
                .iter()
                .map(|(_, e)| {
                    resample.clear();
                    resample.extend((0..e.len()).map(|_| e[rng.random_range(0..e.len())]));
                    median(&resample)
                })
                .collect();
            if let Ok((b, _)) = fit_log_log(&ms, &boot) {
                slopes.push(b);
            }
        }
        slopes.sort_by(f64::total_cmp);
        let pick = |q: f64| slopes.get(((slopes.len() as f64 - 1.0) * q).round() as usize).copied();
        fits.push(ScalingFit {
            n,
            s,
            m: cells.iter().map(|(m, _)| *m).collect(),
            median_error: medians,
            slope,
            intercept,
            ci_low: pick(0.025).unwrap_or(f64::NAN),
            ci_high: pick(0.975).unwrap_or(f64::NAN),
        });
    }
    if fits.is_empty() {
        return invalid("scaling fit needs at least 3 values of m at some fixed (n, s)");
    }
    Ok(fits)
}
