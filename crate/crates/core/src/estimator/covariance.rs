use crate::error::{invalid, Error, Result};
use crate::linalg::SymMatrix;
use crate::model::{MeasurementSet, Signal};

/// `Σ̂ = (1/m) Σᵢ yᵢ (aᵢaᵢᵀ − Iₙ)`.
pub fn reweighted_covariance(data: &MeasurementSet) -> SymMatrix {
    let n = data.n();
    let m = data.m();
    let mut upper = vec![0.0; n * n];
    let mut y_sum = 0.0;
    for (row, &y) in data.vectors().rows().into_iter().zip(data.responses()) {
        y_sum += y;
        if y == 0.0 {
            continue;
        }
        let a = row.as_slice().expect("sampling matrix is row-major");
        for i in 0..n {
            let yi = y * a[i];
            let acc = &mut upper[i * n + i..(i + 1) * n];
            for (out, &aj) in acc.iter_mut().zip(&a[i..]) {
                *out += yi * aj;
            }
        }
    }
    let inv_m = 1.0 / m as f64;
    let y_mean = y_sum * inv_m;
    SymMatrix::from_upper_fn(n, |i, j| {
        let v = upper[i * n + j] * inv_m;
        if i == j {
            v - y_mean
        } else {
            v
        }
    })
}

/// Expected reweighted covariance under Gaussian sampling: `μ x*x*ᵀ`.
pub fn population_covariance_gaussian(x_star: &Signal, mu: f64) -> SymMatrix {
    x_star.outer().scaled(mu)
}

/// Expected reweighted covariance for i.i.d. symmetric unit-variance
/// coordinates and an admissible `x*` with support `I`, `|I| = s ≥ 2`:
///
/// `Σ = μ x*x*ᵀ + σ/(s−1) · (P_I − x*x*ᵀ)`
///
/// The `+` sign on the second term is what the permutation-invariance
/// argument gives (`α + (s−1)β = Tr Σ = μ + σ`) and what exhaustive
/// enumeration of `E y(aaᵀ − I)` confirms.
pub fn population_covariance_subgaussian(
    x_star: &Signal,
    mu: f64,
    sigma: f64,
    s: usize,
) -> Result<SymMatrix> {
    if s < 2 {
        return invalid(format!("population covariance needs s ≥ 2, got {s}"));
    }
    if !x_star.is_admissible() {
        return invalid("population covariance needs an admissible signal");
    }
    let support = x_star.support();
    if support.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            got: support.len(),
        });
    }
    let beta = sigma / (s - 1) as f64;
    let x = x_star.values();
    let in_support: Vec<bool> = (0..x_star.dim()).map(|i| x[i] != 0.0).collect();
    Ok(SymMatrix::from_upper_fn(x_star.dim(), |i, j| {
        let spike = x[i] * x[j];
        let projector = if i == j && in_support[i] { 1.0 } else { 0.0 };
        mu * spike + beta * (projector - spike)
    }))
}
