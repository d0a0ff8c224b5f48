//! Frobenius projections onto the two factors of the sparse-PCA feasible set.

use super::eigen::{eigh, eigh_warm, EigenDecomposition};
use super::SymMatrix;
use crate::error::{invalid, Result};

/// Euclidean projection onto the probability simplex `{w ≥ 0, Σw = 1}`.
///
/// Sort-based thresholding; the sort is stable so equal entries are handled
/// in index order.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto the spectrahedron `{X ⪰ 0, Tr X = 1}`.
pub fn project_psd_trace1(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = eigh(a)?;
    Ok(spectral_projection(&eig))
}

/// [`project_psd_trace1`] that also returns the eigendecomposition of the
/// input, and reuses `hint` as a Jacobi warm start when given.
pub(crate) fn project_psd_trace1_warm(
    a: &SymMatrix,
    hint: Option<&EigenDecomposition>,
) -> Result<(SymMatrix, EigenDecomposition)> {
    let eig = match hint {
        Some(h) => eigh_warm(a, h)?,
        None => eigh(a)?,
    };
    Ok((spectral_projection(&eig), eig))
}

fn spectral_projection(eig: &EigenDecomposition) -> SymMatrix {
    let weights = project_simplex(eig.values());
    eig.reconstruct_with(&weights)
}

/// Soft-thresholding level `θ` that brings the entrywise ℓ1 norm of `a` down
/// to `radius`; zero when `a` is already inside the ball.
///
/// Works over the upper triangle: diagonal magnitudes carry weight 1 and
/// off-diagonal magnitudes weight 2, since each appears twice in `‖A‖₁`.
pub fn l1_threshold(a: &SymMatrix, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return invalid(format!("ℓ1 radius must be positive and finite, got {radius}"));
    }
    a.check_finite()?;
    if a.l1_norm() <= radius {
        return Ok(0.0);
    }
    let n = a.dim();
    let mut entries: Vec<(f64, f64)> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        entries.push((a.get(i, i).abs(), 1.0));
        for j in (i + 1)..n {
            entries.push((a.get(i, j).abs(), 2.0));
        }
    }
    entries.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut weight = 0.0;
    let mut weighted_sum = 0.0;
    let mut theta = 0.0;
    for &(u, c) in &entries {
        weight += c;
        weighted_sum += c * u;
        let candidate = (weighted_sum - radius) / weight;
        if u > candidate {
            theta = candidate;
        } else {
            break;
        }
    }
    Ok(theta.max(0.0))
}

/// Projection onto the entrywise ℓ1 ball `{‖X‖₁ ≤ radius}`.
pub fn project_l1_ball(a: &SymMatrix, radius: f64) -> Result<SymMatrix> {
    let theta = l1_threshold(a, radius)?;
    if theta == 0.0 {
        return Ok(a.clone());
    }
    Ok(a.map(|v| v.signum() * (v.abs() - theta).max(0.0)))
}
