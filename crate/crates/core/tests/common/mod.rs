//! Independent reference computations shared by the integration tests.
//!
//! Eigendecompositions here come from nalgebra and thresholds from plain
//! bisection, so none of them reuse the crate's Jacobi solver or its
//! sort-based thresholding.

#![allow(dead_code)]

use mpr_core::SymMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn to_na(a: &SymMatrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j))
}

pub fn from_na(a: &DMatrix<f64>) -> SymMatrix {
    SymMatrix::from_upper_fn(a.nrows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// Symmetric matrix with i.i.d. `N(0, scale²)` upper-triangle entries.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> SymMatrix {
    SymMatrix::from_upper_fn(n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Unit vector supported on `k` random coordinates.
pub fn random_sparse_unit<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<f64> {
    let support = rand::seq::index::sample(rng, n, k).into_vec();
    let mut v = vec![0.0; n];
    for i in support {
        v[i] = rng.sample(StandardNormal);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Random point of `{X ⪰ 0, Tr X = 1}` of random rank.
pub fn random_spectrahedron_point<R: Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let rank = rng.random_range(1..=n);
    let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut x = SymMatrix::zeros(n);
    for w in weights {
        x.axpy(w / total, &SymMatrix::outer(&random_unit_vector(rng, n)));
    }
    x
}

/// Random point of `{X ⪰ 0, Tr X = 1, ‖X‖₁ ≤ s}`: a convex combination of
/// `vvᵀ` with `v` unit and `⌊s⌋`-sparse, so that `‖vvᵀ‖₁ = ‖v‖₁² ≤ s`.
pub fn random_sparse_feasible<R: Rng>(rng: &mut R, n: usize, s: f64) -> SymMatrix {
    let k = (s.floor() as usize).clamp(1, n);
    let terms = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut x = SymMatrix::zeros(n);
    for w in weights {
        x.axpy(w / total, &SymMatrix::outer(&random_sparse_unit(rng, n, k)));
    }
    x
}

/// Largest `θ` in `[lo, hi]` with `g(θ) ≥ 0` for a non-increasing `g`.
fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Spectrahedron projection from the KKT conditions: keep the eigenvectors
/// and shift the eigenvalues by the `θ` solving `Σ max(λᵢ − θ, 0) = 1`.
pub fn reference_psd_trace1(a: &SymMatrix) -> SymMatrix {
    let eig = SymmetricEigen::new(to_na(a));
    let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let max = lambda.iter().cloned().fold(f64::MIN, f64::max);
    let theta = bisect(max - 1.0, max, |t| {
        lambda.iter().map(|l| (l - t).max(0.0)).sum::<f64>() - 1.0
    });
    let n = a.dim();
    let mut out = DMatrix::zeros(n, n);
    for (k, l) in lambda.iter().enumerate() {
        let w = (l - theta).max(0.0);
        if w > 0.0 {
            let v = eig.eigenvectors.column(k);
            out += w * v * v.transpose();
        }
    }
    from_na(&out)
}

/// Entrywise ℓ1-ball projection from the KKT conditions: soft-threshold all
/// entries by the `θ` that puts the ℓ1 norm exactly on the radius.
pub fn reference_l1_ball(a: &SymMatrix, radius: f64) -> SymMatrix {
    if a.l1_norm() <= radius {
        return a.clone();
    }
    let n = a.dim();
    let entries = a.as_slice().to_vec();
    let theta = bisect(0.0, a.max_abs(), |t| {
        entries.iter().map(|x| (x.abs() - t).max(0.0)).sum::<f64>() - radius
    });
    SymMatrix::from_upper_fn(n, |i, j| {
        let x = a.get(i, j);
        x.signum() * (x.abs() - theta).max(0.0)
    })
}

/// Top eigenpair and the gap `λ₁ − λ₂` from nalgebra.
pub fn reference_top_eigen(a: &SymMatrix) -> (Vec<f64>, f64, f64) {
    let eig = SymmetricEigen::new(to_na(a));
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = order[0];
    let gap = if a.dim() > 1 {
        eig.eigenvalues[top] - eig.eigenvalues[order[1]]
    } else {
        f64::INFINITY
    };
    (eig.eigenvectors.column(top).iter().copied().collect(), eig.eigenvalues[top], gap)
}

pub fn reference_lambda_min(a: &SymMatrix) -> f64 {
    SymmetricEigen::new(to_na(a)).eigenvalues.iter().cloned().fold(f64::MAX, f64::min)
}

pub fn reference_lambda_max(a: &SymMatrix) -> f64 {
    SymmetricEigen::new(to_na(a)).eigenvalues.iter().cloned().fold(f64::MIN, f64::max)
}

/// `(μ, σ)` for Rademacher coordinates by summing over all `2ˢ` sign
/// vectors: `μ = Cov(W², f(W))`, `σ = Cov(‖r‖², f(W))` with `W = √s·Z̄`
/// and `r = Z − Z̄·1`.
pub fn rademacher_moments_by_signs(f: impl Fn(f64) -> f64, s: usize) -> (f64, f64) {
    let count = 1u64 << s;
    let p = 1.0 / count as f64;
    let (mut e_w2, mut e_r2, mut e_f, mut e_w2f, mut e_r2f) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for mask in 0..count {
        let z: Vec<f64> = (0..s).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let mean = z.iter().sum::<f64>() / s as f64;
        let w = (s as f64).sqrt() * mean;
        let r2: f64 = z.iter().map(|zi| (zi - mean).powi(2)).sum();
        let fw = f(w);
        e_w2 += p * w * w;
        e_r2 += p * r2;
        e_f += p * fw;
        e_w2f += p * w * w * fw;
        e_r2f += p * r2 * fw;
    }
    (e_w2f - e_w2 * e_f, e_r2f - e_r2 * e_f)
}

/// `(W + Wᵀ)/2` for `W` with i.i.d. standard normal entries, drawn
/// entry by entry; `⟨G, D⟩ ~ N(0, ‖D‖_F²)` for symmetric `D`.
pub fn random_symmetric_gaussian<R: Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let w: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    SymMatrix::from_upper_fn(n, |i, j| 0.5 * (w[i * n + j] + w[j * n + i]))
}
