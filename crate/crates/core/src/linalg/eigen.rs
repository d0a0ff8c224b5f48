use serde::Serialize;

use super::SymMatrix;
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius tolerance, relative to `max(1, ‖A‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Eigengaps below this are reported as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// Spectral decomposition `A = V diag(λ) Vᵀ` with `λ` non-increasing.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    // Row k holds the k-th eigenvector.
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// `V diag(w) Vᵀ`, skipping zero weights.
    pub fn reconstruct_with(&self, weights: &[f64]) -> SymMatrix {
        let n = self.dim();
        let mut upper = vec![0.0; n * n];
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = self.vector(k);
            for i in 0..n {
                let wi = w * v[i];
                let row = &mut upper[i * n..(i + 1) * n];
                for j in i..n {
                    row[j] += wi * v[j];
                }
            }
        }
        SymMatrix::from_upper_fn(n, |i, j| upper[i * n + j])
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(&self.values)
    }

    /// `‖VᵀV − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                let d: f64 = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x * y).sum();
                let e = if a == b { d - 1.0 } else { d };
                acc += e * e;
            }
        }
        acc.sqrt()
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn eigh(a: &SymMatrix) -> Result<EigenDecomposition> {
    a.check_finite()?;
    let n = a.dim();
    let mut work = a.as_slice().to_vec();
    let mut basis = vec![0.0; n * n];
    for i in 0..n {
        basis[i * n + i] = 1.0;
    }
    jacobi(&mut work, &mut basis, n, a.frobenius_norm())?;
    Ok(sorted(n, &work, basis))
}

/// Like [`eigh`], but first rotates `a` into the eigenbasis of `hint`.
///
/// When `a` is close to the matrix `hint` came from (consecutive solver
/// iterates), the rotated matrix is nearly diagonal and Jacobi finishes in a
/// couple of sweeps.
pub fn eigh_warm(a: &SymMatrix, hint: &EigenDecomposition) -> Result<EigenDecomposition> {
    a.check_finite()?;
    let n = a.dim();
    if hint.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: hint.dim(),
        });
    }
    let w = &hint.vectors;
    // tmp = W A, then work = tmp Wᵀ.
    let mut tmp = vec![0.0; n * n];
    for i in 0..n {
        let wi = &w[i * n..(i + 1) * n];
        let out = &mut tmp[i * n..(i + 1) * n];
        for (k, &wik) in wi.iter().enumerate() {
            if wik == 0.0 {
                continue;
            }
            for (o, &akj) in out.iter_mut().zip(a.row(k)) {
                *o += wik * akj;
            }
        }
    }
    let mut work = vec![0.0; n * n];
    for i in 0..n {
        let ti = &tmp[i * n..(i + 1) * n];
        for j in i..n {
            let wj = &w[j * n..(j + 1) * n];
            let v: f64 = ti.iter().zip(wj).map(|(x, y)| x * y).sum();
            work[i * n + j] = v;
            work[j * n + i] = v;
        }
    }
    let mut basis = w.clone();
    jacobi(&mut work, &mut basis, n, a.frobenius_norm())?;
    Ok(sorted(n, &work, basis))
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * acc).sqrt()
}

fn jacobi(a: &mut [f64], basis: &mut [f64], n: usize, scale: f64) -> Result<()> {
    let tol = OFF_DIAGONAL_TOL * scale.max(1.0);
    // Entries below this can be left alone: if all of them are, the
    // off-diagonal norm is already under `tol`.
    let skip = tol / n.max(1) as f64;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(a, n);
        if off <= tol {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                let (lo, hi) = basis.split_at_mut(q * n);
                let row_p = &mut lo[p * n..(p + 1) * n];
                let row_q = &mut hi[..n];
                for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
                    let x = *vp;
                    let y = *vq;
                    *vp = c * x - s * y;
                    *vq = s * x + c * y;
                }
            }
        }
    }
    let residual = off_diagonal_norm(a, n);
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::EigenNotConverged {
            sweeps: MAX_SWEEPS,
            residual,
        })
    }
}

fn sorted(n: usize, diag_src: &[f64], basis: Vec<f64>) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps index order among exact ties.
    order.sort_by(|&i, &j| diag_src[j * n + j].total_cmp(&diag_src[i * n + i]));
    let values = order.iter().map(|&i| diag_src[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&basis[i * n..(i + 1) * n]);
    }
    EigenDecomposition { values, vectors }
}

/// Leading eigenpair with the sign convention applied.
#[derive(Debug, Clone, Serialize)]
pub struct LeadingEigen {
    pub vector: Vec<f64>,
    pub value: f64,
    /// `λ₁ − λ₂`; infinite for 1×1 input.
    pub gap: f64,
    /// Zero matrix or eigengap below [`DEGENERATE_GAP`].
    pub degenerate: bool,
}

/// Flips `v` so its largest-magnitude coordinate is positive. Coordinates
/// within 1e-12 of the maximum count as ties and the lowest index wins.
pub fn normalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().position(|x| x.abs() >= max - 1e-12) {
        if v[pivot] < 0.0 {
            // `0 − x` rather than `−x` keeps exact zeros positive.
            v.iter_mut().for_each(|x| *x = 0.0 - *x);
        }
    }
}

pub fn leading_eigenvector(a: &SymMatrix) -> Result<LeadingEigen> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if a.max_abs() == 0.0 {
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        return Ok(LeadingEigen {
            vector: e1,
            value: 0.0,
            gap: 0.0,
            degenerate: true,
        });
    }
    let eig = eigh(a)?;
    Ok(leading_from(&eig))
}

pub(crate) fn leading_from(eig: &EigenDecomposition) -> LeadingEigen {
    let mut vector = eig.vector(0).to_vec();
    normalize_sign(&mut vector);
    let gap = if eig.dim() > 1 {
        eig.values()[0] - eig.values()[1]
    } else {
        f64::INFINITY
    };
    LeadingEigen {
        vector,
        value: eig.values()[0],
        gap,
        degenerate: gap < DEGENERATE_GAP,
    }
}

/// Operator norm `max |λ|` by power iteration.
pub fn spectral_norm(a: &SymMatrix) -> f64 {
    let n = a.dim();
    if n == 0 || a.max_abs() == 0.0 {
        return 0.0;
    }
    // Fixed, non-symmetric start vector so no eigenvector is likely orthogonal to it.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 257) as f64 / 257.0).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut estimate = 0.0;
    for _ in 0..2000 {
        let w = a.matvec(&v);
        let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        // ‖Av‖ converges even when a ±λ pair makes v itself oscillate.
        let done = (wn - estimate).abs() <= 1e-12 * wn;
        estimate = wn;
        v = w.into_iter().map(|x| x / wn).collect();
        if done {
            break;
        }
    }
    estimate
}
