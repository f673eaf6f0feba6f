use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{least_squares, CMatrix, CVector};
use crate::recovery::SparseSignal;

/// Output of a pursuit run.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub estimate: SparseSignal,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Residual norm after each iteration, starting with `‖b‖`.
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OmpOptions {
    /// Stop early once the residual norm drops to this value. Off by default.
    pub residual_tol: Option<f64>,
}

/// Orthogonal matching pursuit for exactly `steps` iterations.
pub fn omp(a: &CMatrix, b: &CVector, steps: usize) -> Result<RecoveryResult> {
    omp_with(a, b, steps, OmpOptions::default())
}

pub fn omp_with(a: &CMatrix, b: &CVector, steps: usize, opts: OmpOptions) -> Result<RecoveryResult> {
    if b.len() != a.rows() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            actual: b.len(),
        });
    }
    if steps > a.rows().min(a.cols()) {
        return Err(Error::InvalidArgument(format!(
            "{steps} steps exceed min(rows, cols) = {}",
            a.rows().min(a.cols())
        )));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(steps);
    let mut taken = vec![false; a.cols()];
    let mut residual = b.clone();
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut history = vec![b.norm()];

    while chosen.len() < steps {
        if opts.residual_tol.is_some_and(|tol| residual.norm() <= tol) {
            break;
        }
        let corr = a.adjoint_mul_vec(&residual)?;
        let mut best: Option<(usize, f64)> = None;
        for (j, z) in corr.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let mag = z.norm();
            if best.is_none_or(|(_, m)| mag > m) {
                best = Some((j, mag));
            }
        }
        let (j, _) = best.expect("fewer steps than columns");
        taken[j] = true;
        chosen.push(j);

        let sub = a.select_columns(&chosen)?;
        let solved = least_squares(&sub, b)?;
        residual = b.sub(&sub.mul_vec(&solved)?);
        coeffs = solved.into_vec();
        history.push(residual.norm());
    }

    let estimate = SparseSignal::from_pairs(
        a.cols(),
        chosen.iter().copied().zip(coeffs.iter().copied()).collect(),
    )?;
    Ok(RecoveryResult {
        iterations: estimate.sparsity(),
        residual_norm: residual.norm(),
        estimate,
        residual_history: history,
    })
}

/// Largest `K` with `K < (1 + 1/μ)/2`, the sparsity up to which recovery is
/// unique and OMP is guaranteed to succeed. Boundary values within rounding
/// count as equality.
pub fn kmax_from_coherence(mu: f64) -> Result<usize> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain(format!("coherence must lie in (0, 1], got {mu}")));
    }
    let bound = 0.5 * (1.0 + 1.0 / mu);
    let floor = bound.floor();
    let k = if bound - floor <= 1e-12 * bound { floor - 1.0 } else { floor };
    Ok(k.max(0.0) as usize)
}
