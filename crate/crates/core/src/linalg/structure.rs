use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::decomp::{rank_from_singular_values, singular_values, DEFAULT_RANK_TOL};
use crate::linalg::CMatrix;

/// Default cap on the number of column subsets examined by [`kruskal_rank`].
pub const DEFAULT_SUBSET_BUDGET: u128 = 1_000_000;

/// Settings for the brute-force Kruskal rank computation.
#[derive(Debug, Clone, Copy)]
pub struct KruskalOptions {
    pub rel_tol: f64,
    pub subset_budget: u128,
}

impl Default for KruskalOptions {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_RANK_TOL,
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }
}

fn nonzero_column_norms(a: &CMatrix) -> Result<Vec<f64>> {
    (0..a.cols())
        .map(|j| {
            let n = a.column_norm(j);
            if n == 0.0 {
                Err(Error::ZeroColumn(j))
            } else {
                Ok(n)
            }
        })
        .collect()
}

/// Mutual coherence: the largest normalized inner product between two distinct columns.
pub fn coherence(a: &CMatrix) -> Result<f64> {
    if a.cols() < 2 {
        return Err(Error::TooFewColumns(a.cols()));
    }
    let norms = nonzero_column_norms(a)?;
    let unit = normalize_with(a, &norms);
    let gram = unit.adjoint().matmul(&unit)?;
    let mut mu: f64 = 0.0;
    for i in 0..a.cols() {
        for j in (i + 1)..a.cols() {
            mu = mu.max(gram[(i, j)].norm());
        }
    }
    Ok(mu.min(1.0))
}

fn normalize_with(a: &CMatrix, norms: &[f64]) -> CMatrix {
    CMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)] / norms[c])
}

/// Scales every column to unit ℓ₂ norm.
pub fn normalize_columns(a: &CMatrix) -> Result<CMatrix> {
    let norms = nonzero_column_norms(a)?;
    Ok(normalize_with(a, &norms))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Kruskal rank with the default tolerance and subset budget.
pub fn kruskal_rank(a: &CMatrix, r_max: usize) -> Result<usize> {
    kruskal_rank_with(a, r_max, KruskalOptions::default())
}

/// Largest `r ≤ r_max` such that every set of `r` columns has full column rank.
///
/// Exhaustive over column subsets, so only meant for small matrices. The total
/// number of subsets that could be visited is checked against the budget up front.
pub fn kruskal_rank_with(a: &CMatrix, r_max: usize, opts: KruskalOptions) -> Result<usize> {
    let limit = a.rows().min(a.cols());
    if r_max > limit {
        return Err(Error::InvalidArgument(format!(
            "r_max = {r_max} exceeds min(rows, cols) = {limit}"
        )));
    }
    let needed: u128 = (1..=r_max).map(|r| binomial(a.cols(), r)).sum();
    if needed > opts.subset_budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.subset_budget,
        });
    }
    for r in 1..=r_max {
        for subset in (0..a.cols()).combinations(r) {
            let sub = a.select_columns(&subset)?;
            let sv = singular_values(&sub)?;
            if rank_from_singular_values(&sv, opts.rel_tol) < r {
                return Ok(r - 1);
            }
        }
    }
    Ok(r_max)
}
