use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// How consecutive blocks of the measurement vector relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    /// Blocks tile the measurement vector; the advance equals the block length.
    Disjoint,
    /// Each block starts `p` samples after the previous one.
    Advance(usize),
}

impl Overlap {
    /// Reads the integer convention where `0` stands for disjoint blocks.
    pub fn from_advance(p: usize) -> Self {
        if p == 0 { Self::Disjoint } else { Self::Advance(p) }
    }
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disjoint => f.write_str("none"),
            Self::Advance(p) => write!(f, "{p}"),
        }
    }
}

/// Cutting `m` measurements into `k` blocks of length `ell`, each starting `p`
/// samples after the previous one, so that `ell + p·(k−1) = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingScheme {
    m: usize,
    ell: usize,
    p: usize,
    k: usize,
}

impl BlockingScheme {
    pub fn new(m: usize, ell: usize, p: usize, k: usize) -> Result<Self> {
        if k == 0 || p == 0 || p > ell || ell > m {
            return Err(Error::Infeasible(format!(
                "need k ≥ 1 and 1 ≤ p ≤ ell ≤ m, got m={m}, ell={ell}, p={p}, k={k}"
            )));
        }
        if ell + p * (k - 1) != m {
            return Err(Error::Infeasible(format!(
                "ell + p(k−1) = {} does not equal m = {m}",
                ell + p * (k - 1)
            )));
        }
        Ok(Self { m, ell, p, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest sparsity order the block matrix can reveal.
    pub fn max_order(&self) -> usize {
        self.ell.min(self.k)
    }

    pub fn is_disjoint(&self) -> bool {
        self.p == self.ell
    }
}

/// Block parameters for `m` measurements; `p = 0` selects disjoint blocks.
pub fn blocking_params(m: usize, p: usize) -> Result<BlockingScheme> {
    blocking_for(m, Overlap::from_advance(p))
}

/// Picks the block length that maximizes `min(k, ell)`, preferring the longer
/// block when two choices tie.
pub fn blocking_for(m: usize, overlap: Overlap) -> Result<BlockingScheme> {
    if m == 0 {
        return Err(Error::Infeasible("no measurements to block".into()));
    }
    match overlap {
        Overlap::Disjoint => {
            let k = (1..=m)
                .take_while(|k| k * k <= m)
                .filter(|k| m.is_multiple_of(*k))
                .last()
                .ok_or_else(|| Error::Infeasible(format!("no factorization of {m}")))?;
            BlockingScheme::new(m, m / k, m / k, k)
        }
        Overlap::Advance(p) => {
            if p == 0 || p > m {
                return Err(Error::Infeasible(format!("advance {p} outside 1..={m}")));
            }
            let best = (p..=m)
                .filter(|ell| (m - ell).is_multiple_of(p))
                .map(|ell| (ell, (m - ell) / p + 1))
                .max_by_key(|&(ell, k)| (ell.min(k), ell))
                .ok_or_else(|| Error::Infeasible(format!("no block length for m={m}, p={p}")))?;
            BlockingScheme::new(m, best.0, p, best.1)
        }
    }
}

/// The `ell × k` matrix whose column `i` is `b[p·i .. p·i + ell]`.
pub fn extract_blocks(b: &CVector, scheme: &BlockingScheme) -> Result<CMatrix> {
    extract_blocks_slice(b.as_slice(), scheme)
}

pub(crate) fn extract_blocks_slice(
    b: &[num_complex::Complex64],
    scheme: &BlockingScheme,
) -> Result<CMatrix> {
    if b.len() != scheme.m {
        return Err(Error::LengthMismatch {
            expected: scheme.m,
            actual: b.len(),
        });
    }
    Ok(CMatrix::from_fn(scheme.ell, scheme.k, |r, c| b[scheme.p * c + r]))
}
