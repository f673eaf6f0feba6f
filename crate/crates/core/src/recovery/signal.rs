use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CVector;

/// A vector of length `dim` stored as its support (0-based, strictly
/// increasing) and the amplitudes on that support.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    dim: usize,
    support: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl SparseSignal {
    pub fn new(dim: usize, support: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if support.len() != amplitudes.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                actual: amplitudes.len(),
            });
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("support must be strictly increasing".into()));
        }
        if let Some(&last) = support.last() {
            if last >= dim {
                return Err(Error::InvalidArgument(format!("index {last} outside dimension {dim}")));
            }
        }
        Ok(Self { dim, support, amplitudes })
    }

    /// Builds a signal from unordered `(index, amplitude)` pairs.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, Complex64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        let (support, amplitudes) = pairs.into_iter().unzip();
        Self::new(dim, support, amplitudes)
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, support: Vec::new(), amplitudes: Vec::new() }
    }

    /// Keeps the non-zero entries of a dense vector.
    pub fn from_dense(x: &CVector) -> Self {
        let (support, amplitudes) = x
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() != 0.0)
            .map(|(i, &z)| (i, z))
            .unzip();
        Self { dim: x.len(), support, amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> CVector {
        let mut x = CVector::zeros(self.dim);
        for (&i, &a) in self.support.iter().zip(&self.amplitudes) {
            x[i] = a;
        }
        x
    }
}

fn same_dim(a: &SparseSignal, b: &SparseSignal) -> Result<()> {
    if a.dim == b.dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("signal dimensions {} and {}", a.dim, b.dim)))
    }
}

/// Whether both signals have exactly the same support.
pub fn support_success(est: &SparseSignal, truth: &SparseSignal) -> Result<bool> {
    same_dim(est, truth)?;
    Ok(est.support == truth.support)
}

/// Euclidean distance between the two signals.
pub fn l2_error(est: &SparseSignal, truth: &SparseSignal) -> Result<f64> {
    same_dim(est, truth)?;
    Ok(est.to_dense().sub(&truth.to_dense()).norm())
}
