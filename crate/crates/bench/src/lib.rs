//! Deterministic inputs shared by the kernel benchmarks.

use soestim_core::harness::sample_signal;
use soestim_core::linalg::normalize_columns;
use soestim_core::random::{complex_gaussian_matrix, stream};
use soestim_core::{CMatrix, CVector};

/// Column-normalized complex Gaussian matrix.
pub fn gaussian(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = stream(seed, &[rows as u64, cols as u64]);
    normalize_columns(&complex_gaussian_matrix(rows, cols, &mut rng)).expect("nonzero columns")
}

/// A noiseless measurement of a random `k`-sparse signal through `a`.
pub fn sparse_measurement(a: &CMatrix, k: usize, seed: u64) -> CVector {
    let mut rng = stream(seed, &[k as u64]);
    let x = sample_signal(a.cols(), k, false, 1, &mut rng).expect("k fits the dimension");
    a.mul_vec(&x.to_dense()).expect("matching shapes")
}
