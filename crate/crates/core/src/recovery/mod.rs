//! Orthogonal matching pursuit and the error metrics used to score reconstructions.

mod omp;
mod signal;

pub use omp::{kmax_from_coherence, omp, omp_with, OmpOptions, RecoveryResult};
pub use signal::{l2_error, support_success, SparseSignal};
