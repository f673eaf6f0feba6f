//! Sparsity order estimation from a single compressed measurement vector.
//!
//! The measurement `b = A·x + n` is cut into (possibly overlapping) blocks that
//! form the columns of a matrix `B`. When `A` is a Khatri-Rao product with the
//! right factor structure, the rank of `B` equals the number of non-zeros of `x`,
//! so the sparsity order can be read off with a model order selection test
//! before any reconstruction takes place.
//!
//! * [`linalg`]: complex matrices, Kronecker/Khatri-Rao products, coherence, Kruskal rank.
//! * [`vandermonde`]: closed-form column correlations of Vandermonde matrices and a
//!   low-coherence construction with certified bounds.
//! * [`soe`]: block reshaping, structured designs and the threshold-based order estimator.
//! * [`recovery`]: orthogonal matching pursuit and error metrics.
//! * [`harness`]: scenario configuration and Monte-Carlo sweeps producing CSV tables.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod random;
pub mod recovery;
pub mod soe;
pub mod vandermonde;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use recovery::{RecoveryResult, SparseSignal};
pub use soe::{BlockingScheme, MeasurementDesign, MosCalibration, Overlap};
pub use vandermonde::{CoherenceCertificate, EnvelopeParams, VandermondeSpec};
