//! Seeded random streams and complex Gaussian sampling.
//!
//! Every Monte-Carlo trial draws from its own stream, derived from a base seed
//! and a tuple of indices. Results therefore do not depend on the order in
//! which trials are executed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector};

pub type StreamRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `seed` with a sequence of indices into an independent stream seed.
pub fn derive_seed(seed: u64, indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(splitmix64(seed), |acc, &i| splitmix64(acc ^ splitmix64(i.wrapping_add(0x51_7C_C1_B7))))
}

pub fn stream(seed: u64, indices: &[u64]) -> StreamRng {
    rng_from_seed(derive_seed(seed, indices))
}

/// Circularly symmetric complex Gaussian with total variance `variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Matrix with i.i.d. unit-variance circular complex Gaussian entries.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, 1.0))
}

/// Vector of i.i.d. circular complex Gaussian entries with the given variance.
pub fn complex_gaussian_vector<R: Rng + ?Sized>(len: usize, variance: f64, rng: &mut R) -> CVector {
    let mut v = CVector::zeros(len);
    for i in 0..len {
        v[i] = complex_gaussian(rng, variance);
    }
    v
}

/// Unitary matrix drawn from the Haar measure, via QR of a Gaussian matrix
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = complex_gaussian_matrix(n, n, rng).to_nalgebra().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    CMatrix::from_nalgebra(&q).expect("unitary factor is finite")
}
