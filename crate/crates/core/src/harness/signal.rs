use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::random::complex_gaussian;
use crate::recovery::SparseSignal;

const MAX_REJECTIONS: usize = 1_000_000;

/// Noise variance belonging to an SNR in dB.
pub fn snr_to_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Smallest circular index distance allowed between two support entries when
/// their regular-grid arguments `2πj/N` must differ by more than `2π/n_rows`.
pub fn min_support_gap(dim: usize, n_rows: usize) -> usize {
    dim / n_rows + 1
}

fn circular_gaps_ok(support: &[usize], dim: usize, min_gap: usize) -> bool {
    if support.len() < 2 {
        return true;
    }
    let wrap = support[0] + dim - support[support.len() - 1];
    wrap >= min_gap && support.windows(2).all(|w| w[1] - w[0] >= min_gap)
}

/// A `k`-sparse signal of length `dim` with amplitudes drawn uniformly from
/// `{±1 ± i}` and a uniformly drawn support.
///
/// With `structured`, only supports whose entries are pairwise more than
/// `dim / n_rows` apart on the index circle are accepted, so that the
/// corresponding unit-circle generators are separated by more than `2π/n_rows`.
pub fn sample_signal<R: Rng + ?Sized>(
    dim: usize,
    k: usize,
    structured: bool,
    n_rows: usize,
    rng: &mut R,
) -> Result<SparseSignal> {
    if k > dim {
        return Err(Error::Infeasible(format!("sparsity {k} exceeds dimension {dim}")));
    }
    let mut support: Vec<usize>;
    if structured {
        if n_rows == 0 {
            return Err(Error::InvalidArgument("n_rows must be positive".into()));
        }
        let gap = min_support_gap(dim, n_rows);
        if k > 1 && k * gap > dim {
            return Err(Error::Infeasible(format!(
                "{k} entries with spacing {gap} do not fit on {dim} indices"
            )));
        }
        let mut tries = 0;
        loop {
            support = sample(rng, dim, k).into_vec();
            support.sort_unstable();
            if circular_gaps_ok(&support, dim, gap) {
                break;
            }
            tries += 1;
            if tries == MAX_REJECTIONS {
                return Err(Error::Infeasible(format!(
                    "no admissible support after {MAX_REJECTIONS} draws"
                )));
            }
        }
    } else {
        support = sample(rng, dim, k).into_vec();
        support.sort_unstable();
    }
    let amplitudes = support
        .iter()
        .map(|_| {
            let re = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let im = if rng.random::<bool>() { 1.0 } else { -1.0 };
            Complex64::new(re, im)
        })
        .collect();
    SparseSignal::new(dim, support, amplitudes)
}

/// `b` plus circular complex Gaussian noise of per-entry variance `sigma2`.
pub fn add_noise<R: Rng + ?Sized>(b: &CVector, sigma2: f64, rng: &mut R) -> Result<CVector> {
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise variance must be non-negative, got {sigma2}")));
    }
    if sigma2 == 0.0 {
        return Ok(b.clone());
    }
    let mut out = b.clone();
    for i in 0..out.len() {
        out[i] += complex_gaussian(rng, sigma2);
    }
    Ok(out)
}
