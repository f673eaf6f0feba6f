//! Threshold test on the singular values of the block matrix.
//!
//! Once `j − 1` signal components have been counted, the `j`-th singular value
//! of `B` is governed by the noise left in the complement of the signal
//! subspaces, an `(ℓ − j + 1) × (k − j + 1)` compression. Threshold `j` is the
//! `1 − pfa` quantile of the largest singular value of that compression under
//! pure noise, sampled by Monte-Carlo. Noise is rotated by Haar unitaries so
//! the complement is generic, then cut to its trailing block. For i.i.d.
//! entries the rotation changes nothing and is skipped. The first threshold is
//! the quantile of `σ_1` of the full noise matrix, so the false alarm rate of
//! the test is `pfa`. The estimated order is the number of leading singular
//! values that exceed their thresholds.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_values, CMatrix};
use crate::random::{complex_gaussian_matrix, complex_gaussian_vector, haar_unitary, stream};
use crate::soe::blocking::{extract_blocks, BlockingScheme};

/// Fewest Monte-Carlo trials accepted for a calibration.
pub const MIN_CALIBRATION_TRIALS: usize = 1000;

/// Per-index singular value thresholds for pure-noise block matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MosCalibration {
    ell: usize,
    k: usize,
    advance: Option<usize>,
    noise_variance: f64,
    pfa: f64,
    trials: usize,
    seed: u64,
    thresholds: Vec<f64>,
}

fn check_inputs(noise_variance: f64, pfa: f64, trials: usize) -> Result<()> {
    if !(noise_variance > 0.0 && noise_variance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be positive, got {noise_variance}"
        )));
    }
    if !(pfa > 0.0 && pfa < 0.5) {
        return Err(Error::InvalidArgument(format!("pfa must lie in (0, 0.5), got {pfa}")));
    }
    if trials < MIN_CALIBRATION_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_CALIBRATION_TRIALS} calibration trials, got {trials}"
        )));
    }
    Ok(())
}

/// Calibrates on `ell × k` matrices with i.i.d. entries, which is the
/// distribution of disjoint blocks.
pub fn calibrate_mos(
    ell: usize,
    k: usize,
    noise_variance: f64,
    pfa: f64,
    trials: usize,
    seed: u64,
) -> Result<MosCalibration> {
    check_inputs(noise_variance, pfa, trials)?;
    if ell == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("empty block shape {ell}×{k}")));
    }
    let scale = num_complex::Complex64::new(noise_variance.sqrt(), 0.0);
    let samples = sample_complement_norms(trials, |t| {
        let mut rng = stream(seed, &[t as u64]);
        Ok(complex_gaussian_matrix(ell, k, &mut rng).scale(scale))
    })?;
    Ok(MosCalibration {
        ell,
        k,
        advance: None,
        noise_variance,
        pfa,
        trials,
        seed,
        thresholds: quantiles(samples, pfa),
    })
}

/// Calibrates on noise vectors cut into blocks by `scheme`. Overlapping blocks
/// share samples, which shifts the singular value distribution upward compared
/// with i.i.d. matrices of the same shape.
pub fn calibrate_mos_for_scheme(
    scheme: &BlockingScheme,
    noise_variance: f64,
    pfa: f64,
    trials: usize,
    seed: u64,
) -> Result<MosCalibration> {
    if scheme.is_disjoint() {
        return calibrate_mos(scheme.ell(), scheme.k(), noise_variance, pfa, trials, seed);
    }
    check_inputs(noise_variance, pfa, trials)?;
    let samples = sample_complement_norms(trials, |t| {
        let mut rng = stream(seed, &[t as u64]);
        let noise = extract_blocks(&complex_gaussian_vector(scheme.m(), noise_variance, &mut rng), scheme)?;
        let left = haar_unitary(scheme.ell(), &mut rng);
        let right = haar_unitary(scheme.k(), &mut rng);
        left.adjoint().matmul(&noise)?.matmul(&right)
    })?;
    Ok(MosCalibration {
        ell: scheme.ell(),
        k: scheme.k(),
        advance: Some(scheme.p()),
        noise_variance,
        pfa,
        trials,
        seed,
        thresholds: quantiles(samples, pfa),
    })
}

/// Per trial, `σ_1` of the trailing `(ℓ − j) × (k − j)` block for each `j`.
fn sample_complement_norms(
    trials: usize,
    draw: impl Fn(usize) -> Result<CMatrix> + Sync,
) -> Result<Vec<Vec<f64>>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let noise = draw(t)?;
            let (rows, cols) = noise.shape();
            let mut norms = Vec::with_capacity(rows.min(cols));
            let mut top = f64::INFINITY;
            for j in 0..rows.min(cols) {
                let block = CMatrix::from_fn(rows - j, cols - j, |r, c| noise[(r + j, c + j)]);
                // Nested blocks cannot have larger norm; clamp away SVD rounding.
                top = top.min(singular_values(&block)?[0]);
                norms.push(top);
            }
            Ok(norms)
        })
        .collect()
}

fn quantiles(samples: Vec<Vec<f64>>, pfa: f64) -> Vec<f64> {
    let trials = samples.len();
    let idx = (((1.0 - pfa) * trials as f64).ceil() as usize).clamp(1, trials) - 1;
    let count = samples[0].len();
    (0..count)
        .map(|j| {
            let mut col: Vec<f64> = samples.iter().map(|s| s[j]).collect();
            col.sort_by(f64::total_cmp);
            col[idx]
        })
        .collect()
}

impl MosCalibration {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Block advance used for calibration, or `None` for i.i.d. matrices.
    pub fn advance(&self) -> Option<usize> {
        self.advance
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn pfa(&self) -> f64 {
        self.pfa
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Thresholds for `σ_1 ≥ σ_2 ≥ …`, one per singular value.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// The same calibration for a different noise variance. Singular values of
    /// noise scale with the standard deviation, so the quantiles do too.
    pub fn rescaled(&self, noise_variance: f64) -> Result<Self> {
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        let factor = (noise_variance / self.noise_variance).sqrt();
        Ok(Self {
            noise_variance,
            thresholds: self.thresholds.iter().map(|t| t * factor).collect(),
            ..self.clone()
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ell,k,variance,pfa,trials,seed");
        if self.advance.is_some() {
            out.push_str(",p");
        }
        let _ = write!(
            out,
            "\n{},{},{:?},{:?},{},{}",
            self.ell, self.k, self.noise_variance, self.pfa, self.trials, self.seed
        );
        if let Some(p) = self.advance {
            let _ = write!(out, ",{p}");
        }
        out.push_str("\nj,threshold\n");
        for (j, t) in self.thresholds.iter().enumerate() {
            let _ = writeln!(out, "{},{:?}", j + 1, t);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("calibration file: {what}"));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let with_p = match header {
            "ell,k,variance,pfa,trials,seed" => false,
            "ell,k,variance,pfa,trials,seed,p" => true,
            _ => return Err(bad("unexpected header")),
        };
        let values: Vec<&str> = lines.next().ok_or_else(|| bad("missing values"))?.split(',').collect();
        if values.len() != 6 + usize::from(with_p) {
            return Err(bad("wrong number of values"));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad("bad integer"));
        let real = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let ell = int(values[0])?;
        let k = int(values[1])?;
        let noise_variance = real(values[2])?;
        let pfa = real(values[3])?;
        let trials = int(values[4])?;
        let seed = values[5].parse::<u64>().map_err(|_| bad("bad seed"))?;
        let advance = if with_p { Some(int(values[6])?) } else { None };
        if lines.next() != Some("j,threshold") {
            return Err(bad("missing threshold header"));
        }
        let mut thresholds = Vec::new();
        for line in lines {
            let (j, t) = line.split_once(',').ok_or_else(|| bad("bad threshold row"))?;
            if int(j)? != thresholds.len() + 1 {
                return Err(bad("threshold rows out of order"));
            }
            thresholds.push(real(t)?);
        }
        if thresholds.len() != ell.min(k) {
            return Err(bad("threshold count does not match block shape"));
        }
        if thresholds.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(bad("thresholds must be positive"));
        }
        if thresholds.windows(2).any(|w| w[1] > w[0]) {
            return Err(bad("thresholds must be non-increasing"));
        }
        Ok(Self { ell, k, advance, noise_variance, pfa, trials, seed, thresholds })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Anything that turns a block matrix into a sparsity order estimate.
pub trait OrderEstimator {
    fn estimate(&self, b: &CMatrix) -> Result<usize>;
}

impl OrderEstimator for MosCalibration {
    fn estimate(&self, b: &CMatrix) -> Result<usize> {
        estimate_order(b, self)
    }
}

/// Noise-free estimator: the numerical rank at a relative tolerance.
#[derive(Debug, Clone, Copy)]
pub struct RankEstimator {
    pub rel_tol: f64,
}

impl OrderEstimator for RankEstimator {
    fn estimate(&self, b: &CMatrix) -> Result<usize> {
        estimate_order_noiseless(b, self.rel_tol)
    }
}

/// Number of leading singular values of `b_hat` that exceed their thresholds,
/// stopping at the first one that does not.
pub fn estimate_order(b_hat: &CMatrix, cal: &MosCalibration) -> Result<usize> {
    if b_hat.shape() != (cal.ell, cal.k) {
        return Err(Error::ShapeMismatch {
            expected: (cal.ell, cal.k),
            actual: b_hat.shape(),
        });
    }
    let sv = singular_values(b_hat)?;
    Ok(sv
        .iter()
        .zip(&cal.thresholds)
        .take_while(|(s, t)| s > t)
        .count())
}

pub fn estimate_order_noiseless(b: &CMatrix, rel_tol: f64) -> Result<usize> {
    numerical_rank(b, rel_tol)
}
