use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::soe::Overlap;

/// Which figure-style sweep to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Estimated order against SNR.
    Soe,
    /// OMP guided by the estimated order against OMP with fixed step budgets.
    GuidedOmp,
    /// OMP with the true order on a structured design against a dense Gaussian matrix.
    StructureCost,
    /// Support success rates of the Vandermonde variants and a Gaussian matrix.
    VanderSupport,
    /// Reconstruction errors of the same comparison.
    VanderError,
}

impl Figure {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Self::Soe),
            3 => Ok(Self::GuidedOmp),
            4 => Ok(Self::StructureCost),
            5 => Ok(Self::VanderSupport),
            6 => Ok(Self::VanderError),
            _ => Err(Error::Config(format!("unknown figure {n}; expected 2, 3, 4, 5 or 6"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Khatri-Rao product of two Gaussian factors (disjoint blocks only).
    GaussianKr,
    /// Khatri-Rao product of a two-ring Vandermonde factor and a Gaussian factor.
    VanderKr,
    GaussianDense,
    /// Vandermonde matrix with generators drawn uniformly on the unit circle.
    VanderUniform,
    /// Vandermonde matrix with generators on the regular unit-circle grid.
    VanderGrid,
    /// Two-ring Vandermonde matrix with the coherence-optimal radius.
    VanderAlg1,
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gaussian_kr" => Self::GaussianKr,
            "vander_kr" => Self::VanderKr,
            "gaussian_dense" => Self::GaussianDense,
            "vander_uniform" => Self::VanderUniform,
            "vander_grid" => Self::VanderGrid,
            "vander_alg1" => Self::VanderAlg1,
            _ => return Err(Error::Config(format!("unknown matrix_kind {s:?}"))),
        })
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GaussianKr => "gaussian_kr",
            Self::VanderKr => "vander_kr",
            Self::GaussianDense => "gaussian_dense",
            Self::VanderUniform => "vander_uniform",
            Self::VanderGrid => "vander_grid",
            Self::VanderAlg1 => "vander_alg1",
        })
    }
}

/// Everything a sweep needs. `matrix_kind = None` lets the sweep pick the
/// design that fits the overlap mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub m: usize,
    pub overlap: Overlap,
    pub k: usize,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub trials: usize,
    pub seed: u64,
    pub matrix_kind: Option<MatrixKind>,
    pub structured_support: bool,
    pub mos_pfa: f64,
    pub mos_trials: usize,
    /// Directory for persisted threshold calibrations.
    pub mos_cache_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Desk-scale defaults for each figure.
    pub fn preset(figure: Figure) -> Self {
        let base = Self {
            n: 128,
            m: 64,
            overlap: Overlap::Advance(1),
            k: 6,
            snr_start_db: 0.0,
            snr_stop_db: 50.0,
            snr_step_db: 2.0,
            trials: 200,
            seed: 2024,
            matrix_kind: None,
            structured_support: false,
            mos_pfa: 0.005,
            mos_trials: 2000,
            mos_cache_dir: None,
        };
        match figure {
            Figure::Soe => base,
            Figure::GuidedOmp => Self {
                m: 81,
                overlap: Overlap::Disjoint,
                snr_start_db: 10.0,
                ..base
            },
            Figure::StructureCost => Self {
                m: 96,
                snr_stop_db: 30.0,
                ..base
            },
            Figure::VanderSupport | Figure::VanderError => Self {
                m: 64,
                overlap: Overlap::Disjoint,
                k: 4,
                snr_start_db: -20.0,
                snr_stop_db: 20.0,
                structured_support: true,
                ..base
            },
        }
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let span = self.snr_stop_db - self.snr_start_db;
        let count = (span / self.snr_step_db + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.snr_start_db + i as f64 * self.snr_step_db)
            .collect()
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and text after
    /// `#` are ignored; unknown keys are errors.
    pub fn apply_text(mut self, text: &str) -> Result<Self> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("invalid value {v:?} for {key}")))
        }
        match key {
            "N" => self.n = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "p" => {
                self.overlap = match value {
                    "none" | "ell" => Overlap::Disjoint,
                    v => Overlap::from_advance(num(key, v)?),
                }
            }
            "K" => self.k = num(key, value)?,
            "snr_start_db" => self.snr_start_db = num(key, value)?,
            "snr_stop_db" => self.snr_stop_db = num(key, value)?,
            "snr_step_db" => self.snr_step_db = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "matrix_kind" => {
                self.matrix_kind = match value {
                    "auto" => None,
                    v => Some(v.parse()?),
                }
            }
            "structured_support" => self.structured_support = num(key, value)?,
            "mos_pfa" => self.mos_pfa = num(key, value)?,
            "mos_trials" => self.mos_trials = num(key, value)?,
            "mos_cache_dir" => {
                self.mos_cache_dir = if value.is_empty() { None } else { Some(PathBuf::from(value)) }
            }
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Checks the settings shared by all sweeps.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n == 0 || self.m == 0 {
            return fail("N and m must be positive".into());
        }
        if self.k > self.n || self.k > self.m {
            return fail(format!("K = {} exceeds N = {} or m = {}", self.k, self.n, self.m));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        let snr_ok = [self.snr_start_db, self.snr_stop_db, self.snr_step_db]
            .iter()
            .all(|v| v.is_finite());
        if !snr_ok || self.snr_step_db <= 0.0 || self.snr_stop_db < self.snr_start_db {
            return fail("SNR grid needs finite start ≤ stop and a positive step".into());
        }
        if !(self.mos_pfa > 0.0 && self.mos_pfa < 0.5) {
            return fail(format!("mos_pfa must lie in (0, 0.5), got {}", self.mos_pfa));
        }
        if self.mos_trials < crate::soe::MIN_CALIBRATION_TRIALS {
            return fail(format!(
                "mos_trials must be at least {}",
                crate::soe::MIN_CALIBRATION_TRIALS
            ));
        }
        if let Overlap::Advance(p) = self.overlap {
            if p > self.m {
                return fail(format!("p = {p} exceeds m = {}", self.m));
            }
        }
        Ok(())
    }
}
