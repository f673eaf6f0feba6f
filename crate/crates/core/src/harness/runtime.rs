use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::soe::{calibrate_mos_for_scheme, BlockingScheme, MosCalibration};

/// Environment variable capping the number of worker threads; `0` means one per core.
pub const THREADS_ENV: &str = "SOESTIM_THREADS";

/// Worker count from an explicit request or, failing that, the environment.
/// `0` lets the pool pick.
pub fn thread_count(explicit: Option<usize>) -> Result<usize> {
    if let Some(n) = explicit {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
        _ => Ok(0),
    }
}

pub fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
}

/// Unit-variance calibrations, optionally persisted under a directory.
#[derive(Debug, Clone, Default)]
pub struct MosCache {
    dir: Option<PathBuf>,
}

impl MosCache {
    pub fn new(dir: Option<&Path>) -> Self {
        Self { dir: dir.map(Path::to_path_buf) }
    }

    fn file_name(scheme: &BlockingScheme, pfa: f64, trials: usize, seed: u64) -> String {
        format!(
            "mos_m{}_l{}_p{}_k{}_pfa{pfa:?}_t{trials}_s{seed}.csv",
            scheme.m(),
            scheme.ell(),
            scheme.p(),
            scheme.k()
        )
    }

    pub fn get(
        &self,
        scheme: &BlockingScheme,
        pfa: f64,
        trials: usize,
        seed: u64,
    ) -> Result<MosCalibration> {
        let Some(dir) = &self.dir else {
            return calibrate_mos_for_scheme(scheme, 1.0, pfa, trials, seed);
        };
        let path = dir.join(Self::file_name(scheme, pfa, trials, seed));
        if path.exists() {
            if let Ok(cal) = MosCalibration::load(&path) {
                let advance = (!scheme.is_disjoint()).then_some(scheme.p());
                let matches = cal.ell() == scheme.ell()
                    && cal.k() == scheme.k()
                    && cal.advance() == advance
                    && cal.noise_variance() == 1.0
                    && cal.pfa() == pfa
                    && cal.trials() == trials
                    && cal.seed() == seed;
                if matches {
                    return Ok(cal);
                }
            }
        }
        let cal = calibrate_mos_for_scheme(scheme, 1.0, pfa, trials, seed)?;
        std::fs::create_dir_all(dir)?;
        cal.save(&path)?;
        Ok(cal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_reuses_saved_calibration() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MosCache::new(Some(dir.path()));
        let scheme = BlockingScheme::new(12, 6, 2, 4).unwrap();
        let first = cache.get(&scheme, 0.01, 1000, 5).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let second = cache.get(&scheme, 0.01, 1000, 5).unwrap();
        assert_eq!(first, second);
        assert_eq!(MosCache::default().get(&scheme, 0.01, 1000, 5).unwrap(), first);
    }

    #[test]
    fn explicit_thread_count_wins() {
        assert_eq!(thread_count(Some(3)).unwrap(), 3);
    }
}
