use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::config::{Figure, MatrixKind, ScenarioConfig};
use crate::harness::runtime::{build_pool, thread_count, MosCache};
use crate::harness::signal::{add_noise, sample_signal, snr_to_variance};
use crate::harness::table::Table;
use crate::linalg::{coherence, normalize_columns, CMatrix, CVector};
use crate::random::{complex_gaussian_matrix, derive_seed, stream};
use crate::recovery::{l2_error, omp, support_success, RecoveryResult, SparseSignal};
use crate::soe::{
    blocking_for, build_nonoverlap_design, build_overlap_design, estimate_order, extract_blocks,
    MeasurementDesign, MosCalibration, Overlap,
};
use crate::vandermonde::{design_low_coherence, optimal_c, VandermondeSpec};

const TAG_MATRIX: u64 = 1;
const TAG_SIGNAL: u64 = 2;
const TAG_NOISE: u64 = 3;
const TAG_MOS: u64 = 4;

/// Step budgets of the unguided OMP runs.
pub const UNGUIDED_STEPS: [usize; 2] = [40, 20];

/// One Monte-Carlo trial of an estimation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub snr_db: f64,
    pub trial_index: usize,
    pub estimated_order: usize,
    pub true_order: usize,
    pub soe_correct: bool,
    pub omp_l2_error: Option<f64>,
    pub support_correct: Option<bool>,
}

/// A finished sweep: the CSV table plus human-readable remarks for the log.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    pub notes: Vec<String>,
}

fn gaussian_factor(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<CMatrix> {
    normalize_columns(&complex_gaussian_matrix(rows, cols, rng))
}

/// Two-ring Vandermonde factor with `n` powers and `cols` generators at the
/// coherence-optimal radius.
fn two_ring(n: usize, cols: usize) -> Result<VandermondeSpec> {
    let c = if cols > n { optimal_c(n, cols)? } else { 1.0 };
    design_low_coherence(n, cols, c)
}

/// The sensing design used by the estimation sweeps.
pub fn build_soe_design(cfg: &ScenarioConfig) -> Result<MeasurementDesign> {
    let kind = cfg.matrix_kind.unwrap_or(match cfg.overlap {
        Overlap::Disjoint => MatrixKind::GaussianKr,
        Overlap::Advance(_) => MatrixKind::VanderKr,
    });
    let mut rng = stream(cfg.seed, &[TAG_MATRIX, 0]);
    match (kind, cfg.overlap) {
        (MatrixKind::GaussianKr, Overlap::Disjoint) => {
            let s = blocking_for(cfg.m, Overlap::Disjoint)?;
            let phi = gaussian_factor(s.k(), cfg.n, &mut rng)?;
            let psi = gaussian_factor(s.ell(), cfg.n, &mut rng)?;
            build_nonoverlap_design(&phi, &psi)
        }
        (MatrixKind::VanderKr, Overlap::Disjoint) => {
            let s = blocking_for(cfg.m, Overlap::Disjoint)?;
            let phi = normalize_columns(&two_ring(s.k(), cfg.n)?.materialize()?)?;
            let psi = gaussian_factor(s.ell(), cfg.n, &mut rng)?;
            build_nonoverlap_design(&phi, &psi)
        }
        (MatrixKind::VanderKr, Overlap::Advance(p)) => {
            let v = two_ring(cfg.m.div_ceil(p), cfg.n)?;
            let psi = gaussian_factor(p, cfg.n, &mut rng)?;
            build_overlap_design(&v, &psi, cfg.m, p)
        }
        (MatrixKind::GaussianKr, Overlap::Advance(p)) => Err(Error::Config(format!(
            "matrix_kind gaussian_kr needs disjoint blocks, but p = {p}"
        ))),
        (other, _) => Err(Error::Config(format!(
            "matrix_kind {other} does not support sparsity order estimation"
        ))),
    }
}

fn dense_gaussian(cfg: &ScenarioConfig, variant: u64) -> Result<CMatrix> {
    let mut rng = stream(cfg.seed, &[TAG_MATRIX, variant]);
    gaussian_factor(cfg.m, cfg.n, &mut rng)
}

fn unit_circle(phases: impl Iterator<Item = f64>) -> Vec<Complex64> {
    phases.map(|a| Complex64::from_polar(1.0, a)).collect()
}

/// The four matrices compared in the Vandermonde sweep, in column order.
pub fn vander_comparison_matrices(cfg: &ScenarioConfig) -> Result<[CMatrix; 4]> {
    let (m, n) = (cfg.m, cfg.n);
    let tau = std::f64::consts::TAU;
    let mut rng = stream(cfg.seed, &[TAG_MATRIX, 2]);
    let uniform = VandermondeSpec::new(m, unit_circle((0..n).map(|_| tau * rng.random::<f64>())))?;
    let grid = VandermondeSpec::new(m, unit_circle((0..n).map(|k| tau * k as f64 / n as f64)))?;
    // Columns ordered by generator angle, so that support spacing measured on
    // column indices applies to the two-ring design as it does to the grid.
    let mut by_angle = two_ring(m, n)?.generators().to_vec();
    by_angle.sort_by(|a, b| a.arg().rem_euclid(tau).total_cmp(&b.arg().rem_euclid(tau)));
    let alg1 = VandermondeSpec::new(m, by_angle)?;
    Ok([
        normalize_columns(&uniform.materialize()?)?,
        normalize_columns(&grid.materialize()?)?,
        normalize_columns(&alg1.materialize()?)?,
        dense_gaussian(cfg, 3)?,
    ])
}

fn calibration(cfg: &ScenarioConfig, design: &MeasurementDesign) -> Result<MosCalibration> {
    let cache = MosCache::new(cfg.mos_cache_dir.as_deref());
    cache.get(design.scheme(), cfg.mos_pfa, cfg.mos_trials, derive_seed(cfg.seed, &[TAG_MOS]))
}

/// Runs `f(snr_index, trial)` for every pair and returns the results grouped by SNR.
fn over_grid<T: Send>(
    snrs: usize,
    trials: usize,
    f: impl Fn(usize, usize) -> Result<T> + Sync,
) -> Result<Vec<Vec<T>>> {
    let flat: Vec<T> = (0..snrs * trials)
        .into_par_iter()
        .map(|i| f(i / trials, i % trials))
        .collect::<Result<_>>()?;
    let mut it = flat.into_iter();
    Ok((0..snrs).map(|_| it.by_ref().take(trials).collect()).collect())
}

struct Draw {
    truth: SparseSignal,
    measured: CVector,
}

fn draw(cfg: &ScenarioConfig, snr_idx: usize, trial: usize, sigma2: f64, a: &CMatrix) -> Result<Draw> {
    let mut sig_rng = stream(cfg.seed, &[TAG_SIGNAL, trial as u64]);
    let truth = sample_signal(cfg.n, cfg.k, cfg.structured_support, cfg.m, &mut sig_rng)?;
    let clean = a.mul_vec(&truth.to_dense())?;
    let mut noise_rng = stream(cfg.seed, &[TAG_NOISE, snr_idx as u64, trial as u64]);
    let measured = add_noise(&clean, sigma2, &mut noise_rng)?;
    Ok(Draw { truth, measured })
}

/// Same noise realization for every matrix of a comparison.
fn noise_for(cfg: &ScenarioConfig, snr_idx: usize, trial: usize, sigma2: f64) -> Result<CVector> {
    let mut noise_rng = stream(cfg.seed, &[TAG_NOISE, snr_idx as u64, trial as u64]);
    add_noise(&CVector::zeros(cfg.m), sigma2, &mut noise_rng)
}

/// OMP that falls back to fewer steps when the selected columns become dependent.
fn omp_retrying(a: &CMatrix, b: &CVector, steps: usize) -> Result<RecoveryResult> {
    let mut s = steps;
    loop {
        match omp(a, b, s) {
            Err(Error::RankDeficient) if s > 0 => s -= 1,
            other => return other,
        }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 { 0.0 } else { sum / count as f64 }
}

fn rate(flags: impl Iterator<Item = bool>) -> f64 {
    mean(flags.map(|f| if f { 1.0 } else { 0.0 }))
}

fn soe_setup(cfg: &ScenarioConfig) -> Result<(MeasurementDesign, Vec<MosCalibration>)> {
    cfg.validate()?;
    let design = build_soe_design(cfg)?;
    let max_order = design.scheme().max_order();
    if cfg.k > max_order {
        return Err(Error::Config(format!(
            "K = {} exceeds the largest detectable order min(k, ell) = {max_order}",
            cfg.k
        )));
    }
    let unit = calibration(cfg, &design)?;
    let cals = cfg
        .snr_grid()
        .iter()
        .map(|&snr| unit.rescaled(snr_to_variance(snr)))
        .collect::<Result<_>>()?;
    Ok((design, cals))
}

fn soe_trial(
    cfg: &ScenarioConfig,
    design: &MeasurementDesign,
    cal: &MosCalibration,
    snr_db: f64,
    snr_idx: usize,
    trial: usize,
    guided: bool,
) -> Result<(TrialRecord, Draw)> {
    let d = draw(cfg, snr_idx, trial, snr_to_variance(snr_db), design.matrix())?;
    let blocks = extract_blocks(&d.measured, design.scheme())?;
    let estimated_order = estimate_order(&blocks, cal)?;
    let (omp_l2_error, support_correct) = if guided {
        let rec = omp_retrying(design.matrix(), &d.measured, estimated_order)?;
        (
            Some(l2_error(&rec.estimate, &d.truth)?),
            Some(support_success(&rec.estimate, &d.truth)?),
        )
    } else {
        (None, None)
    };
    let record = TrialRecord {
        snr_db,
        trial_index: trial,
        estimated_order,
        true_order: cfg.k,
        soe_correct: estimated_order == cfg.k,
        omp_l2_error,
        support_correct,
    };
    Ok((record, d))
}

/// Mean estimated order and success rate of the estimate, per SNR.
pub fn run_soe_sweep(cfg: &ScenarioConfig) -> Result<SweepOutput> {
    let (design, cals) = soe_setup(cfg)?;
    let snrs = cfg.snr_grid();
    let records = over_grid(snrs.len(), cfg.trials, |si, t| {
        soe_trial(cfg, &design, &cals[si], snrs[si], si, t, false).map(|r| r.0)
    })?;
    let mut table = Table::new(&["soe_mean", "soe_succ"]);
    for (snr, recs) in snrs.iter().zip(&records) {
        table.push(
            *snr,
            vec![
                mean(recs.iter().map(|r| r.estimated_order as f64)),
                rate(recs.iter().map(|r| r.soe_correct)),
            ],
        )?;
    }
    let s = design.scheme();
    Ok(SweepOutput {
        table,
        notes: vec![format!(
            "blocks: m={}, ell={}, p={}, k={}; design {:?}",
            s.m(),
            s.ell(),
            s.p(),
            s.k(),
            design.kind()
        )],
    })
}

/// OMP run for the estimated order against OMP run for fixed step budgets.
pub fn run_guided_omp_sweep(cfg: &ScenarioConfig) -> Result<SweepOutput> {
    let budget = cfg.m.min(cfg.n);
    if let Some(&too_many) = UNGUIDED_STEPS.iter().find(|&&s| s > budget) {
        return Err(Error::Config(format!(
            "unguided OMP needs {too_many} steps but min(m, N) = {budget}"
        )));
    }
    let (design, cals) = soe_setup(cfg)?;
    let snrs = cfg.snr_grid();
    let a = design.matrix();
    let rows = over_grid(snrs.len(), cfg.trials, |si, t| {
        let (rec, d) = soe_trial(cfg, &design, &cals[si], snrs[si], si, t, true)?;
        let unguided = UNGUIDED_STEPS
            .iter()
            .map(|&steps| l2_error(&omp_retrying(a, &d.measured, steps)?.estimate, &d.truth))
            .collect::<Result<Vec<f64>>>()?;
        Ok((rec, unguided))
    })?;
    let mut table = Table::new(&[
        "omp_soe_MSE",
        "omp_gauss_MSE_max1",
        "omp_gauss_MSE_max2",
        "soe_succ",
    ]);
    for (snr, recs) in snrs.iter().zip(&rows) {
        table.push(
            *snr,
            vec![
                mean(recs.iter().map(|r| r.0.omp_l2_error.unwrap_or(0.0))),
                mean(recs.iter().map(|r| r.1[0])),
                mean(recs.iter().map(|r| r.1[1])),
                rate(recs.iter().map(|r| r.0.soe_correct)),
            ],
        )?;
    }
    Ok(SweepOutput {
        table,
        notes: vec![format!("unguided step budgets {UNGUIDED_STEPS:?}")],
    })
}

/// OMP with the true order on the structured design and on a dense Gaussian matrix.
pub fn run_structure_cost_sweep(cfg: &ScenarioConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let design = build_soe_design(cfg)?;
    let structured = design.matrix();
    let gaussian = dense_gaussian(cfg, 1)?;
    let snrs = cfg.snr_grid();
    let rows = over_grid(snrs.len(), cfg.trials, |si, t| {
        let sigma2 = snr_to_variance(snrs[si]);
        let d = draw(cfg, si, t, sigma2, structured)?;
        let ours = l2_error(&omp_retrying(structured, &d.measured, cfg.k)?.estimate, &d.truth)?;
        let noise = noise_for(cfg, si, t, sigma2)?;
        let b = gaussian.mul_vec(&d.truth.to_dense())?.add(&noise);
        let theirs = l2_error(&omp_retrying(&gaussian, &b, cfg.k)?.estimate, &d.truth)?;
        Ok([ours, theirs])
    })?;
    let mut table = Table::new(&["omp_nosoe_MSE", "omp_gauss_MSE_true"]);
    for (snr, recs) in snrs.iter().zip(&rows) {
        table.push(*snr, vec![mean(recs.iter().map(|r| r[0])), mean(recs.iter().map(|r| r[1]))])?;
    }
    let notes = vec![format!(
        "coherence: structured design {:.4}, dense Gaussian {:.4}; overlap {}",
        coherence(structured)?,
        coherence(&gaussian)?,
        cfg.overlap
    )];
    Ok(SweepOutput { table, notes })
}

/// Support success and reconstruction error of the three Vandermonde variants
/// and a dense Gaussian matrix, with the true order known.
pub fn run_vander_comparison(cfg: &ScenarioConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if !cfg.structured_support {
        return Err(Error::Config("the Vandermonde comparison needs structured_support = true".into()));
    }
    let mats = vander_comparison_matrices(cfg)?;
    let snrs = cfg.snr_grid();
    let rows = over_grid(snrs.len(), cfg.trials, |si, t| {
        let sigma2 = snr_to_variance(snrs[si]);
        let mut sig_rng = stream(cfg.seed, &[TAG_SIGNAL, t as u64]);
        let truth = sample_signal(cfg.n, cfg.k, true, cfg.m, &mut sig_rng)?;
        let x = truth.to_dense();
        let noise = noise_for(cfg, si, t, sigma2)?;
        let mut out = [(false, 0.0); 4];
        for (slot, a) in out.iter_mut().zip(&mats) {
            let b = a.mul_vec(&x)?.add(&noise);
            let est = omp_retrying(a, &b, cfg.k)?.estimate;
            *slot = (support_success(&est, &truth)?, l2_error(&est, &truth)?);
        }
        Ok(out)
    })?;
    let mut table = Table::new(&[
        "vand_rnd_supp",
        "vand_reg_supp",
        "vand_opt_supp",
        "rnd_supp",
        "vand_rnd_MSE",
        "vand_reg_MSE",
        "vand_opt_MSE",
        "rnd_MSE",
    ]);
    for (snr, recs) in snrs.iter().zip(&rows) {
        let mut values: Vec<f64> = (0..4).map(|i| rate(recs.iter().map(|r| r[i].0))).collect();
        values.extend((0..4).map(|i| mean(recs.iter().map(|r| r[i].1))));
        table.push(*snr, values)?;
    }
    let mu = mats.iter().map(coherence).collect::<Result<Vec<_>>>()?;
    let notes = vec![format!(
        "coherence: uniform {:.4}, grid {:.4}, two-ring {:.4}, Gaussian {:.4}",
        mu[0], mu[1], mu[2], mu[3]
    )];
    Ok(SweepOutput { table, notes })
}

/// Runs the sweep behind `figure` on a worker pool of the given size (`None`
/// defers to the environment, `0` means one worker per core).
pub fn simulate(figure: Figure, cfg: &ScenarioConfig, threads: Option<usize>) -> Result<SweepOutput> {
    let pool = build_pool(thread_count(threads)?)?;
    pool.install(|| match figure {
        Figure::Soe => run_soe_sweep(cfg),
        Figure::GuidedOmp => run_guided_omp_sweep(cfg),
        Figure::StructureCost => run_structure_cost_sweep(cfg),
        Figure::VanderSupport | Figure::VanderError => run_vander_comparison(cfg),
    })
}
