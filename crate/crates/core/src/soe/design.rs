use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{khatri_rao, kruskal_rank_with, normalize_columns, CMatrix, KruskalOptions};
use crate::random::{complex_gaussian_vector, stream};
use crate::soe::blocking::{blocking_params, extract_blocks, BlockingScheme};
use crate::vandermonde::VandermondeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    NonOverlap,
    Overlap,
}

/// A sensing matrix together with the factors that make its block matrix low rank.
#[derive(Debug, Clone)]
pub struct MeasurementDesign {
    kind: DesignKind,
    factor: CMatrix,
    vandermonde: Option<VandermondeSpec>,
    psi: CMatrix,
    scheme: BlockingScheme,
    matrix: CMatrix,
}

impl MeasurementDesign {
    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    /// `Φ` for disjoint blocks, the materialized Vandermonde factor otherwise.
    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn vandermonde(&self) -> Option<&VandermondeSpec> {
        self.vandermonde.as_ref()
    }

    pub fn psi(&self) -> &CMatrix {
        &self.psi
    }

    pub fn scheme(&self) -> &BlockingScheme {
        &self.scheme
    }

    /// The column-normalized `m × N` sensing matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn signal_dim(&self) -> usize {
        self.matrix.cols()
    }
}

/// `A = Φ ◊ Ψ` with `Φ` of size `k × N` and `Ψ` of size `ell × N`, cut into `k`
/// disjoint blocks of length `ell`.
pub fn build_nonoverlap_design(phi: &CMatrix, psi: &CMatrix) -> Result<MeasurementDesign> {
    let raw = khatri_rao(phi, psi)?;
    let (k, ell) = (phi.rows(), psi.rows());
    let scheme = BlockingScheme::new(k * ell, ell, ell, k)?;
    Ok(MeasurementDesign {
        kind: DesignKind::NonOverlap,
        factor: phi.clone(),
        vandermonde: None,
        psi: psi.clone(),
        scheme,
        matrix: normalize_columns(&raw)?,
    })
}

/// First `m` rows of `V ◊ Ψ`, where `V` has `⌈m/p⌉` powers and `Ψ` has `p` rows.
pub fn build_overlap_design(
    v: &VandermondeSpec,
    psi: &CMatrix,
    m: usize,
    p: usize,
) -> Result<MeasurementDesign> {
    if p == 0 || m == 0 {
        return Err(Error::DimensionMismatch("advance and measurement count must be positive".into()));
    }
    let n = m.div_ceil(p);
    if v.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "Vandermonde factor has {} rows, expected ⌈m/p⌉ = {n}",
            v.n()
        )));
    }
    if psi.rows() != p {
        return Err(Error::DimensionMismatch(format!("Ψ has {} rows, expected p = {p}", psi.rows())));
    }
    if psi.cols() != v.m() {
        return Err(Error::ColumnCountMismatch {
            left: v.m(),
            right: psi.cols(),
        });
    }
    let scheme = blocking_params(m, p)?;
    let factor = v.materialize()?;
    let raw = khatri_rao(&factor, psi)?.top_rows(m)?;
    Ok(MeasurementDesign {
        kind: DesignKind::Overlap,
        factor,
        vandermonde: Some(v.clone()),
        psi: psi.clone(),
        scheme,
        matrix: normalize_columns(&raw)?,
    })
}

/// Outcome of [`verify_design`]. Kruskal ranks are only evaluated up to `required`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignReport {
    pub ok: bool,
    pub required: usize,
    pub left_kruskal: usize,
    pub right_kruskal: usize,
    pub details: String,
}

/// Checks the Kruskal-rank conditions under which rank(B) equals the sparsity
/// for every `x` with at most `r` non-zeros.
pub fn verify_design(d: &MeasurementDesign, r: usize) -> Result<DesignReport> {
    verify_design_with(d, r, KruskalOptions::default())
}

pub fn verify_design_with(
    d: &MeasurementDesign,
    r: usize,
    opts: KruskalOptions,
) -> Result<DesignReport> {
    let s = d.scheme;
    if r > s.max_order() {
        return Err(Error::InvalidArgument(format!(
            "r = {r} exceeds min(k, ell) = {}",
            s.max_order()
        )));
    }
    let (left, right, names) = match (&d.kind, &d.vandermonde) {
        (DesignKind::NonOverlap, _) => (d.factor.clone(), d.psi.clone(), ("Φ", "Ψ")),
        (DesignKind::Overlap, Some(v)) => {
            let left = v.with_rows(s.k())?.materialize()?;
            let upper = v.with_rows(s.ell().div_ceil(s.p()))?.materialize()?;
            let right = khatri_rao(&upper, &d.psi)?.top_rows(s.ell())?;
            (left, right, ("V_k", "Ψ̂"))
        }
        (DesignKind::Overlap, None) => unreachable!("overlap designs always carry their generators"),
    };
    let left_kruskal = kruskal_rank_with(&left, r.min(left.rows().min(left.cols())), opts)?;
    let right_kruskal = kruskal_rank_with(&right, r.min(right.rows().min(right.cols())), opts)?;
    let ok = left_kruskal >= r && right_kruskal >= r;
    Ok(DesignReport {
        ok,
        required: r,
        left_kruskal,
        right_kruskal,
        details: format!(
            "kruskal({}) ≥ {left_kruskal}, kruskal({}) ≥ {right_kruskal}, required {r}",
            names.0, names.1
        ),
    })
}

const GRAM_CHUNK: usize = 256;

/// Relative Frobenius deviation of the empirical `E[N·Nᴴ]` of blocked
/// unit-variance noise from `k·I`.
pub fn noise_gram_check(scheme: &BlockingScheme, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let ell = scheme.ell();
    let chunks: Vec<CMatrix> = (0..trials.div_ceil(GRAM_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = CMatrix::zeros(ell, ell);
            for t in c * GRAM_CHUNK..((c + 1) * GRAM_CHUNK).min(trials) {
                let mut rng = stream(seed, &[t as u64]);
                let noise = complex_gaussian_vector(scheme.m(), 1.0, &mut rng);
                let blocks = extract_blocks(&noise, scheme)?;
                let gram = blocks.matmul(&blocks.adjoint())?;
                for (a, g) in acc.as_mut_slice().iter_mut().zip(gram.as_slice()) {
                    *a += g;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = CMatrix::zeros(ell, ell);
    for chunk in &chunks {
        for (a, g) in total.as_mut_slice().iter_mut().zip(chunk.as_slice()) {
            *a += g;
        }
    }
    let k = scheme.k() as f64;
    let mut dev = 0.0;
    for r in 0..ell {
        for c in 0..ell {
            let target = if r == c { k } else { 0.0 };
            dev += (total[(r, c)] / trials as f64 - target).norm_sqr();
        }
    }
    Ok(dev.sqrt() / (k * (ell as f64).sqrt()))
}
