use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::coherence;
use crate::vandermonde::lambda::{envelopes, lambda_general, reduce_angle};
use crate::vandermonde::{CoherenceCertificate, EnvelopeParams, VandermondeSpec};

const GRID_POINTS: usize = 64;
const REFINE_TOL: f64 = 1e-6;

fn check_radius(c: f64) -> Result<()> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("ring radius must lie in (0, 1], got {c}")))
    }
}

fn even_count(m: usize) -> usize {
    m.div_ceil(2) * 2
}

/// Generators on two concentric rings of radii `c` and `1/c`, interleaved in angle.
///
/// Half of the `2⌈m/2⌉` points sit on the inner ring on a grid of spacing
/// `4π/m̂`; the other half sit on the outer ring, shifted by `2π/m̂`. For odd `m`
/// the last outer point is dropped.
pub fn design_low_coherence(n: usize, m: usize, c: f64) -> Result<VandermondeSpec> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2 and m ≥ 2, got n={n}, m={m}")));
    }
    check_radius(c)?;
    VandermondeSpec::new(n, ring_polar(m, c).map(|(r, a)| Complex64::from_polar(r, a)).collect())
}

fn ring_polar(m: usize, c: f64) -> impl Iterator<Item = (f64, f64)> {
    let m_hat = even_count(m);
    let half = m_hat / 2;
    let step = 2.0 * TAU / m_hat as f64;
    let shift = TAU / m_hat as f64;
    let inner = (0..half).map(move |k| (c, step * k as f64));
    let outer = (0..half).map(move |k| (1.0 / c, reduce_angle(step * k as f64 + shift)));
    inner.chain(outer).take(m)
}

/// Phases on the regular grid of `n` points, all rotated by `phase_offset`.
pub fn orthogonal_vander(n: usize, phase_offset: f64) -> Result<VandermondeSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2, got {n}")));
    }
    if !phase_offset.is_finite() {
        return Err(Error::InvalidArgument("phase offset must be finite".into()));
    }
    let gens = (0..n)
        .map(|k| Complex64::from_polar(1.0, reduce_angle(phase_offset + TAU * k as f64 / n as f64)))
        .collect();
    VandermondeSpec::new(n, gens)
}

/// Which case of the upper coherence bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBranch {
    /// `m < 2n`: both terms are η envelopes.
    Sparse,
    /// `2n ≤ m ≤ 4n`: η on the same ring, λ across rings.
    Middle,
    /// `m > 4n`: both terms are exact λ values.
    Dense,
}

pub fn upper_bound_branch(n: usize, m: usize) -> UpperBranch {
    if m < 2 * n {
        UpperBranch::Sparse
    } else if m <= 4 * n {
        UpperBranch::Middle
    } else {
        UpperBranch::Dense
    }
}

/// Lower and upper coherence bounds for the two-ring design together with the
/// coherence its materialization actually attains.
///
/// The angular spacings are taken from `m̂ = 2⌈m/2⌉`, the grid the generators
/// actually lie on; for even `m` this is `m` itself.
pub fn coherence_bounds(n: usize, m: usize, c: f64) -> Result<CoherenceCertificate> {
    if m <= n {
        return Err(Error::Domain(format!("bounds need m > n, got n={n}, m={m}")));
    }
    check_radius(c)?;
    let m_hat = even_count(m) as f64;
    let same = 2.0 * TAU / m_hat;
    let across = TAU / m_hat;
    let inner = EnvelopeParams::new(c, c, n)?;
    let mixed = EnvelopeParams::new(1.0 / c, c, n)?;

    let (kappa_same, eta_same) = envelopes(&inner, same)?;
    let (kappa_across, eta_across) = envelopes(&mixed, across)?;
    let lower = kappa_same.max(kappa_across).sqrt();

    let u = match upper_bound_branch(n, m) {
        UpperBranch::Sparse => eta_same.max(eta_across),
        UpperBranch::Middle => eta_same.max(lambda_general(&mixed, across)),
        UpperBranch::Dense => lambda_general(&inner, same).max(lambda_general(&mixed, across)),
    };
    let upper = u.sqrt().min(1.0);

    let v = design_low_coherence(n, m, c)?.materialize()?;
    let achieved = coherence(&v)?;
    Ok(CoherenceCertificate { n, m, c, lower, achieved, upper })
}

/// Coherence of the two-ring design via the closed form, without materializing it.
fn design_coherence(n: usize, m: usize, c: f64) -> f64 {
    let pts: Vec<(f64, f64)> = ring_polar(m, c).collect();
    let mut worst: f64 = 0.0;
    for (i, &(r1, a1)) in pts.iter().enumerate() {
        for &(r2, a2) in &pts[i + 1..] {
            let p = EnvelopeParams { c1: r1, c2: r2, n };
            worst = worst.max(lambda_general(&p, a2 - a1));
        }
    }
    worst.sqrt()
}

/// Ring radius in `(0, 1]` that minimizes the attained coherence of
/// [`design_low_coherence`].
///
/// Scans `c = i/64` and then runs a golden-section search on the interval
/// around the best grid point. The grid winner is kept if refinement does not
/// improve on it.
pub fn optimal_c(n: usize, m: usize) -> Result<f64> {
    if n < 2 || m <= n {
        return Err(Error::Domain(format!("need n ≥ 2 and m > n, got n={n}, m={m}")));
    }
    let f = |c: f64| design_coherence(n, m, c);
    let grid: Vec<(f64, f64)> = (1..=GRID_POINTS)
        .map(|i| {
            let c = i as f64 / GRID_POINTS as f64;
            (c, f(c))
        })
        .collect();
    let (best_idx, &(best_c, best_val)) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("grid is non-empty");

    let h = 1.0 / GRID_POINTS as f64;
    let lo = if best_idx == 0 { h / 16.0 } else { best_c - h };
    let hi = (best_c + h).min(1.0);
    let (c_ref, v_ref) = golden_section(f, lo, hi, REFINE_TOL);
    Ok(if v_ref < best_val { c_ref } else { best_c })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 { (x1, f1) } else { (x2, f2) }
}
