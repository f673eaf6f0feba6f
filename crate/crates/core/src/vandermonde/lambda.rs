//! Closed-form normalized correlation of two Vandermonde columns.
//!
//! For columns `z_j = (c_j e^{iφ_j}, …, c_j^n e^{inφ_j})` the squared normalized
//! inner product only depends on the radii and on the phase gap `φ = φ₂ − φ₁`.
//! All quantities here are evaluated in log space so that large `n` or radii far
//! from one neither overflow nor lose precision near `c = 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vandermonde::EnvelopeParams;

/// Radii closer to one than this are treated as exactly one.
pub const UNIT_RADIUS_TOL: f64 = 1e-12;

/// `Σ_{k=1}^{n} q^k`.
pub fn geometric_sum(q: Complex64, n: usize) -> Complex64 {
    assert!(n >= 1, "geometric_sum needs n >= 1");
    let one = Complex64::new(1.0, 0.0);
    if q == one {
        return Complex64::new(n as f64, 0.0);
    }
    if (one - q).norm() < 1e-6 {
        // Closed form cancels badly here.
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = one;
        for _ in 0..n {
            p *= q;
            acc += p;
        }
        return acc;
    }
    (q - q.powi(n as i32 + 1)) / (one - q)
}

pub(crate) fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `ln Σ_{k=0}^{n-1} c^{2k}`, i.e. the log squared norm of a column divided by `c²`.
fn ln_ring_energy(c: f64, n: usize) -> f64 {
    let nf = n as f64;
    if (c - 1.0).abs() < UNIT_RADIUS_TOL {
        return nf.ln();
    }
    let lc = c.ln();
    if c < 1.0 {
        ((2.0 * nf * lc).exp_m1() / (2.0 * lc).exp_m1()).ln()
    } else {
        2.0 * (nf - 1.0) * lc + ((-2.0 * nf * lc).exp_m1() / (-2.0 * lc).exp_m1()).ln()
    }
}

/// Pieces shared by λ, κ and η after mapping to the frame where `c₁c₂ ≤ 1`.
struct Parts {
    /// `(c₁c₂)ⁿ`
    t_n: f64,
    /// `1 − (c₁c₂)ⁿ`, computed without cancellation
    one_minus_t_n: f64,
    /// `|1 − c₁c₂ e^{iφ}|²`
    denom: f64,
    /// `ln S(c₁) + ln S(c₂)`
    ln_energy: f64,
    n: usize,
    phi: f64,
}

fn parts(p: &EnvelopeParams, phi: f64) -> Parts {
    let (mut c1, mut c2) = (p.c1, p.c2);
    // λ, κ and η are all invariant under (c₁, c₂) → (1/c₁, 1/c₂).
    if c1 * c2 > 1.0 {
        c1 = 1.0 / c1;
        c2 = 1.0 / c2;
    }
    let n = p.n;
    let phi = reduce_angle(phi);
    let ln_t = c1.ln() + c2.ln();
    let ln_t = if ln_t.abs() < UNIT_RADIUS_TOL { 0.0 } else { ln_t };
    let t = ln_t.exp();
    let one_minus_t = -ln_t.exp_m1();
    let s = (phi / 2.0).sin();
    let denom = one_minus_t * one_minus_t + 4.0 * t * s * s;
    Parts {
        t_n: (n as f64 * ln_t).exp(),
        one_minus_t_n: -(n as f64 * ln_t).exp_m1(),
        denom,
        ln_energy: ln_ring_energy(c1, n) + ln_ring_energy(c2, n),
        n,
        phi,
    }
}

/// λ(c₁, c₂, φ): squared normalized inner product of two Vandermonde columns.
pub fn lambda_general(p: &EnvelopeParams, phi: f64) -> f64 {
    let q = parts(p, phi);
    let nf = q.n as f64;
    let value = if q.denom == 0.0 {
        // c₁c₂ = 1 and φ = 0: the inner product is Σ 1 = n.
        (2.0 * nf.ln() - q.ln_energy).exp()
    } else {
        let s = (nf * q.phi / 2.0).sin();
        let numer = q.one_minus_t_n.powi(2) + 4.0 * q.t_n * s * s;
        if numer == 0.0 {
            return 0.0;
        }
        (numer.ln() - q.denom.ln() - q.ln_energy).exp()
    };
    value.clamp(0.0, 1.0)
}

/// Lower and upper envelopes `(κ, η)` of λ as functions of the phase gap.
///
/// κ replaces `cos(nφ)` by `1` and η by `−1`; for `c₁ = c₂ = 1` the upper
/// envelope reduces to `1 / (n² sin²(φ/2))`.
pub fn envelopes(p: &EnvelopeParams, phi: f64) -> Result<(f64, f64)> {
    let q = parts(p, phi);
    if q.denom == 0.0 {
        return Err(Error::Domain(format!(
            "envelopes undefined at phase gap {phi} for c1*c2 = 1"
        )));
    }
    let base = -q.denom.ln() - q.ln_energy;
    let kappa = if q.one_minus_t_n == 0.0 {
        0.0
    } else {
        (2.0 * q.one_minus_t_n.abs().ln() + base).exp()
    };
    let eta = (2.0 * (1.0 + q.t_n).ln() + base).exp();
    Ok((kappa, eta))
}

pub fn kappa(p: &EnvelopeParams, phi: f64) -> Result<f64> {
    envelopes(p, phi).map(|(k, _)| k)
}

pub fn eta(p: &EnvelopeParams, phi: f64) -> Result<f64> {
    envelopes(p, phi).map(|(_, e)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(c1: f64, c2: f64, n: usize) -> EnvelopeParams {
        EnvelopeParams::new(c1, c2, n).unwrap()
    }

    /// Direct evaluation from two explicit columns.
    fn lambda_oracle(c1: f64, c2: f64, phi: f64, n: usize) -> f64 {
        let z1: Vec<Complex64> = (1..=n)
            .map(|k| Complex64::from_polar(c1.powi(k as i32), 0.3 * k as f64))
            .collect();
        let z2: Vec<Complex64> = (1..=n)
            .map(|k| Complex64::from_polar(c2.powi(k as i32), (0.3 + phi) * k as f64))
            .collect();
        let ip: Complex64 = z1.iter().zip(&z2).map(|(a, b)| a.conj() * b).sum();
        let n1: f64 = z1.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = z2.iter().map(|z| z.norm_sqr()).sum();
        ip.norm_sqr() / (n1 * n2)
    }

    #[test]
    fn geometric_sum_values() {
        assert_eq!(geometric_sum(Complex64::new(1.0, 0.0), 7), Complex64::new(7.0, 0.0));
        assert_eq!(geometric_sum(Complex64::new(2.0, 0.0), 3), Complex64::new(14.0, 0.0));
        for k in 0..20 {
            let q = Complex64::from_polar(0.9, 0.31 * k as f64);
            let direct: Complex64 = (1..=20).map(|e| q.powi(e)).sum();
            assert!((geometric_sum(q, 20) - direct).norm() < 1e-12);
        }
        let near = Complex64::new(1.0 + 1e-9, 1e-9);
        let direct: Complex64 = (1..=50).map(|e| near.powi(e)).sum();
        assert!((geometric_sum(near, 50) - direct).norm() < 1e-10);
    }

    #[test]
    fn unit_circle_case_matches_dirichlet_kernel() {
        let n = 7;
        let p = params(1.0, 1.0, n);
        for i in 1..200 {
            let phi = i as f64 * TAU / 200.0;
            let expected = (n as f64 * phi / 2.0).sin().powi(2)
                / ((n * n) as f64 * (phi / 2.0).sin().powi(2));
            assert!((lambda_general(&p, phi) - expected).abs() < 1e-12, "phi={phi}");
        }
        assert_eq!(lambda_general(&p, 0.0), 1.0);
    }

    #[test]
    fn matches_oracle_on_random_draws() {
        let mut seed = 0x1234_5678_u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let c1 = 0.5 + 1.5 * next();
            let c2 = 0.5 + 1.5 * next();
            let phi = TAU * next();
            let n = 2 + (next() * 30.0) as usize;
            let got = lambda_general(&params(c1, c2, n), phi);
            assert!((got - lambda_oracle(c1, c2, phi, n)).abs() < 1e-10);
        }
    }

    #[test]
    fn identical_radii_at_zero_gap_give_one() {
        for &c in &[0.5, 0.9, 1.0, 1.3, 2.0] {
            assert!((lambda_general(&params(c, c, 9), 0.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_on_reciprocal_radii() {
        for &(c, n) in &[(1.15, 5), (0.8, 8), (1.0, 6), (2.0, 3)] {
            let p = params(c, 1.0 / c, n);
            for k in 1..n {
                assert!(lambda_general(&p, k as f64 * TAU / n as f64) < 1e-12);
            }
        }
        let p = params(0.9, 0.95, 6);
        let min = (0..=5000)
            .map(|i| lambda_general(&p, i as f64 * TAU / 5000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.0);
    }

    #[test]
    fn symmetries() {
        for &(c1, c2) in &[(0.7, 1.4), (1.2, 1.3), (0.6, 0.9)] {
            for i in 0..50 {
                let phi = 0.1 + i as f64 * 0.12;
                let l = lambda_general(&params(c1, c2, 6), phi);
                assert!((l - lambda_general(&params(1.0 / c1, 1.0 / c2, 6), phi)).abs() < 1e-12);
                assert!((l - lambda_general(&params(c1, c2, 6), TAU - phi)).abs() < 1e-12);
                assert!((l - lambda_general(&params(c1, c2, 6), -phi)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decays_when_radii_separate() {
        let c = 0.8;
        for i in 0..20 {
            let phi = i as f64 * TAU / 20.0;
            let vals: Vec<f64> = [10.0, 100.0, 1000.0]
                .iter()
                .map(|&c1| lambda_general(&params(c / c1, c1, 8), phi))
                .collect();
            assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
            assert!(vals[2] < 1e-6);
        }
    }

    #[test]
    fn envelope_sandwich_for_reciprocal_pair() {
        let p = params(1.15, 1.0 / 1.15, 5);
        for i in 1..1000 {
            let phi = i as f64 * TAU / 1000.0;
            let (k, e) = envelopes(&p, phi).unwrap();
            let l = lambda_general(&p, phi);
            assert!(k <= l + 1e-12 && l <= e + 1e-12);
        }
    }

    #[test]
    fn envelope_touch_points() {
        for &(c1, c2, n) in &[(0.8, 0.9, 5), (0.5, 1.0, 7), (0.95, 0.95, 6)] {
            let p = params(c1, c2, n);
            for k in 1..n {
                let phi = k as f64 * TAU / n as f64;
                assert!((lambda_general(&p, phi) - kappa(&p, phi).unwrap()).abs() < 1e-12);
            }
            for k in 0..n {
                let phi = PI / n as f64 + k as f64 * TAU / n as f64;
                assert!((lambda_general(&p, phi) - eta(&p, phi).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn envelope_reciprocal_symmetry() {
        for &(c1, c2) in &[(0.7, 0.8), (1.5, 0.4), (0.3, 0.3)] {
            for i in 1..40 {
                let phi = i as f64 * 0.15;
                let (k1, e1) = envelopes(&params(c1, c2, 9), phi).unwrap();
                let (k2, e2) = envelopes(&params(1.0 / c1, 1.0 / c2, 9), phi).unwrap();
                assert!((k1 - k2).abs() < 1e-12 && (e1 - e2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_circle_eta_special_branch_and_domain() {
        let n = 6;
        let p = params(1.0, 1.0, n);
        let phi = 0.4;
        let expected = 1.0 / ((n * n) as f64 * (phi / 2.0_f64).sin().powi(2));
        assert!((eta(&p, phi).unwrap() - expected).abs() < 1e-12 * expected);
        assert!(matches!(envelopes(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(envelopes(&p, TAU), Err(Error::Domain(_))));
    }
}
