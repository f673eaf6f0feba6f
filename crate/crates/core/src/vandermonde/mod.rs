//! Vandermonde matrices: closed-form column correlations, the low-coherence
//! two-ring construction and its certified coherence bounds.

mod design;
mod lambda;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub use design::{
    coherence_bounds, design_low_coherence, optimal_c, orthogonal_vander, upper_bound_branch,
    UpperBranch,
};
pub use lambda::{envelopes, eta, geometric_sum, kappa, lambda_general, UNIT_RADIUS_TOL};

/// An `n × m` Vandermonde matrix given by its generating elements.
///
/// Column `c` is `(z_c, z_c², …, z_cⁿ)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeSpec {
    n: usize,
    generators: Vec<Complex64>,
}

impl VandermondeSpec {
    pub fn new(n: usize, generators: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Vandermonde row count must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidArgument("no generating elements".into()));
        }
        for (i, z) in generators.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            if z.norm() == 0.0 {
                return Err(Error::InvalidArgument(format!("generator {i} is zero")));
            }
        }
        Ok(Self { n, generators })
    }

    /// Same generators, different number of powers.
    pub fn with_rows(&self, n: usize) -> Result<Self> {
        Self::new(n, self.generators.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Complex64] {
        &self.generators
    }

    /// The `n × m` matrix with entry `(r, c) = z_c^{r+1}`.
    pub fn materialize(&self) -> Result<CMatrix> {
        let polar: Vec<(f64, f64)> = self.generators.iter().map(|z| z.to_polar()).collect();
        let mut data = Vec::with_capacity(self.n * self.m());
        for power in 1..=self.n {
            let p = power as f64;
            for &(radius, arg) in &polar {
                data.push(Complex64::from_polar(radius.powf(p), arg * p));
            }
        }
        CMatrix::new(self.n, self.m(), data)
    }

    /// Coherence evaluated through the closed form of λ for every generator pair.
    pub fn coherence_closed_form(&self) -> Result<f64> {
        if self.m() < 2 {
            return Err(Error::TooFewColumns(self.m()));
        }
        let polar: Vec<(f64, f64)> = self.generators.iter().map(|z| z.to_polar()).collect();
        let mut worst: f64 = 0.0;
        for (i, &(r1, a1)) in polar.iter().enumerate() {
            for &(r2, a2) in &polar[i + 1..] {
                let p = EnvelopeParams { c1: r1, c2: r2, n: self.n };
                worst = worst.max(lambda_general(&p, a2 - a1));
            }
        }
        Ok(worst.sqrt())
    }
}

/// Radii and row count for the λ, κ and η functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeParams {
    pub c1: f64,
    pub c2: f64,
    pub n: usize,
}

impl EnvelopeParams {
    pub fn new(c1: f64, c2: f64, n: usize) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite() && c2 > 0.0 && c2.is_finite()) {
            return Err(Error::Domain(format!("radii must be positive, got {c1}, {c2}")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("need at least two rows, got {n}")));
        }
        Ok(Self { c1, c2, n })
    }
}

/// Lower bound, achieved value and upper bound on the coherence of a two-ring design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceCertificate {
    pub n: usize,
    pub m: usize,
    pub c: f64,
    pub lower: f64,
    pub achieved: f64,
    pub upper: f64,
}

impl CoherenceCertificate {
    /// Slack allowed on the upper side for floating point error.
    pub const SLACK: f64 = 1e-12;

    pub fn holds(&self) -> bool {
        self.lower <= self.achieved + Self::SLACK && self.achieved <= self.upper + Self::SLACK
    }

    /// `n,m,c,lower,achieved,upper`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.m, self.c, self.lower, self.achieved, self.upper
        )
    }
}
