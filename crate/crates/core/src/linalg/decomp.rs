use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Columns with `|r_jj|` below this fraction of the largest column norm are
/// treated as linearly dependent by [`least_squares`].
const LSTSQ_RANK_TOL: f64 = 1e-10;

/// Singular values in non-increasing order, `min(rows, cols)` of them.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let svd = a
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, 100_000)
        .ok_or(Error::ConvergenceFailure)?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.max(0.0)).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Number of singular values above `rel_tol · σ_max`. The zero matrix has rank 0.
pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must lie in (0, 1), got {rel_tol}"
        )));
    }
    let sv = singular_values(a)?;
    Ok(rank_from_singular_values(&sv, rel_tol))
}

pub(crate) fn rank_from_singular_values(sv: &[f64], rel_tol: f64) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().take_while(|&&s| s > rel_tol * top).count()
}

/// Minimizer of `‖a·x − b‖₂` for a tall matrix of full column rank.
pub fn least_squares(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if b.len() != a.rows() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            actual: b.len(),
        });
    }
    if a.rows() < a.cols() {
        return Err(Error::RankDeficient);
    }
    let scale = (0..a.cols()).map(|j| a.column_norm(j)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::RankDeficient);
    }
    let qr = a.to_nalgebra().qr();
    let r = qr.r();
    if (0..a.cols()).any(|i| r[(i, i)].norm() <= LSTSQ_RANK_TOL * scale) {
        return Err(Error::RankDeficient);
    }
    let rhs = DVector::from_column_slice(b.as_slice());
    let qtb = qr.q().adjoint() * rhs;
    let x = r.solve_upper_triangular(&qtb).ok_or(Error::RankDeficient)?;
    CVector::new(x.iter().copied().collect::<Vec<Complex64>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian_matrix, complex_gaussian_vector, rng_from_seed};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_singular_values() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 3.0]]).unwrap();
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 1.0).abs() < 1e-14);
        assert_eq!(singular_values(&CMatrix::zeros(3, 2)).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn frobenius_identity_and_ordering() {
        let mut rng = rng_from_seed(4);
        for _ in 0..10 {
            let a = complex_gaussian_matrix(5, 7, &mut rng);
            let sv = singular_values(&a).unwrap();
            assert_eq!(sv.len(), 5);
            assert!(sv.windows(2).all(|w| w[0] >= w[1]));
            let f2 = a.frobenius_norm().powi(2);
            let s2: f64 = sv.iter().map(|s| s * s).sum();
            assert!(((f2 - s2) / f2).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_thresholds() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1e-14]]).unwrap();
        assert_eq!(numerical_rank(&a, 1e-8).unwrap(), 1);
        assert_eq!(numerical_rank(&CMatrix::zeros(2, 2), 1e-8).unwrap(), 0);
        let mut rng = rng_from_seed(9);
        let u = complex_gaussian_matrix(4, 1, &mut rng);
        let v = complex_gaussian_matrix(5, 1, &mut rng);
        let outer = u.matmul(&v.adjoint()).unwrap();
        assert_eq!(numerical_rank(&outer, 1e-8).unwrap(), 1);
        assert!(numerical_rank(&outer, 1.5).is_err());
    }

    #[test]
    fn identity_least_squares_returns_rhs() {
        let b = CVector::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)]).unwrap();
        let x = least_squares(&CMatrix::identity(3), &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - b[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn consistent_system_has_tiny_residual() {
        let mut rng = rng_from_seed(12);
        let a = complex_gaussian_matrix(8, 3, &mut rng);
        let x0 = complex_gaussian_vector(3, 1.0, &mut rng);
        let b = a.mul_vec(&x0).unwrap();
        let x = least_squares(&a, &b).unwrap();
        let res = b.sub(&a.mul_vec(&x).unwrap()).norm();
        assert!(res < 1e-10 * b.norm());
    }

    #[test]
    fn overdetermined_solution_is_locally_optimal() {
        let mut rng = rng_from_seed(13);
        let a = complex_gaussian_matrix(10, 4, &mut rng);
        let b = complex_gaussian_vector(10, 1.0, &mut rng);
        let x = least_squares(&a, &b).unwrap();
        let residual = b.sub(&a.mul_vec(&x).unwrap());
        let base = residual.norm();
        // Residual is orthogonal to the column span.
        let g = a.adjoint_mul_vec(&residual).unwrap();
        assert!(g.norm() < 1e-8 * b.norm() * a.frobenius_norm());
        for _ in 0..10 {
            let d = complex_gaussian_vector(4, 1e-6, &mut rng);
            let pert = x.add(&d);
            let r = b.sub(&a.mul_vec(&pert).unwrap()).norm();
            assert!(r >= base - 1e-12);
        }
    }

    #[test]
    fn dependent_columns_are_rejected() {
        let mut rng = rng_from_seed(14);
        let a = complex_gaussian_matrix(6, 2, &mut rng);
        let dup = a.select_columns(&[0, 1, 0]).unwrap();
        let b = complex_gaussian_vector(6, 1.0, &mut rng);
        assert!(matches!(least_squares(&dup, &b), Err(Error::RankDeficient)));
        assert!(matches!(
            least_squares(&CMatrix::zeros(2, 3), &CVector::zeros(2)),
            Err(Error::RankDeficient)
        ));
    }
}
