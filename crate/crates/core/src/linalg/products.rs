use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Kronecker product: block `(i, j)` of the result is `a[i, j] · b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = b.shape();
    CMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Khatri-Rao (column-wise Kronecker) product.
///
/// Column `j` of the result is `phi[:, j] ⊗ psi[:, j]`, so row `a · psi.rows() + b`
/// holds `phi[a, j] · psi[b, j]`.
pub fn khatri_rao(phi: &CMatrix, psi: &CMatrix) -> Result<CMatrix> {
    if phi.cols() != psi.cols() {
        return Err(Error::ColumnCountMismatch {
            left: phi.cols(),
            right: psi.cols(),
        });
    }
    let pr = psi.rows();
    Ok(CMatrix::from_fn(phi.rows() * pr, phi.cols(), |r, c| {
        phi[(r / pr, c)] * psi[(r % pr, c)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian_matrix, rng_from_seed};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_scalar() {
        let a = CMatrix::new(1, 1, vec![c(2.0, 0.0)]).unwrap();
        let b = CMatrix::new(1, 1, vec![c(3.0, 1.0)]).unwrap();
        assert_eq!(kron(&a, &b)[(0, 0)], c(6.0, 2.0));
    }

    #[test]
    fn kron_identity_is_block_diagonal() {
        let mut rng = rng_from_seed(3);
        let m = complex_gaussian_matrix(2, 3, &mut rng);
        let k = kron(&CMatrix::identity(2), &m);
        assert_eq!(k.shape(), (4, 6));
        for r in 0..4 {
            for col in 0..6 {
                let expected = if r / 2 == col / 3 { m[(r % 2, col % 3)] } else { c(0.0, 0.0) };
                assert_eq!(k[(r, col)], expected);
            }
        }
    }

    #[test]
    fn kron_matches_nested_loop_definition() {
        let mut rng = rng_from_seed(11);
        let a = complex_gaussian_matrix(3, 2, &mut rng);
        let b = complex_gaussian_matrix(2, 2, &mut rng);
        let k = kron(&a, &b);
        let mut oracle = CMatrix::zeros(6, 4);
        for i in 0..3 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        oracle[(i * 2 + p, j * 2 + q)] = a[(i, j)] * b[(p, q)];
                    }
                }
            }
        }
        assert_eq!(k, oracle);
    }

    #[test]
    fn khatri_rao_with_ones_row_is_identity_map() {
        let mut rng = rng_from_seed(5);
        let phi = complex_gaussian_matrix(3, 5, &mut rng);
        let ones = CMatrix::from_fn(1, 5, |_, _| c(1.0, 0.0));
        assert_eq!(khatri_rao(&phi, &ones).unwrap(), phi);
    }

    #[test]
    fn khatri_rao_matches_columnwise_kron() {
        let mut rng = rng_from_seed(8);
        let phi = complex_gaussian_matrix(2, 3, &mut rng);
        let psi = complex_gaussian_matrix(4, 3, &mut rng);
        let kr = khatri_rao(&phi, &psi).unwrap();
        assert_eq!(kr.shape(), (8, 3));
        for j in 0..3 {
            let col = kron(&phi.select_columns(&[j]).unwrap(), &psi.select_columns(&[j]).unwrap());
            assert_eq!(kr.select_columns(&[j]).unwrap(), col);
        }
    }

    #[test]
    fn khatri_rao_of_repeated_columns_is_kronecker() {
        let mut rng = rng_from_seed(21);
        let (n1, n2) = (3, 2);
        let phi_hat = complex_gaussian_matrix(2, n1, &mut rng);
        let psi_hat = complex_gaussian_matrix(3, n2, &mut rng);
        let ones = |n| CMatrix::from_fn(1, n, |_, _| c(1.0, 0.0));
        let phi = kron(&phi_hat, &ones(n2));
        let psi = kron(&ones(n1), &psi_hat);
        let kr = khatri_rao(&phi, &psi).unwrap();
        assert_eq!(kr, kron(&phi_hat, &psi_hat));
    }

    #[test]
    fn khatri_rao_rejects_mismatched_columns() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 4);
        assert!(matches!(
            khatri_rao(&a, &b),
            Err(Error::ColumnCountMismatch { left: 3, right: 4 })
        ));
    }
}
