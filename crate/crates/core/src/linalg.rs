use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn psd_tolerance(m: &DMatrix<f64>) -> f64 {
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    1e-12 * scale.max(f64::MIN_POSITIVE) * m.nrows() as f64
}

/// Eigenvalues of the symmetrized matrix, failing if any is meaningfully negative.
pub(crate) fn psd_eigen(m: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -psd_tolerance(m) || min.is_nan() {
        return Err(Error::NotPositiveSemiDefinite { min_eigenvalue: min });
    }
    Ok(eig)
}

/// Largest eigenvalue of a symmetric PSD matrix.
pub fn max_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let eig = psd_eigen(m)?;
    Ok(eig.eigenvalues.iter().copied().fold(0.0, f64::max))
}

/// A square root `S` with `S Sᵀ = m`: the Cholesky factor when it exists,
/// otherwise the symmetric eigendecomposition root (singular PSD matrices).
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = symmetrize(m);
    if let Some(chol) = sym.clone().cholesky() {
        return Ok(chol.l());
    }
    let eig = psd_eigen(&sym)?;
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sqrt_of_singular_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let s = psd_sqrt(&m).unwrap();
        let back = &s * s.transpose();
        for (a, b) in back.iter().zip(m.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn sqrt_of_zero_matrix_is_zero() {
        let s = psd_sqrt(&DMatrix::zeros(3, 3)).unwrap();
        assert!(s.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPositiveSemiDefinite { .. })));
    }

    #[test]
    fn largest_eigenvalue() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert_relative_eq!(max_eigenvalue(&m).unwrap(), 3.0, epsilon = 1e-12);
    }
}
