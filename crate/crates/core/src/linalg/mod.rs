//! Exact matrices over the Gaussian rationals and a few float helpers.

mod exact_matrix;
mod gaussian;

pub use exact_matrix::{ExactMatrix, Inertia};
pub use gaussian::GaussRat;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Nearest fraction with denominator at most `max_den` lying within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    (1..=max_den).find_map(|den| {
        let num = (x * den as f64).round();
        ((x - num / den as f64).abs() <= tol).then(|| Rational::new(num as i64, den))
    })
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>, tol: f64) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Diagonalization("matrix is not square".into()));
    }
    let residual = max_abs(&(m - m.adjoint()));
    if residual > tol {
        return Err(Error::NotHermitian(residual));
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<DVector<Complex64>>>(),
    );
    Ok((values, vectors))
}

/// Number of positive minus number of negative eigenvalues, treating
/// |μ| ≤ 1e-7·‖M‖ as zero.
pub fn eta_float(m: &DMatrix<Complex64>) -> Result<i64> {
    if m.nrows() == 0 {
        return Ok(0);
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return Ok(0);
    }
    let (values, _) = hermitian_eigen(m, 1e-10 * scale.max(1.0))?;
    let thr = 1e-7 * scale * m.nrows() as f64;
    Ok(values.iter().map(|&x| if x > thr { 1 } else if x < -thr { -1 } else { 0 }).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_of_small_diagonals() {
        assert_eq!(eta_float(&DMatrix::zeros(3, 3)).unwrap(), 0);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        assert_eq!(eta_float(&d).unwrap(), 0);
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(-1.5000000001, 16, 1e-8), Some(Rational::new(-3, 2)));
        assert_eq!(rationalize(1.0 / 3.0, 16, 1e-8), Some(Rational::new(1, 3)));
        assert_eq!(rationalize(std::f64::consts::PI, 16, 1e-8), None);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert!(matches!(hermitian_eigen(&m, 1e-10), Err(Error::NotHermitian(_))));
    }
}
