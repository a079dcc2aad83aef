//! Regularised inverses of symmetric positive semi-definite matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{EstimateError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularizationKind {
    /// `(A² + γI)^{-1} A`.
    Tikhonov,
    /// Invert eigenvalues `≥ γ`, drop the rest.
    SpectralCutoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationScheme {
    pub kind: RegularizationKind,
    pub gamma: f64,
}

impl RegularizationScheme {
    pub const DEFAULT_GAMMA: f64 = 0.01;

    pub fn tikhonov(gamma: f64) -> Self {
        Self { kind: RegularizationKind::Tikhonov, gamma }
    }

    pub fn cutoff(gamma: f64) -> Self {
        Self { kind: RegularizationKind::SpectralCutoff, gamma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(EstimateError::InvalidArgument(format!("regularisation gamma = {} must be positive", self.gamma)));
        }
        Ok(())
    }

    /// Regularised reciprocal of one eigenvalue.
    pub fn apply(&self, lambda: f64) -> f64 {
        match self.kind {
            RegularizationKind::Tikhonov => lambda / (lambda * lambda + self.gamma),
            RegularizationKind::SpectralCutoff => {
                if lambda >= self.gamma {
                    1.0 / lambda
                } else {
                    0.0
                }
            }
        }
    }
}

/// Regularised inverse of a symmetric matrix through its eigendecomposition.
pub fn regularized_inverse(a: &DMatrix<f64>, scheme: &RegularizationScheme) -> Result<DMatrix<f64>> {
    scheme.validate()?;
    if !a.is_square() {
        return Err(EstimateError::InvalidArgument(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let asym = (a - a.transpose()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if asym > 1e-8 * scale {
        return Err(EstimateError::NotSymmetric { asymmetry: asym });
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let d = eig.eigenvalues.map(|l| scheme.apply(l));
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&d) * v.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_tikhonov() {
        let r = regularized_inverse(&DMatrix::identity(3, 3), &RegularizationScheme::tikhonov(0.01)).unwrap();
        assert!((r - DMatrix::identity(3, 3) * (1.0 / 1.01)).abs().max() < 1e-15);
    }

    #[test]
    fn cutoff_drops_small_eigenvalue() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1e-8]));
        let r = regularized_inverse(&a, &RegularizationScheme::cutoff(0.01)).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0]));
        assert!((r - expected).abs().max() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_and_bad_gamma() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(regularized_inverse(&a, &RegularizationScheme::tikhonov(0.01)), Err(EstimateError::NotSymmetric { .. })));
        assert!(regularized_inverse(&DMatrix::identity(2, 2), &RegularizationScheme::tikhonov(0.0)).is_err());
    }
}
