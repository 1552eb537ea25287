use num_complex::Complex64;

use super::{HilbertSpace, ModelError};
use crate::linalg::{self, hermitian_eigen, ComplexMatrix, LinalgError, ZERO};

/// Initial condition ρ of a family.
///
/// Alongside the matrix it keeps a factor `W` with `ρ = W W†` (one column
/// per nonzero eigenvalue), which the decoherence functional propagates
/// instead of the full matrix. Pure states additionally keep their ket.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: ComplexMatrix,
    factor: ComplexMatrix,
    ket: Option<Vec<Complex64>>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.matrix == other.matrix
    }
}

impl DensityMatrix {
    /// Normalizes `amplitudes` and returns |ψ><ψ|.
    pub fn pure_state(space: &HilbertSpace, amplitudes: &[Complex64]) -> Result<Self, ModelError> {
        if amplitudes.len() != space.total_dim() {
            return Err(ModelError::VectorLength {
                expected: space.total_dim(),
                got: amplitudes.len(),
            });
        }
        let n = linalg::norm(amplitudes);
        if !n.is_finite() || n == 0.0 {
            return Err(ModelError::ZeroVector);
        }
        let ket: Vec<Complex64> = amplitudes.iter().map(|z| z / n).collect();
        Ok(Self {
            space: space.clone(),
            matrix: ComplexMatrix::outer(&ket, &ket),
            factor: ComplexMatrix::column(&ket),
            ket: Some(ket),
        })
    }

    /// I / total_dim.
    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        let w = (1.0 / d as f64).sqrt();
        Self {
            space: space.clone(),
            matrix: ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
            factor: ComplexMatrix::identity(d).scale(Complex64::new(w, 0.0)),
            ket: None,
        }
    }

    /// Validates Hermiticity, unit trace and positivity of an explicit matrix.
    pub fn from_matrix(space: &HilbertSpace, matrix: ComplexMatrix, structural_tol: f64) -> Result<Self, ModelError> {
        let d = space.total_dim();
        if matrix.shape() != (d, d) {
            return Err(LinalgError::DimensionMismatch {
                left: matrix.shape(),
                right: (d, d),
            }
            .into());
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > structural_tol {
            return Err(ModelError::NotNormalized { trace: trace.re });
        }
        let is_diagonal = (0..d).all(|r| (0..d).all(|c| r == c || matrix[(r, c)] == ZERO));
        let (values, vectors) = if is_diagonal {
            let asymmetry = (0..d).map(|i| matrix[(i, i)].im.abs()).fold(0.0, f64::max);
            if asymmetry > structural_tol {
                return Err(LinalgError::NotHermitian { asymmetry }.into());
            }
            let values: Vec<f64> = (0..d).map(|i| matrix[(i, i)].re).collect();
            (values, ComplexMatrix::identity(d))
        } else {
            hermitian_eigen(&matrix, structural_tol)?
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -structural_tol {
            return Err(ModelError::NotPositive { min_eigenvalue: min });
        }
        let kept: Vec<usize> = (0..d).filter(|&k| values[k] > 0.0).collect();
        let factor = ComplexMatrix::from_fn(d, kept.len().max(1), |r, c| match kept.get(c) {
            Some(&k) => vectors[(r, k)] * values[k].sqrt(),
            None => ZERO,
        });
        Ok(Self {
            space: space.clone(),
            matrix,
            factor,
            ket: None,
        })
    }

    /// Product state from per-factor density matrices, in factor order.
    pub fn product(space: &HilbertSpace, parts: &[DensityMatrix], structural_tol: f64) -> Result<Self, ModelError> {
        let mut iter = parts.iter();
        let first = iter.next().ok_or(ModelError::NoFactors)?;
        let mut m = first.matrix.clone();
        for p in iter {
            m = linalg::tensor_product(&m, &p.matrix)?;
        }
        Self::from_matrix(space, m, structural_tol)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `W` with `ρ = W W†`.
    pub fn factor(&self) -> &ComplexMatrix {
        &self.factor
    }

    /// The normalized ket, when constructed as a pure state.
    pub fn ket(&self) -> Option<&[Complex64]> {
        self.ket.as_deref()
    }

    pub fn is_maximally_mixed(&self, tol: f64) -> bool {
        let d = self.space.total_dim();
        let target = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        linalg::frobenius_distance(&self.matrix, &target).is_ok_and(|x| x <= tol)
    }
}
