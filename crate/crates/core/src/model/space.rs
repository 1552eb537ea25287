use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::linalg::{ComplexMatrix, LinalgError, MAX_DENSE_DIM, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// A Hilbert space built as an ordered tensor product of labelled factors.
///
/// Basis index convention: the first factor is the most significant digit,
/// matching `tensor_product(first, rest)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<Factor>,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self, ModelError> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor {
                label: label.into(),
                dim,
            })
            .collect();
        if factors.is_empty() {
            return Err(ModelError::NoFactors);
        }
        let mut total_dim: usize = 1;
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(ModelError::ZeroDimension(f.label.clone()));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(ModelError::DuplicateFactor(f.label.clone()));
            }
            total_dim = total_dim.saturating_mul(f.dim);
        }
        if total_dim > MAX_DENSE_DIM {
            return Err(LinalgError::TooLarge {
                dim: total_dim,
                max: MAX_DENSE_DIM,
            }
            .into());
        }
        Ok(Self { factors, total_dim })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn factor_index(&self, label: &str) -> Result<usize, ModelError> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| ModelError::UnknownFactor(label.to_string()))
    }

    pub fn factor_dim(&self, label: &str) -> Result<usize, ModelError> {
        Ok(self.factors[self.factor_index(label)?].dim)
    }

    /// Stride of factor `k` in the flat basis index.
    fn stride(&self, k: usize) -> usize {
        self.factors[k + 1..].iter().map(|f| f.dim).product()
    }

    /// Embed `op`, acting on the listed factors (in the listed order), as
    /// identity on all others.
    pub fn lift_operator_on(&self, labels: &[&str], op: &ComplexMatrix) -> Result<ComplexMatrix, ModelError> {
        let positions = labels
            .iter()
            .map(|l| self.factor_index(l))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, p) in positions.iter().enumerate() {
            if positions[..i].contains(p) {
                return Err(ModelError::DuplicateFactor(labels[i].to_string()));
            }
        }
        let local_dims: Vec<usize> = positions.iter().map(|&p| self.factors[p].dim).collect();
        let local_dim: usize = local_dims.iter().product();
        if op.shape() != (local_dim, local_dim) {
            return Err(LinalgError::DimensionMismatch {
                left: op.shape(),
                right: (local_dim, local_dim),
            }
            .into());
        }
        let strides: Vec<usize> = positions.iter().map(|&p| self.stride(p)).collect();
        // Offset in the full index contributed by local index `l`.
        let offsets: Vec<usize> = (0..local_dim)
            .map(|mut l| {
                let mut off = 0;
                for k in (0..positions.len()).rev() {
                    off += (l % local_dims[k]) * strides[k];
                    l /= local_dims[k];
                }
                off
            })
            .collect();

        let n = self.total_dim;
        let mut out = ComplexMatrix::zeros(n, n);
        // Base indices: every full index whose targeted digits are all zero.
        for base in 0..n {
            if positions
                .iter()
                .zip(&strides)
                .any(|(&p, &s)| (base / s) % self.factors[p].dim != 0)
            {
                continue;
            }
            for (i, &oi) in offsets.iter().enumerate() {
                for (j, &oj) in offsets.iter().enumerate() {
                    let z = op[(i, j)];
                    if z != ZERO {
                        out[(base + oi, base + oj)] = z;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at the named factor.
    pub fn lift_operator(&self, label: &str, op: &ComplexMatrix) -> Result<ComplexMatrix, ModelError> {
        self.lift_operator_on(&[label], op)
    }

    /// Standard basis vector for the given per-factor digits.
    pub fn basis_ket(&self, digits: &[usize]) -> Result<Vec<num_complex::Complex64>, ModelError> {
        if digits.len() != self.factors.len() {
            return Err(ModelError::VectorLength {
                expected: self.factors.len(),
                got: digits.len(),
            });
        }
        let mut index = 0;
        for (f, &d) in self.factors.iter().zip(digits) {
            if d >= f.dim {
                return Err(ModelError::VectorLength {
                    expected: f.dim,
                    got: d + 1,
                });
            }
            index = index * f.dim + d;
        }
        let mut v = vec![ZERO; self.total_dim];
        v[index] = ONE;
        Ok(v)
    }
}
