use num_complex::Complex64;

use super::{HilbertSpace, ModelError};
use crate::linalg::{self, hermitian_eigen, ComplexMatrix, LinalgError, ONE, ZERO};

/// A projector onto a subspace: the quantum counterpart of "the system has
/// this property at this time".
#[derive(Debug, Clone, PartialEq)]
pub struct Property {
    space: HilbertSpace,
    matrix: ComplexMatrix,
    rank: usize,
    label: String,
}

impl Property {
    /// Validates `P = P†` and `P² = P` at `structural_tol`.
    pub fn from_matrix(
        space: &HilbertSpace,
        matrix: ComplexMatrix,
        label: impl Into<String>,
        structural_tol: f64,
    ) -> Result<Self, ModelError> {
        let label = label.into();
        let d = space.total_dim();
        if matrix.shape() != (d, d) {
            return Err(LinalgError::DimensionMismatch {
                left: matrix.shape(),
                right: (d, d),
            }
            .into());
        }
        let asymmetry = matrix.hermitian_deviation()?;
        let idempotence = (&matrix * &matrix).try_sub(&matrix)?.max_abs();
        if asymmetry > structural_tol || idempotence > structural_tol {
            return Err(ModelError::NotProjector {
                label,
                asymmetry,
                idempotence,
            });
        }
        let rank = matrix.trace().re.round().max(0.0) as usize;
        Ok(Self {
            space: space.clone(),
            matrix,
            rank,
            label,
        })
    }

    /// Projector onto the span of `vectors`.
    ///
    /// Uses modified Gram-Schmidt with a second orthogonalization pass, in
    /// input order.
    pub fn from_vectors(
        space: &HilbertSpace,
        vectors: &[Vec<Complex64>],
        label: impl Into<String>,
        structural_tol: f64,
    ) -> Result<Self, ModelError> {
        let label = label.into();
        let d = space.total_dim();
        if vectors.is_empty() {
            return Err(ModelError::DependentVectors { label, min_gram_eigenvalue: 0.0 });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(ModelError::VectorLength {
                expected: d,
                got: v.len(),
            });
        }
        let k = vectors.len();
        let gram = ComplexMatrix::from_fn(k, k, |i, j| linalg::inner(&vectors[i], &vectors[j]));
        let (values, _) = hermitian_eigen(&gram, f64::INFINITY)?;
        if values[0] <= structural_tol {
            return Err(ModelError::DependentVectors {
                label,
                min_gram_eigenvalue: values[0],
            });
        }

        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
        for v in vectors {
            let mut w = v.clone();
            for _pass in 0..2 {
                for q in &basis {
                    let overlap = linalg::inner(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= overlap * qi;
                    }
                }
            }
            let n = linalg::norm(&w);
            basis.push(w.into_iter().map(|z| z / n).collect());
        }

        let mut matrix = ComplexMatrix::zeros(d, d);
        for q in &basis {
            matrix = &matrix + &ComplexMatrix::outer(q, q);
        }
        Ok(Self {
            space: space.clone(),
            matrix,
            rank: k,
            label,
        })
    }

    /// The identity, i.e. the trivially true property.
    pub fn identity(space: &HilbertSpace, label: impl Into<String>) -> Self {
        Self {
            space: space.clone(),
            matrix: ComplexMatrix::identity(space.total_dim()),
            rank: space.total_dim(),
            label: label.into(),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Mutually orthogonal projectors summing to the identity: the exclusive,
/// exhaustive alternatives at one time. Member labels are the outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    space: HilbertSpace,
    members: Vec<Property>,
}

impl Decomposition {
    pub fn new(space: &HilbertSpace, members: Vec<Property>, structural_tol: f64) -> Result<Self, ModelError> {
        if members.is_empty() {
            return Err(ModelError::Incomplete { deviation: 1.0 });
        }
        for (i, p) in members.iter().enumerate() {
            if p.space() != space {
                return Err(ModelError::SpaceMismatch(p.label().to_string()));
            }
            if members[..i].iter().any(|q| q.label() == p.label()) {
                return Err(ModelError::DuplicateOutcome(p.label().to_string()));
            }
        }
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let overlap = (members[i].matrix() * members[j].matrix()).max_abs();
                if overlap > structural_tol {
                    return Err(ModelError::NotOrthogonal {
                        first: members[i].label().to_string(),
                        second: members[j].label().to_string(),
                        overlap,
                    });
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(space.total_dim(), space.total_dim());
        for p in &members {
            sum = &sum + p.matrix();
        }
        let deviation = sum.identity_deviation();
        if deviation > structural_tol {
            return Err(ModelError::Incomplete { deviation });
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    /// Standard-basis alternatives on one factor, identity on the rest.
    pub fn basis(space: &HilbertSpace, factor: &str, outcome_labels: &[&str]) -> Result<Self, ModelError> {
        let dim = space.factor_dim(factor)?;
        if outcome_labels.len() != dim {
            return Err(ModelError::LabelCount {
                expected: dim,
                got: outcome_labels.len(),
            });
        }
        let rank = space.total_dim() / dim;
        let members = outcome_labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                let local = ComplexMatrix::from_fn(dim, dim, |r, c| if r == i && c == i { ONE } else { ZERO });
                Ok(Property {
                    space: space.clone(),
                    matrix: space.lift_operator(factor, &local)?,
                    rank,
                    label: label.to_string(),
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        // Orthogonality and completeness are exact by construction.
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    /// Decomposition given by local vector sets on a group of factors,
    /// lifted to the full space.
    pub fn local(
        space: &HilbertSpace,
        factors: &[&str],
        members: &[(&str, Vec<Vec<Complex64>>)],
        structural_tol: f64,
    ) -> Result<Self, ModelError> {
        let dims = factors
            .iter()
            .map(|f| space.factor_dim(f))
            .collect::<Result<Vec<_>, _>>()?;
        let local_space = HilbertSpace::new(factors.iter().copied().zip(dims))?;
        let props = members
            .iter()
            .map(|(label, vectors)| {
                let local = Property::from_vectors(&local_space, vectors, *label, structural_tol)?;
                let lifted = space.lift_operator_on(factors, local.matrix())?;
                Property::from_matrix(space, lifted, *label, structural_tol)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(space, props, structural_tol)
    }

    /// The single-member decomposition `{I}`: no statement at this time.
    pub fn trivial(space: &HilbertSpace, label: impl Into<String>) -> Self {
        Self {
            space: space.clone(),
            members: vec![Property::identity(space, label)],
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn members(&self) -> &[Property] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|p| p.label()).collect()
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.members.iter().position(|p| p.label() == label)
    }

    /// Same projectors in a different order; `order[k]` is the old index of new member `k`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            space: self.space.clone(),
            members: order.iter().map(|&k| self.members[k].clone()).collect(),
        }
    }

    pub fn relabeled(&self, labels: &[&str]) -> Self {
        Self {
            space: self.space.clone(),
            members: self
                .members
                .iter()
                .zip(labels)
                .map(|(p, l)| p.clone().with_label(*l))
                .collect(),
        }
    }
}
