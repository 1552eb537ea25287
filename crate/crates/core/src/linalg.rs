//! Dense complex matrices and the structural validators the rest of the
//! engine is built on.
//!
//! Storage is row-major `Vec<Complex64>`. Products skip exact zeros in the
//! left operand, which keeps lifted gates and projectors (mostly zeros)
//! cheap to multiply without a separate sparse type.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest row or column count the dense engine will allocate.
pub const MAX_DENSE_DIM: usize = 4096;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyShape { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("dimension {dim} exceeds the dense engine maximum of {max}")]
    TooLarge { dim: usize, max: usize },
}

/// Tolerances used by validators and by the logic layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Idempotence, unitarity and Hermiticity checks.
    pub structural_tol: f64,
    /// Normalized consistency violations.
    pub consistency_tol: f64,
    /// Implication thresholds and null-condition detection.
    pub probability_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            structural_tol: 1e-10,
            consistency_tol: 1e-8,
            probability_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("tolerance `{name}` must lie in (0, 1), got {value}")]
pub struct InvalidTolerance {
    pub name: &'static str,
    pub value: f64,
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), InvalidTolerance> {
        for (name, value) in [
            ("structural_tol", self.structural_tol),
            ("consistency_tol", self.consistency_tol),
            ("probability_tol", self.probability_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .take(16)
                .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::EntryCount {
                rows: r,
                cols: c,
                expected: r * c,
                got: rows.iter().map(|row| row.len()).sum(),
            });
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Column vector (n x 1).
    pub fn column(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), 1, |r, _| entries[r])
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column_vec(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Matrix product. Exact zeros in `self` are skipped.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = rhs.cols;
        let mut out = vec![ZERO; self.rows * n];
        let kernel = |(r, out_row): (usize, &mut [Complex64])| {
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        };
        // Small products are not worth the fork/join.
        if self.rows * self.cols * n >= 1 << 18 {
            out.par_chunks_mut(n).enumerate().for_each(kernel);
        } else {
            out.chunks_mut(n).enumerate().for_each(kernel);
        }
        Ok(Self {
            rows: self.rows,
            cols: n,
            data: out,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| **a != ZERO)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Largest |m_ij - conj(m_ji)|.
    pub fn hermitian_deviation(&self) -> Result<f64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        Ok(worst)
    }

    /// Largest |m_ij - δ_ij|.
    pub fn identity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((self[(r, c)] - target).norm());
            }
        }
        worst
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch, like slice indexing does.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

/// Kronecker product: block (i, j) of the result is `a[i, j] * b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    for dim in [rows, cols] {
        if dim > MAX_DENSE_DIM {
            return Err(LinalgError::TooLarge {
                dim,
                max: MAX_DENSE_DIM,
            });
        }
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    }))
}

/// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian matrix.
pub fn hermitian_eigen(
    h: &ComplexMatrix,
    structural_tol: f64,
) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
    let asymmetry = h.hermitian_deviation()?;
    if asymmetry > structural_tol {
        return Err(LinalgError::NotHermitian { asymmetry });
    }
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let mut order: Vec<usize> = (0..h.rows).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(h.rows, h.rows, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `exp(-i h t)` for Hermitian `h`, via its eigendecomposition.
pub fn hermitian_exponential(
    h: &ComplexMatrix,
    t: f64,
    structural_tol: f64,
) -> Result<ComplexMatrix, LinalgError> {
    let (values, v) = hermitian_eigen(h, structural_tol)?;
    let phases: Vec<Complex64> = values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
    let n = h.rows;
    // V diag(phases) V†
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj()).sum()
    }))
}

/// Unitarity check; always reports `max |u†u - I|`.
pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> Result<(bool, f64), LinalgError> {
    if !u.is_square() {
        return Err(LinalgError::NotSquare {
            rows: u.rows,
            cols: u.cols,
        });
    }
    let deviation = u.adjoint().matmul(u)?.identity_deviation();
    Ok((deviation <= tol, deviation))
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(a.try_sub(b)?.frobenius_norm())
}

/// Hermitian inner product <u|v>.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real_vector(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Fixed single-qubit and two-qubit gates.
pub mod gates {
    use super::{c, ComplexMatrix, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
            .unwrap()
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap()
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    /// Real rotation `[[cos a, -sin a], [sin a, cos a]]`; takes |0> to cos a|0> + sin a|1>.
    pub fn rotation(angle: f64) -> ComplexMatrix {
        let (s, co) = angle.sin_cos();
        ComplexMatrix::from_real_rows(&[&[co, -s], &[s, co]]).unwrap()
    }

    /// `|0><0| ⊗ I + |1><1| ⊗ target` on (control, target) in that order.
    pub fn controlled(target: &ComplexMatrix) -> ComplexMatrix {
        let d = target.rows();
        ComplexMatrix::from_fn(2 * d, 2 * d, |r, col| match (r / d, col / d) {
            (0, 0) => {
                if r == col {
                    ONE
                } else {
                    ZERO
                }
            }
            (1, 1) => target[(r - d, col - d)],
            _ => ZERO,
        })
    }

    pub fn controlled_not() -> ComplexMatrix {
        controlled(&pauli_x())
    }

    pub fn controlled_rotation(angle: f64) -> ComplexMatrix {
        controlled(&rotation(angle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    const TOL: f64 = 1e-10;

    fn power_series_exp(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        // exp(-i h t) = Σ (-i t h)^k / k!
        let n = h.rows();
        let a = h.scale(c(0.0, -t));
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for k in 1..60 {
            term = (&term * &a).scale(c(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_lifts_projector() {
        let p = ComplexMatrix::diagonal(&real_vector(&[1.0, 0.0]));
        let lifted = tensor_product(&p, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(lifted, ComplexMatrix::diagonal(&real_vector(&[1.0, 1.0, 0.0, 0.0])));
    }

    #[test]
    fn kron_of_flips_is_antidiagonal() {
        let x = gates::pauli_x();
        let xx = tensor_product(&x, &x).unwrap();
        // hand expansion: block (0,1) = X, block (1,0) = X
        let expected = ComplexMatrix::from_fn(4, 4, |r, c| if r + c == 3 { ONE } else { ZERO });
        assert_eq!(xx, expected);
    }

    #[test]
    fn kron_rejects_oversized_result() {
        let big = ComplexMatrix::identity(MAX_DENSE_DIM);
        let err = tensor_product(&big, &ComplexMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, LinalgError::TooLarge { dim: 8192, .. }));
    }

    #[test]
    fn exponential_of_zero_generator() {
        let u = hermitian_exponential(&ComplexMatrix::zeros(3, 3), 2.7, TOL).unwrap();
        assert!(frobenius_distance(&u, &ComplexMatrix::identity(3)).unwrap() < 1e-14);
    }

    #[test]
    fn exponential_of_diagonal_generator() {
        let h = ComplexMatrix::diagonal(&real_vector(&[0.0, PI]));
        let u = hermitian_exponential(&h, 1.0, TOL).unwrap();
        let expected = ComplexMatrix::diagonal(&real_vector(&[1.0, -1.0]));
        assert!(frobenius_distance(&u, &expected).unwrap() < 1e-14);
    }

    #[test]
    fn exponential_of_pauli_x_matches_power_series() {
        let x = gates::pauli_x();
        let u = hermitian_exponential(&x, FRAC_PI_2, TOL).unwrap();
        let oracle = power_series_exp(&x, FRAC_PI_2);
        let expected = x.scale(c(0.0, -1.0));
        assert!(frobenius_distance(&oracle, &expected).unwrap() < 1e-14);
        assert!(frobenius_distance(&u, &oracle).unwrap() < 1e-13);
    }

    #[test]
    fn exponential_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.5, 0.0]]).unwrap();
        match hermitian_exponential(&m, 1.0, TOL) {
            Err(LinalgError::NotHermitian { asymmetry }) => assert!((asymmetry - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unitarity_examples() {
        let (ok, dev) = is_unitary(&ComplexMatrix::identity(4), TOL).unwrap();
        assert!(ok);
        assert_eq!(dev, 0.0);
        assert!(is_unitary(&gates::hadamard(), TOL).unwrap().0);
        // u†u - I = diag(0, 3)
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        let (ok, dev) = is_unitary(&m, TOL).unwrap();
        assert!(!ok);
        assert!((dev - 3.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_examples() {
        let h = gates::hadamard();
        assert_eq!(frobenius_distance(&h, &h).unwrap(), 0.0);
        let d = frobenius_distance(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2, 2)).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        // entrywise: |s-1|^2 + s^2 + s^2 + |-s-1|^2 = 4 with s = 1/√2
        let s = FRAC_1_SQRT_2;
        let oracle = ((s - 1.0).powi(2) + 2.0 * s * s + (s + 1.0).powi(2)).sqrt();
        let got = frobenius_distance(&h, &ComplexMatrix::identity(2)).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 2.0).abs() < 1e-15);
        assert!(frobenius_distance(&h, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_vec(0, 1, vec![]),
            Err(LinalgError::EmptyShape { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![ONE; 3]),
            Err(LinalgError::EntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_vec(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn zero_skipping_product_matches_dense_definition() {
        let a = ComplexMatrix::from_fn(3, 4, |r, k| if (r + k) % 2 == 0 { ZERO } else { c(r as f64, k as f64) });
        let b = ComplexMatrix::from_fn(4, 2, |k, j| c(1.0 + k as f64, -(j as f64)));
        let p = a.matmul(&b).unwrap();
        for r in 0..3 {
            for j in 0..2 {
                let expected: Complex64 = (0..4).map(|k| a[(r, k)] * b[(k, j)]).sum();
                assert_eq!(p[(r, j)], expected);
            }
        }
    }

    #[test]
    fn tolerance_config_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let bad = ToleranceConfig {
            consistency_tol: 0.0,
            ..Default::default()
        };
        assert_eq!(bad.validate().unwrap_err().name, "consistency_tol");
    }

    #[test]
    fn controlled_not_permutes_basis() {
        let cx = gates::controlled_not();
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(cx, expected);
        assert!(is_unitary(&gates::controlled_rotation(0.3), TOL).unwrap().0);
    }
}
