use std::sync::Arc;

use num_complex::Complex64;

use super::EngineError;
use crate::linalg::{self, hermitian_exponential, ComplexMatrix, ToleranceConfig};
use crate::model::{Decomposition, DensityMatrix, HilbertSpace};

/// How the evolution into one time is specified.
#[derive(Debug, Clone)]
pub enum PropagatorSpec {
    Unitary(ComplexMatrix),
    /// `exp(-i H t)` for a Hermitian generator `H` and duration `t`.
    Generator { hamiltonian: ComplexMatrix, duration: f64 },
}

impl From<ComplexMatrix> for PropagatorSpec {
    fn from(u: ComplexMatrix) -> Self {
        PropagatorSpec::Unitary(u)
    }
}

/// Initial state, times, propagators and one decomposition per time.
///
/// `propagators[k]` evolves from the previous time (the initial time for
/// `k = 0`) to `times[k]`, where `decompositions[k]` applies.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    space: HilbertSpace,
    initial: DensityMatrix,
    times: Vec<f64>,
    propagators: Vec<ComplexMatrix>,
    decompositions: Vec<Decomposition>,
    structural_tol: f64,
}

impl Family {
    pub fn build(
        initial: DensityMatrix,
        times: Vec<f64>,
        propagators: Vec<PropagatorSpec>,
        decompositions: Vec<Decomposition>,
        tolerances: &ToleranceConfig,
    ) -> Result<Self, EngineError> {
        let tol = tolerances.structural_tol;
        let space = initial.space().clone();
        if times.is_empty() {
            return Err(EngineError::NoTimes);
        }
        if propagators.len() != times.len() || decompositions.len() != times.len() {
            return Err(EngineError::CountMismatch {
                times: times.len(),
                propagators: propagators.len(),
                decompositions: decompositions.len(),
            });
        }
        for (index, w) in times.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(EngineError::NonMonotonicTimes {
                    index: index + 1,
                    previous: w[0],
                    current: w[1],
                });
            }
        }
        if let Some(index) = times.iter().position(|t| !t.is_finite()) {
            return Err(EngineError::NonMonotonicTimes {
                index,
                previous: f64::NAN,
                current: times[index],
            });
        }
        let d = space.total_dim();
        let mut realized = Vec::with_capacity(propagators.len());
        for (index, spec) in propagators.into_iter().enumerate() {
            let u = match spec {
                PropagatorSpec::Unitary(u) => u,
                PropagatorSpec::Generator { hamiltonian, duration } => {
                    hermitian_exponential(&hamiltonian, duration, tol)
                        .map_err(|source| EngineError::Propagator { index, source })?
                }
            };
            if u.shape() != (d, d) {
                return Err(EngineError::SpaceMismatch {
                    component: "propagator",
                    index,
                });
            }
            let (ok, deviation) =
                linalg::is_unitary(&u, tol).map_err(|source| EngineError::Propagator { index, source })?;
            if !ok {
                return Err(EngineError::NonUnitary { index, deviation });
            }
            realized.push(u);
        }
        for (index, dec) in decompositions.iter().enumerate() {
            if dec.space() != &space {
                return Err(EngineError::SpaceMismatch {
                    component: "decomposition",
                    index,
                });
            }
        }
        Ok(Self {
            space,
            initial,
            times,
            propagators: realized,
            decompositions,
            structural_tol: tol,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn propagators(&self) -> &[ComplexMatrix] {
        &self.propagators
    }

    pub fn decompositions(&self) -> &[Decomposition] {
        &self.decompositions
    }

    pub fn structural_tol(&self) -> f64 {
        self.structural_tol
    }

    /// Number of outcomes at each time.
    pub fn radices(&self) -> Vec<usize> {
        self.decompositions.iter().map(|d| d.len()).collect()
    }

    /// Number of elementary histories, or `None` on overflow.
    pub fn history_count(&self) -> Option<usize> {
        self.decompositions
            .iter()
            .try_fold(1usize, |acc, d| acc.checked_mul(d.len()))
    }

    /// Elementary histories in mixed-radix order, earliest time most significant.
    pub fn enumerate_histories(&self, max_histories: usize) -> Result<Vec<History>, EngineError> {
        let count = self.checked_count(max_histories)?;
        let radices = self.radices();
        Ok((0..count)
            .map(|flat| {
                let mut rem = flat;
                let mut outcomes = vec![0; radices.len()];
                for (k, &r) in radices.iter().enumerate().rev() {
                    outcomes[k] = rem % r;
                    rem /= r;
                }
                History {
                    outcomes,
                    flat_index: flat,
                }
            })
            .collect())
    }

    pub(crate) fn checked_count(&self, max_histories: usize) -> Result<usize, EngineError> {
        match self.history_count() {
            Some(m) if m <= max_histories => Ok(m),
            other => Err(EngineError::TooManyHistories {
                count: other,
                cap: max_histories,
            }),
        }
    }

    pub fn history(&self, outcomes: &[usize]) -> Result<History, EngineError> {
        let radices = self.radices();
        if outcomes.len() != radices.len() || outcomes.iter().zip(&radices).any(|(o, r)| o >= r) {
            return Err(EngineError::ForeignHistory);
        }
        let flat_index = outcomes.iter().zip(&radices).fold(0, |acc, (o, r)| acc * r + o);
        Ok(History {
            outcomes: outcomes.to_vec(),
            flat_index,
        })
    }

    pub fn history_from_labels(&self, labels: &[&str]) -> Result<History, EngineError> {
        if labels.len() != self.decompositions.len() {
            return Err(EngineError::ForeignHistory);
        }
        let outcomes = self
            .decompositions
            .iter()
            .zip(labels)
            .map(|(d, l)| d.outcome_index(l).ok_or_else(|| EngineError::UnknownOutcome(l.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.history(&outcomes)
    }

    /// Outcome labels of `history`, one per time.
    pub fn labels_of(&self, history: &History) -> Vec<&str> {
        self.decompositions
            .iter()
            .zip(&history.outcomes)
            .map(|(d, &o)| d.members()[o].label())
            .collect()
    }

    pub(crate) fn check_history(&self, history: &History) -> Result<(), EngineError> {
        let h = self.history(&history.outcomes)?;
        if h.flat_index != history.flat_index {
            return Err(EngineError::ForeignHistory);
        }
        Ok(())
    }

    /// Same setup with different decompositions.
    pub fn with_decompositions(&self, decompositions: Vec<Decomposition>) -> Result<Self, EngineError> {
        if decompositions.len() != self.times.len() {
            return Err(EngineError::CountMismatch {
                times: self.times.len(),
                propagators: self.propagators.len(),
                decompositions: decompositions.len(),
            });
        }
        for (index, dec) in decompositions.iter().enumerate() {
            if dec.space() != &self.space {
                return Err(EngineError::SpaceMismatch {
                    component: "decomposition",
                    index,
                });
            }
        }
        Ok(Self {
            decompositions,
            ..self.clone()
        })
    }

    /// The mirror-image family.
    ///
    /// Decompositions are reversed, times are reflected onto the same
    /// interval, and each propagator is replaced by the adjoint of its
    /// mirror: the step into reversed time `k >= 1` is `U_{n-k}†`, and the
    /// step into the first reversed time is `U_0†`. Applying this twice
    /// gives back the original family. For ρ = I/d each history and its
    /// reversed image have equal probability.
    pub fn time_reversed(&self) -> Self {
        let n = self.times.len();
        let (first, last) = (self.times[0], self.times[n - 1]);
        let times = self.times.iter().rev().map(|t| first + last - t).collect();
        let mut propagators = Vec::with_capacity(n);
        propagators.push(self.propagators[0].adjoint());
        for k in 1..n {
            propagators.push(self.propagators[n - k].adjoint());
        }
        Self {
            space: self.space.clone(),
            initial: self.initial.clone(),
            times,
            propagators,
            decompositions: self.decompositions.iter().rev().cloned().collect(),
            structural_tol: self.structural_tol,
        }
    }

    /// The image of `history` under `time_reversed`, as a history of `reversed`.
    pub fn reversed_history(reversed: &Family, history: &History) -> Result<History, EngineError> {
        let outcomes: Vec<usize> = history.outcomes.iter().rev().copied().collect();
        reversed.history(&outcomes)
    }

    /// `C = P_n U_n ⋯ P_1 U_1` for `history`.
    pub fn chain_operator(&self, history: &History) -> Result<ComplexMatrix, EngineError> {
        self.check_history(history)?;
        let mut chain = ComplexMatrix::identity(self.space.total_dim());
        for ((u, dec), &o) in self.propagators.iter().zip(&self.decompositions).zip(&history.outcomes) {
            chain = u * &chain;
            chain = dec.members()[o].matrix() * &chain;
        }
        Ok(chain)
    }

    /// Probability of `history` by evolving and projecting the initial state
    /// step by step; never forms chain operators or the functional.
    pub fn sequential_projection_probability(&self, history: &History) -> Result<f64, EngineError> {
        self.check_history(history)?;
        let steps = self.propagators.iter().zip(&self.decompositions).zip(&history.outcomes);
        if let Some(ket) = self.initial.ket() {
            let mut psi: Vec<Complex64> = ket.to_vec();
            for ((u, dec), &o) in steps {
                psi = u.apply(&psi)?;
                psi = dec.members()[o].matrix().apply(&psi)?;
            }
            Ok(linalg::norm(&psi).powi(2))
        } else {
            let mut rho = self.initial.matrix().clone();
            for ((u, dec), &o) in steps {
                rho = &(u * &rho) * &u.adjoint();
                let p = dec.members()[o].matrix();
                rho = &(p * &rho) * p;
            }
            Ok(rho.trace().re)
        }
    }
}

/// One elementary history: an outcome index per time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    outcomes: Vec<usize>,
    flat_index: usize,
}

impl History {
    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn flat_index(&self) -> usize {
        self.flat_index
    }
}

/// Shared handle used by everything that refers back to a family.
pub type FamilyRef = Arc<Family>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gates, real_vector};

    fn qubit_family(u: ComplexMatrix) -> Family {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::pure_state(&space, &real_vector(&[1.0, 0.0])).unwrap();
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        Family::build(rho, vec![1.0], vec![u.into()], vec![dec], &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn single_time_family_has_two_histories() {
        let f = qubit_family(ComplexMatrix::identity(2));
        assert_eq!(f.history_count(), Some(2));
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&space);
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        let tol = ToleranceConfig::default();
        let id = || PropagatorSpec::Unitary(ComplexMatrix::identity(2));

        let err = Family::build(rho.clone(), vec![1.0, 1.0], vec![id(), id()], vec![dec.clone(), dec.clone()], &tol)
            .unwrap_err();
        assert!(matches!(err, EngineError::NonMonotonicTimes { index: 1, .. }));

        let bad = ComplexMatrix::diagonal(&real_vector(&[1.0, 2.0]));
        let err = Family::build(rho.clone(), vec![0.0, 1.0], vec![id(), bad.into()], vec![dec.clone(), dec.clone()], &tol)
            .unwrap_err();
        match err {
            EngineError::NonUnitary { index, deviation } => {
                assert_eq!(index, 1);
                assert!((deviation - 3.0).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }

        let big = HilbertSpace::new([("a", 2), ("b", 2)]).unwrap();
        let other_dec = Decomposition::basis(&big, "a", &["0", "1"]).unwrap();
        let err = Family::build(rho.clone(), vec![1.0], vec![id()], vec![other_dec], &tol).unwrap_err();
        assert!(matches!(err, EngineError::SpaceMismatch { component: "decomposition", index: 0 }));

        let err = Family::build(rho, vec![1.0], vec![id(), id()], vec![dec], &tol).unwrap_err();
        assert!(matches!(err, EngineError::CountMismatch { .. }));
    }

    #[test]
    fn generator_spec_matches_explicit_unitary() {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::pure_state(&space, &real_vector(&[0.6, 0.8])).unwrap();
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        let tol = ToleranceConfig::default();
        let from_generator = Family::build(
            rho.clone(),
            vec![1.0],
            vec![PropagatorSpec::Generator {
                hamiltonian: gates::pauli_x(),
                duration: std::f64::consts::FRAC_PI_2,
            }],
            vec![dec.clone()],
            &tol,
        )
        .unwrap();
        let explicit = Family::build(
            rho,
            vec![1.0],
            vec![gates::pauli_x().scale(crate::linalg::c(0.0, -1.0)).into()],
            vec![dec],
            &tol,
        )
        .unwrap();
        let a = super::super::decoherence_functional(&Arc::new(from_generator), 4096).unwrap();
        let b = super::super::decoherence_functional(&Arc::new(explicit), 4096).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.entry(i, j) - b.entry(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn enumeration_is_mixed_radix() {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&space);
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        let id = || PropagatorSpec::Unitary(ComplexMatrix::identity(2));
        let f = Family::build(rho, vec![1.0, 2.0], vec![id(), id()], vec![dec.clone(), dec], &ToleranceConfig::default())
            .unwrap();
        let hs = f.enumerate_histories(4096).unwrap();
        let outcomes: Vec<&[usize]> = hs.iter().map(|h| h.outcomes()).collect();
        assert_eq!(outcomes, vec![&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(hs.iter().enumerate().all(|(i, h)| h.flat_index() == i));
        assert!(matches!(
            f.enumerate_histories(3),
            Err(EngineError::TooManyHistories { count: Some(4), cap: 3 })
        ));
    }

    #[test]
    fn degenerate_decomposition_gives_one_history() {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&space);
        let f = Family::build(
            rho,
            vec![0.5],
            vec![ComplexMatrix::identity(2).into()],
            vec![Decomposition::trivial(&space, "any")],
            &ToleranceConfig::default(),
        )
        .unwrap();
        let hs = f.enumerate_histories(4096).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(f.chain_operator(&hs[0]).unwrap(), ComplexMatrix::identity(2));
        assert!((f.sequential_projection_probability(&hs[0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chain_operator_hadamard_then_projector() {
        let f = qubit_family(gates::hadamard());
        let h0 = f.history(&[0]).unwrap();
        let c = f.chain_operator(&h0).unwrap();
        // matrix-multiply oracle: |0><0| H
        let p0 = ComplexMatrix::diagonal(&real_vector(&[1.0, 0.0]));
        let oracle = &p0 * &gates::hadamard();
        assert!(linalg::frobenius_distance(&c, &oracle).unwrap() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real_rows(&[&[s, s], &[0.0, 0.0]]).unwrap();
        assert!(linalg::frobenius_distance(&c, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn orthogonal_projector_kills_the_state() {
        let f = qubit_family(ComplexMatrix::identity(2));
        let h1 = f.history(&[1]).unwrap();
        let c = f.chain_operator(&h1).unwrap();
        let weight = (&(&c * f.initial().matrix()) * &c.adjoint()).trace();
        assert_eq!(weight.norm(), 0.0);
        assert_eq!(f.sequential_projection_probability(&h1).unwrap(), 0.0);
    }

    #[test]
    fn foreign_history_rejected() {
        let f = qubit_family(ComplexMatrix::identity(2));
        assert!(matches!(f.history(&[2]), Err(EngineError::ForeignHistory)));
        assert!(matches!(f.history(&[0, 0]), Err(EngineError::ForeignHistory)));
    }

    #[test]
    fn time_reversal_is_an_involution() {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&space);
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        let f = Family::build(
            rho,
            vec![0.0, 1.0, 3.0],
            vec![gates::hadamard().into(), gates::pauli_y().into(), gates::rotation(0.3).into()],
            vec![dec.clone(), Decomposition::trivial(&space, "any"), dec],
            &ToleranceConfig::default(),
        )
        .unwrap();
        let r = f.time_reversed();
        assert_eq!(r.times(), &[0.0, 2.0, 3.0]);
        assert_eq!(r.radices(), vec![2, 1, 2]);
        assert!(r.propagators().iter().all(|u| linalg::is_unitary(u, 1e-10).unwrap().0));
        assert_eq!(r.time_reversed(), f);
    }
}
