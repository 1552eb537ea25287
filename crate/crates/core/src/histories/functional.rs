use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Condition, EngineError, Family, History};
use crate::linalg::{ComplexMatrix, ZERO};

/// Row-wise nonzero entries of an operator.
struct SparseRows(Vec<Vec<(usize, Complex64)>>);

impl SparseRows {
    fn new(m: &ComplexMatrix) -> Self {
        Self(
            (0..m.rows())
                .map(|r| {
                    m.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, z)| **z != ZERO)
                        .map(|(c, z)| (c, *z))
                        .collect()
                })
                .collect(),
        )
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|row| row.iter().map(|&(c, a)| a * v[c]).sum())
            .collect()
    }
}

/// `C_α W` for one history, stored as its nonzero columns.
///
/// Column `k` corresponds to column `k` of the initial-state factor, so two
/// branches pair up column by column: `D(α, β) = Σ_k <X_β[:,k] | X_α[:,k]>`.
#[derive(Clone)]
struct Branch(Vec<(usize, Vec<Complex64>)>);

impl Branch {
    fn from_factor(w: &ComplexMatrix) -> Self {
        Self::compact((0..w.cols()).map(|k| (k, w.column_vec(k))))
    }

    fn compact(cols: impl Iterator<Item = (usize, Vec<Complex64>)>) -> Self {
        Self(cols.filter(|(_, v)| v.iter().any(|z| *z != ZERO)).collect())
    }

    fn map(&self, op: &SparseRows) -> Self {
        Self::compact(self.0.iter().map(|(k, v)| (*k, op.apply(v))))
    }

    /// `Tr[X_beta† X_alpha]`.
    fn pair(alpha: &Self, beta: &Self) -> Complex64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = ZERO;
        while i < alpha.0.len() && j < beta.0.len() {
            let (ka, va) = &alpha.0[i];
            let (kb, vb) = &beta.0[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += vb.iter().zip(va).map(|(b, a)| b.conj() * a).sum::<Complex64>();
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// `D(α, β) = Tr[C_α ρ C_β†]` over all pairs of elementary histories.
#[derive(Debug, Clone)]
pub struct DecoherenceMatrix {
    family: Arc<Family>,
    size: usize,
    entries: Vec<Complex64>,
    max_weak: f64,
    max_medium: f64,
}

/// Computes the full decoherence matrix of `family`.
///
/// Entries are evaluated in parallel; each is a pure function of the family
/// and the pair, so the result does not depend on the worker count.
pub fn decoherence_functional(family: &Arc<Family>, max_histories: usize) -> Result<DecoherenceMatrix, EngineError> {
    let size = family.checked_count(max_histories)?;

    let mut branches = vec![Branch::from_factor(family.initial().factor())];
    for (u, dec) in family.propagators().iter().zip(family.decompositions()) {
        let u_rows = (u.identity_deviation() != 0.0).then(|| SparseRows::new(u));
        let projectors: Vec<SparseRows> = dec.members().iter().map(|p| SparseRows::new(p.matrix())).collect();
        branches = branches
            .par_iter()
            .flat_map_iter(|b| {
                let evolved = match &u_rows {
                    Some(rows) => b.map(rows),
                    None => b.clone(),
                };
                projectors.iter().map(move |p| evolved.map(p)).collect::<Vec<_>>()
            })
            .collect();
    }
    debug_assert_eq!(branches.len(), size);

    let upper: Vec<Vec<Complex64>> = (0..size)
        .into_par_iter()
        .map(|a| (a..size).map(|b| Branch::pair(&branches[a], &branches[b])).collect())
        .collect();
    let mut entries = vec![ZERO; size * size];
    for (a, row) in upper.iter().enumerate() {
        for (offset, &z) in row.iter().enumerate() {
            let b = a + offset;
            entries[a * size + b] = z;
            entries[b * size + a] = z.conj();
        }
        // Diagonals are real by construction.
        entries[a * size + a].im = 0.0;
    }

    let mut d = DecoherenceMatrix {
        family: Arc::clone(family),
        size,
        entries,
        max_weak: 0.0,
        max_medium: 0.0,
    };
    let cutoff = family.structural_tol();
    for a in 0..size {
        for b in a + 1..size {
            d.max_weak = d.max_weak.max(d.violation(a, b, Condition::Weak, cutoff));
            d.max_medium = d.max_medium.max(d.violation(a, b, Condition::Medium, cutoff));
        }
    }
    Ok(d)
}

impl DecoherenceMatrix {
    pub fn family(&self) -> &Arc<Family> {
        &self.family
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `D(α, β)` by flat history index.
    pub fn entry(&self, alpha: usize, beta: usize) -> Complex64 {
        self.entries[alpha * self.size + beta]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size).map(|a| self.entry(a, a).re).collect()
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.size, self.size, self.entries.clone()).expect("nonempty functional")
    }

    /// Normalized violation of pair `(α, β)`: `|D| / sqrt(D_αα D_ββ)`, or
    /// `|Re D| / …` for the weak condition; zero when either diagonal is at
    /// most `diagonal_cutoff`.
    pub fn violation(&self, alpha: usize, beta: usize, condition: Condition, diagonal_cutoff: f64) -> f64 {
        let (da, db) = (self.entry(alpha, alpha).re, self.entry(beta, beta).re);
        if da <= diagonal_cutoff || db <= diagonal_cutoff {
            return 0.0;
        }
        let z = self.entry(alpha, beta);
        let numerator = match condition {
            Condition::Weak => z.re.abs(),
            Condition::Medium => z.norm(),
        };
        numerator / (da * db).sqrt()
    }

    /// Largest normalized violation over all distinct pairs.
    pub fn max_violation(&self, condition: Condition) -> f64 {
        match condition {
            Condition::Weak => self.max_weak,
            Condition::Medium => self.max_medium,
        }
    }

    /// `Σ_{α,β ∈ A} Re D(α, β)`: the weight a coarse-grained history would
    /// receive, interference included. Equals the sum of diagonals exactly
    /// when the real parts of the off-diagonal terms inside `A` cancel.
    pub fn coarse_grained_weight(&self, members: impl IntoIterator<Item = usize> + Clone) -> f64 {
        let mut total = 0.0;
        for a in members.clone() {
            for b in members.clone() {
                total += self.entry(a, b).re;
            }
        }
        total
    }

    pub(crate) fn check_history(&self, history: &History) -> Result<(), EngineError> {
        self.family.check_history(history)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gates, real_vector, ToleranceConfig};
    use crate::model::{Decomposition, DensityMatrix, HilbertSpace};

    fn double_hadamard() -> Arc<Family> {
        let space = HilbertSpace::new([("q", 2)]).unwrap();
        let rho = DensityMatrix::pure_state(&space, &real_vector(&[1.0, 0.0])).unwrap();
        let dec = Decomposition::basis(&space, "q", &["0", "1"]).unwrap();
        Arc::new(
            Family::build(
                rho,
                vec![1.0, 2.0],
                vec![gates::hadamard().into(), gates::hadamard().into()],
                vec![dec.clone(), dec],
                &ToleranceConfig::default(),
            )
            .unwrap(),
        )
    }

    /// Trace-formula oracle: Tr[C_α ρ C_β†] with full chain operators.
    fn trace_oracle(f: &Family) -> ComplexMatrix {
        let hs = f.enumerate_histories(4096).unwrap();
        let chains: Vec<ComplexMatrix> = hs.iter().map(|h| f.chain_operator(h).unwrap()).collect();
        let rho = f.initial().matrix();
        ComplexMatrix::from_fn(hs.len(), hs.len(), |a, b| (&(&chains[a] * rho) * &chains[b].adjoint()).trace())
    }

    #[test]
    fn double_hadamard_entries() {
        let f = double_hadamard();
        let d = decoherence_functional(&f, 4096).unwrap();
        let oracle = trace_oracle(&f);
        // (0,0) is flat 0, (1,0) is flat 2
        assert!((d.entry(0, 2) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((d.entry(0, 0) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((oracle[(0, 2)] - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        for a in 0..4 {
            for b in 0..4 {
                assert!((d.entry(a, b) - oracle[(a, b)]).norm() < 1e-14);
            }
        }
        let trace: f64 = d.diagonal().iter().sum();
        assert!((trace - 1.0).abs() < 1e-12);
        assert!((d.max_violation(Condition::Medium) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_state_matches_trace_oracle() {
        let space = HilbertSpace::new([("a", 2), ("b", 2)]).unwrap();
        let m = ComplexMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                Complex64::new([0.4, 0.3, 0.2, 0.1][r], 0.0)
            } else if r + 1 == c {
                Complex64::new(0.05, 0.02)
            } else if c + 1 == r {
                Complex64::new(0.05, -0.02)
            } else {
                ZERO
            }
        });
        let rho = DensityMatrix::from_matrix(&space, m, 1e-10).unwrap();
        let dec_a = Decomposition::basis(&space, "a", &["0", "1"]).unwrap();
        let dec_b = Decomposition::basis(&space, "b", &["0", "1"]).unwrap();
        let u1 = space.lift_operator("a", &gates::hadamard()).unwrap();
        let u2 = space.lift_operator_on(&["a", "b"], &gates::controlled_rotation(0.7)).unwrap();
        let f = Arc::new(
            Family::build(rho, vec![1.0, 2.0], vec![u1.into(), u2.into()], vec![dec_a, dec_b], &ToleranceConfig::default())
                .unwrap(),
        );
        let d = decoherence_functional(&f, 4096).unwrap();
        let oracle = trace_oracle(&f);
        for a in 0..4 {
            for b in 0..4 {
                assert!((d.entry(a, b) - oracle[(a, b)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = double_hadamard();
        assert!(matches!(
            decoherence_functional(&f, 3),
            Err(EngineError::TooManyHistories { count: Some(4), cap: 3 })
        ));
    }
}
