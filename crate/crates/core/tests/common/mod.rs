//! Random families and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use chronologic::histories::{Family, PropagatorSpec};
use chronologic::linalg::{hermitian_exponential, ComplexMatrix};
use chronologic::{Decomposition, DensityMatrix, HilbertSpace, Property, ToleranceConfig};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex(rng: &mut TestRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_hermitian(rng: &mut TestRng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim, dim);
    let mut h = &a + &a.adjoint();
    for z in 0..dim {
        h[(z, z)].im = 0.0;
    }
    h.scale(Complex64::new(0.5, 0.0))
}

pub fn random_unitary(rng: &mut TestRng, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim);
    let t = rng.gen_range(0.2..3.0);
    hermitian_exponential(&h, t, 1e-10).unwrap()
}

pub fn qudit(dim: usize) -> HilbertSpace {
    HilbertSpace::new([("s", dim)]).unwrap()
}

/// Random partition of `0..dim` into between 1 and `dim` non-empty groups.
pub fn random_partition(rng: &mut TestRng, dim: usize) -> Vec<Vec<usize>> {
    let groups = rng.gen_range(1..=dim);
    let mut order: Vec<usize> = (0..dim).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); groups];
    for (k, i) in order.into_iter().enumerate() {
        let g = if k < groups { k } else { rng.gen_range(0..groups) };
        parts[g].push(i);
    }
    parts
}

/// Coarse-graining of the orthonormal columns of `basis` along `partition`.
pub fn decomposition_from_basis(space: &HilbertSpace, basis: &ComplexMatrix, partition: &[Vec<usize>]) -> Decomposition {
    let members = partition
        .iter()
        .enumerate()
        .map(|(k, group)| {
            let vectors: Vec<Vec<Complex64>> = group.iter().map(|&c| basis.column_vec(c)).collect();
            Property::from_vectors(space, &vectors, format!("o{k}"), 1e-10).unwrap()
        })
        .collect();
    Decomposition::new(space, members, 1e-10).unwrap()
}

pub fn random_decomposition(rng: &mut TestRng, space: &HilbertSpace) -> Decomposition {
    let d = space.total_dim();
    let basis = random_unitary(rng, d);
    let partition = random_partition(rng, d);
    decomposition_from_basis(space, &basis, &partition)
}

pub fn random_times(rng: &mut TestRng, n: usize) -> Vec<f64> {
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            t += rng.gen_range(0.1..2.0);
            t
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    Pure,
    Mixed,
    MaximallyMixed,
}

pub fn random_state(rng: &mut TestRng, space: &HilbertSpace, kind: InitialKind) -> DensityMatrix {
    let d = space.total_dim();
    match kind {
        InitialKind::Pure => {
            let amps: Vec<Complex64> = (0..d).map(|_| complex(rng)).collect();
            DensityMatrix::pure_state(space, &amps).unwrap()
        }
        InitialKind::Mixed => {
            let cols = rng.gen_range(1..=d);
            let w = random_matrix(rng, d, cols);
            let m = &w * &w.adjoint();
            let tr = m.trace().re;
            DensityMatrix::from_matrix(space, m.scale(Complex64::new(1.0 / tr, 0.0)), 1e-10).unwrap()
        }
        InitialKind::MaximallyMixed => DensityMatrix::maximally_mixed(space),
    }
}

/// Dimension in `2..=max_dim`, `1..=max_times` times, Hamiltonian
/// propagators and random-basis decompositions.
pub fn random_family(rng: &mut TestRng, max_dim: usize, max_times: usize, kind: InitialKind) -> Arc<Family> {
    let dim = rng.gen_range(2..=max_dim);
    let n = rng.gen_range(1..=max_times);
    random_family_with(rng, dim, n, kind)
}

pub fn random_family_with(rng: &mut TestRng, dim: usize, n: usize, kind: InitialKind) -> Arc<Family> {
    let space = qudit(dim);
    let initial = random_state(rng, &space, kind);
    let times = random_times(rng, n);
    let propagators = (0..n)
        .map(|_| PropagatorSpec::Generator {
            hamiltonian: random_hermitian(rng, dim),
            duration: rng.gen_range(0.1..2.0),
        })
        .collect();
    let decompositions = (0..n).map(|_| random_decomposition(rng, &space)).collect();
    Arc::new(Family::build(initial, times, propagators, decompositions, &ToleranceConfig::default()).unwrap())
}

/// A family that is medium-consistent by construction: dynamics permute a
/// fixed orthonormal basis (with phases), every decomposition coarse-grains
/// that basis, and the initial state is diagonal in it. Each basis vector
/// then follows exactly one history.
pub fn classical_family(rng: &mut TestRng, dim: usize, n: usize) -> Arc<Family> {
    let space = qudit(dim);
    let v = random_unitary(rng, dim);
    let weights: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let diag: Vec<Complex64> = weights.iter().map(|w| Complex64::new(w / total, 0.0)).collect();
    let rho = &(&v * &ComplexMatrix::diagonal(&diag)) * &v.adjoint();
    let initial = DensityMatrix::from_matrix(&space, rho, 1e-10).unwrap();
    let propagators = (0..n)
        .map(|_| {
            let mut perm: Vec<usize> = (0..dim).collect();
            perm.shuffle(rng);
            let mut p = ComplexMatrix::zeros(dim, dim);
            for (c, &r) in perm.iter().enumerate() {
                p[(r, c)] = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            }
            PropagatorSpec::Unitary(&(&v * &p) * &v.adjoint())
        })
        .collect();
    let decompositions = (0..n)
        .map(|_| {
            let partition = random_partition(rng, dim);
            decomposition_from_basis(&space, &v, &partition)
        })
        .collect();
    let times = random_times(rng, n);
    Arc::new(Family::build(initial, times, propagators, decompositions, &ToleranceConfig::default()).unwrap())
}

/// Chain operator `P_n U_n ... P_1 U_1` built from the family's raw matrices.
pub fn chain_oracle(family: &Family, outcomes: &[usize]) -> ComplexMatrix {
    let d = family.space().total_dim();
    let mut c = ComplexMatrix::identity(d);
    for (k, &o) in outcomes.iter().enumerate() {
        c = &family.propagators()[k] * &c;
        c = family.decompositions()[k].members()[o].matrix() * &c;
    }
    c
}

/// `Tr[C_α ρ C_β†]` by dense products.
pub fn functional_oracle(family: &Family, alpha: &[usize], beta: &[usize]) -> Complex64 {
    let ca = chain_oracle(family, alpha);
    let cb = chain_oracle(family, beta);
    (&(&ca * family.initial().matrix()) * &cb.adjoint()).trace()
}

/// All outcome tuples in enumeration order, earliest time most significant.
pub fn all_outcomes(family: &Family) -> Vec<Vec<usize>> {
    let radices = family.radices();
    let mut out = vec![Vec::new()];
    for r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    out
}
