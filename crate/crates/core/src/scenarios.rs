//! Ready-made families for the standard situations: classical coin tosses,
//! measurement with retrodiction, macroscopic-superposition properties,
//! EPR timing, and environment-induced decoherence.
//!
//! Each constructor returns a [`Scenario`] carrying named propositions and a
//! list of expectations that the engine must reproduce, so scenarios double
//! as regression fixtures.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::histories::{
    decoherence_functional, history_probability, Condition, DecoherenceMatrix, EngineConfig, EngineError, Family,
    PropagatorSpec,
};
use crate::linalg::{gates, real_vector, ComplexMatrix, ToleranceConfig, ZERO};
use crate::logic::{conditional_probability, implies, proposition_probability, LogicError, Predicate, Proposition};
use crate::model::{Decomposition, DensityMatrix, HilbertSpace, ModelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parameter `{name}` out of range: {message}")]
    Parameter { name: &'static str, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("scenario has no proposition named `{0}`")]
    UnknownProposition(String),
}

/// What an expectation measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    HistoryCount,
    HistoryProbability { outcomes: Vec<String> },
    PropositionProbability { proposition: String },
    ConditionalProbability { given: String, then: String },
    /// 1 when the implication holds at the probability tolerance, else 0.
    Implies { premise: String, conclusion: String },
    MaxViolation { condition: Condition },
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Forced by the construction (orthogonality, symmetry, normalization).
    Exact,
    /// Closed-form physics result (Born rule, singlet correlations).
    ClosedForm,
    /// Property of the chosen coupling model rather than a general law.
    ModelProperty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub description: String,
    pub quantity: Quantity,
    pub value: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub description: String,
    pub expected: f64,
    pub observed: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub family: Arc<Family>,
    pub named_propositions: BTreeMap<String, Proposition>,
    pub documented_expectations: Vec<Expectation>,
}

impl Scenario {
    fn new(name: impl Into<String>, family: Family) -> Self {
        Self {
            name: name.into(),
            family: Arc::new(family),
            named_propositions: BTreeMap::new(),
            documented_expectations: Vec::new(),
        }
    }

    fn add_proposition(&mut self, name: &str, predicate: Predicate) -> Result<(), ScenarioError> {
        let p = Proposition::from_expression(&self.family, &predicate, name, usize::MAX)?;
        self.named_propositions.insert(name.to_string(), p);
        Ok(())
    }

    fn expect(&mut self, description: impl Into<String>, quantity: Quantity, value: f64, tolerance: f64, provenance: Provenance) {
        self.documented_expectations.push(Expectation {
            description: description.into(),
            quantity,
            value,
            tolerance,
            provenance,
        });
    }

    pub fn proposition(&self, name: &str) -> Result<&Proposition, ScenarioError> {
        self.named_propositions
            .get(name)
            .ok_or_else(|| ScenarioError::UnknownProposition(name.to_string()))
    }

    pub fn functional(&self, config: &EngineConfig) -> Result<DecoherenceMatrix, ScenarioError> {
        Ok(decoherence_functional(&self.family, config.max_histories)?)
    }

    pub fn evaluate(&self, d: &DecoherenceMatrix, quantity: &Quantity, config: &EngineConfig) -> Result<f64, ScenarioError> {
        Ok(match quantity {
            Quantity::HistoryCount => d.size() as f64,
            Quantity::HistoryProbability { outcomes } => {
                let labels: Vec<&str> = outcomes.iter().map(String::as_str).collect();
                let h = self.family.history_from_labels(&labels)?;
                history_probability(d, &h, config)?
            }
            Quantity::PropositionProbability { proposition } => {
                proposition_probability(d, self.proposition(proposition)?, config)?
            }
            Quantity::ConditionalProbability { given, then } => {
                conditional_probability(d, self.proposition(given)?, self.proposition(then)?, config)?
            }
            Quantity::Implies { premise, conclusion } => {
                let holds = implies(
                    d,
                    self.proposition(premise)?,
                    self.proposition(conclusion)?,
                    config.tolerances.probability_tol,
                    config,
                )?;
                if holds {
                    1.0
                } else {
                    0.0
                }
            }
            Quantity::MaxViolation { condition } => d.max_violation(*condition),
        })
    }

    /// Runs the engine on every documented expectation.
    pub fn check_expectations(&self, config: &EngineConfig) -> Result<Vec<ExpectationOutcome>, ScenarioError> {
        Ok(self.check_against(&self.functional(config)?, config))
    }

    /// Evaluates every documented expectation against a precomputed functional.
    pub fn check_against(&self, d: &DecoherenceMatrix, config: &EngineConfig) -> Vec<ExpectationOutcome> {
        self.documented_expectations
            .iter()
            .map(|e| {
                let (observed, error) = match self.evaluate(d, &e.quantity, config) {
                    Ok(v) => (Some(v), None),
                    Err(err) => (None, Some(err.to_string())),
                };
                ExpectationOutcome {
                    description: e.description.clone(),
                    expected: e.value,
                    observed,
                    tolerance: e.tolerance,
                    passed: observed.is_some_and(|v| (v - e.value).abs() <= e.tolerance),
                    error,
                }
            })
            .collect()
    }
}

fn tolerances() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn identity_steps(n: usize, dim: usize) -> Vec<PropagatorSpec> {
    (0..n).map(|_| PropagatorSpec::Unitary(ComplexMatrix::identity(dim))).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `n` independent tosses of a coin with `Pr(H) = bias`, one Hilbert factor
/// per toss and identity dynamics.
pub fn coin_toss_scenario(n: usize, bias: f64) -> Result<Scenario, ScenarioError> {
    if !(1..=10).contains(&n) {
        return Err(ScenarioError::Parameter {
            name: "n",
            message: format!("{n} is not in 1..=10"),
        });
    }
    if !(0.0..=1.0).contains(&bias) {
        return Err(ScenarioError::Parameter {
            name: "bias",
            message: format!("{bias} is not in [0, 1]"),
        });
    }
    let tol = tolerances();
    let labels: Vec<String> = (1..=n).map(|k| format!("coin{k}")).collect();
    let space = HilbertSpace::new(labels.iter().map(|l| (l.clone(), 2)))?;
    let coin = HilbertSpace::new([("coin", 2)])?;
    let one = DensityMatrix::from_matrix(&coin, ComplexMatrix::diagonal(&real_vector(&[bias, 1.0 - bias])), tol.structural_tol)?;
    let initial = DensityMatrix::product(&space, &vec![one; n], tol.structural_tol)?;
    let decompositions = labels
        .iter()
        .map(|l| Decomposition::basis(&space, l, &["H", "T"]))
        .collect::<Result<Vec<_>, _>>()?;
    let times = (1..=n).map(|t| t as f64).collect();
    let family = Family::build(initial, times, identity_steps(n, space.total_dim()), decompositions, &tol)?;

    let mut s = Scenario::new(format!("coin_toss(n={n}, bias={bias})"), family);
    for k in 0..n {
        s.add_proposition(&format!("heads{}", k + 1), Predicate::outcome(k, "H"))?;
    }
    if n >= 2 {
        let h = |k| Predicate::outcome(k, "H");
        let t = |k| Predicate::outcome(k, "T");
        s.add_proposition(
            "one_head_first_two",
            Predicate::Any(vec![Predicate::All(vec![h(0), t(1)]), Predicate::All(vec![t(0), h(1)])]),
        )?;
    }
    s.named_propositions
        .insert("all".into(), Proposition::universe(&s.family, "all", usize::MAX)?);

    s.expect("2^n elementary histories", Quantity::HistoryCount, (1u64 << n) as f64, 0.0, Provenance::Exact);
    s.expect(
        "classical embedding is consistent",
        Quantity::MaxViolation { condition: Condition::Medium },
        0.0,
        1e-12,
        Provenance::Exact,
    );
    if n <= 4 {
        for flat in 0..1usize << n {
            let outcomes: Vec<String> = (0..n)
                .map(|k| if (flat >> (n - 1 - k)) & 1 == 0 { "H" } else { "T" }.to_string())
                .collect();
            let heads = outcomes.iter().filter(|o| *o == "H").count() as i32;
            let p = bias.powi(heads) * (1.0 - bias).powi(n as i32 - heads);
            s.expect(
                format!("Pr({})", outcomes.concat()),
                Quantity::HistoryProbability { outcomes },
                p,
                1e-12,
                Provenance::ClosedForm,
            );
        }
    }
    if n >= 2 {
        s.expect(
            "Pr(exactly one H among tosses 1-2)",
            Quantity::PropositionProbability {
                proposition: "one_head_first_two".into(),
            },
            binomial(2, 1) * bias * (1.0 - bias),
            1e-12,
            Provenance::ClosedForm,
        );
    }
    Ok(s)
}

/// Spin ⊗ pointer ⊗ `n_env` environment qubits, with the pointer recording
/// the spin and each environment qubit then coupled to the pointer.
struct MeasurementSetup {
    space: HilbertSpace,
    initial: DensityMatrix,
    record: ComplexMatrix,
}

fn measurement_setup(theta: f64, n_env: usize, coupling: f64) -> Result<MeasurementSetup, ScenarioError> {
    let mut factors = vec![("spin".to_string(), 2), ("pointer".to_string(), 2)];
    factors.extend((1..=n_env).map(|k| (format!("env{k}"), 2)));
    let space = HilbertSpace::new(factors)?;

    // (cos θ |↑> + sin θ |↓>) ⊗ |ready> ⊗ |0…0>
    let mut amplitudes = vec![ZERO; space.total_dim()];
    let mut digits = vec![0; n_env + 2];
    amplitudes[0] = Complex64::new(theta.cos(), 0.0);
    digits[0] = 1;
    let down = space.basis_ket(&digits)?;
    let k = down.iter().position(|z| *z != ZERO).expect("basis ket");
    amplitudes[k] = Complex64::new(theta.sin(), 0.0);
    let initial = DensityMatrix::pure_state(&space, &amplitudes)?;

    // |↑,ready> -> |↑,up>, |↓,ready> -> |↓,down>: CNOT with ready = up = |0>.
    let mut record = space.lift_operator_on(&["spin", "pointer"], &gates::controlled_not())?;
    let rotation = gates::controlled_rotation(coupling);
    for k in 1..=n_env {
        let env = format!("env{k}");
        let gate = space.lift_operator_on(&["pointer", env.as_str()], &rotation)?;
        record = &gate * &record;
    }
    Ok(MeasurementSetup {
        space,
        initial,
        record,
    })
}

fn mqs_decomposition(space: &HilbertSpace) -> Result<Decomposition, ScenarioError> {
    let s = FRAC_1_SQRT_2;
    // basis order |spin, pointer>: |↑up>, |↑down>, |↓up>, |↓down>
    let v = |x: [f64; 4]| vec![real_vector(&x.map(|a| a * s))];
    Ok(Decomposition::local(
        space,
        &["spin", "pointer"],
        &[
            ("mqs+", v([1.0, 0.0, 0.0, 1.0])),
            ("mqs-", v([1.0, 0.0, 0.0, -1.0])),
            ("mqs_flip+", v([0.0, 1.0, 1.0, 0.0])),
            ("mqs_flip-", v([0.0, 1.0, -1.0, 0.0])),
        ],
        tolerances().structural_tol,
    )?)
}

fn measurement_family(setup: MeasurementSetup, final_decomposition: Decomposition) -> Result<Family, ScenarioError> {
    let d = setup.space.total_dim();
    let spin = Decomposition::basis(&setup.space, "spin", &["+z", "-z"])?;
    Ok(Family::build(
        setup.initial,
        vec![1.0, 2.0],
        vec![ComplexMatrix::identity(d).into(), setup.record.into()],
        vec![spin, final_decomposition],
        &tolerances(),
    )?)
}

/// A spin component measured by a two-state pointer: spin basis at t1,
/// pointer basis at t2.
pub fn measurement_chain_scenario(theta: f64) -> Result<Scenario, ScenarioError> {
    let setup = measurement_setup(theta, 0, 0.0)?;
    let pointer = Decomposition::basis(&setup.space, "pointer", &["up", "down"])?;
    let family = measurement_family(setup, pointer)?;
    let mut s = Scenario::new(format!("measurement_chain(theta={theta})"), family);
    s.add_proposition("spin+z@t1", Predicate::outcome(0, "+z"))?;
    s.add_proposition("spin-z@t1", Predicate::outcome(0, "-z"))?;
    s.add_proposition("pointer_up@t2", Predicate::outcome(1, "up"))?;
    s.add_proposition("pointer_down@t2", Predicate::outcome(1, "down"))?;

    let p_up = theta.cos().powi(2);
    s.expect(
        "family is medium-consistent",
        Quantity::MaxViolation { condition: Condition::Medium },
        0.0,
        1e-12,
        Provenance::Exact,
    );
    s.expect(
        "Pr(pointer up) = cos^2 theta",
        Quantity::PropositionProbability {
            proposition: "pointer_up@t2".into(),
        },
        p_up,
        1e-10,
        Provenance::ClosedForm,
    );
    if p_up > 1e-9 {
        s.expect(
            "Pr(spin +z at t1 | pointer up at t2) = 1",
            Quantity::ConditionalProbability {
                given: "pointer_up@t2".into(),
                then: "spin+z@t1".into(),
            },
            1.0,
            1e-10,
            Provenance::ClosedForm,
        );
        s.expect(
            "pointer up at t2 implies spin +z at t1",
            Quantity::Implies {
                premise: "pointer_up@t2".into(),
                conclusion: "spin+z@t1".into(),
            },
            1.0,
            0.0,
            Provenance::ClosedForm,
        );
    }
    Ok(s)
}

/// Same dynamics as the measurement chain, but asking at t2 about the
/// macroscopic superpositions of spin and pointer.
pub fn mqs_scenario(theta: f64) -> Result<Scenario, ScenarioError> {
    mqs_with_environment(theta, 0, 0.0)
}

/// The MQS family after `n_env` environment qubits have each been coupled to
/// the pointer by a controlled rotation of `coupling`.
pub fn mqs_with_environment(theta: f64, n_env: usize, coupling: f64) -> Result<Scenario, ScenarioError> {
    if n_env > 10 {
        return Err(ScenarioError::Parameter {
            name: "n_env",
            message: format!("{n_env} is not in 0..=10"),
        });
    }
    let setup = measurement_setup(theta, n_env, coupling)?;
    let mqs = mqs_decomposition(&setup.space)?;
    let family = measurement_family(setup, mqs)?;
    let name = if n_env == 0 {
        format!("mqs(theta={theta})")
    } else {
        format!("mqs(theta={theta}, n_env={n_env}, coupling={coupling})")
    };
    let mut s = Scenario::new(name, family);
    s.add_proposition("spin+z@t1", Predicate::outcome(0, "+z"))?;
    s.add_proposition("spin-z@t1", Predicate::outcome(0, "-z"))?;
    for label in ["mqs+", "mqs-", "mqs_flip+", "mqs_flip-"] {
        s.add_proposition(&format!("{label}@t2"), Predicate::outcome(1, label))?;
    }

    // Branch weights cos²θ/2 and sin²θ/2 at each MQS+/- outcome; their
    // interference term is cos θ sin θ / 2 times the environment overlap.
    let (a, b) = (theta.cos().powi(2) / 2.0, theta.sin().powi(2) / 2.0);
    let overlap = coupling.cos().powi(n_env as i32);
    let expected = if a > 1e-9 && b > 1e-9 {
        Some(overlap.abs())
    } else if a == 0.0 || b == 0.0 {
        Some(0.0)
    } else {
        None
    };
    if let Some(v) = expected {
        s.expect(
            "normalized medium violation = |environment overlap|",
            Quantity::MaxViolation { condition: Condition::Medium },
            v,
            1e-9,
            if n_env == 0 { Provenance::ClosedForm } else { Provenance::ModelProperty },
        );
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EprOrder {
    AFirst,
    BFirst,
    ANotMeasured,
}

impl EprOrder {
    pub const ALL: [EprOrder; 3] = [EprOrder::AFirst, EprOrder::BFirst, EprOrder::ANotMeasured];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
}

impl Axis {
    pub const ALL: [Axis; 2] = [Axis::Z, Axis::X];

    fn labels(self) -> [&'static str; 2] {
        match self {
            Axis::Z => ["+z", "-z"],
            Axis::X => ["+x", "-x"],
        }
    }
}

impl fmt::Display for EprOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            EprOrder::AFirst => "a_first",
            EprOrder::BFirst => "b_first",
            EprOrder::ANotMeasured => "a_not_measured",
        })
    }
}

impl FromStr for EprOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "a_first" => Ok(EprOrder::AFirst),
            "b_first" => Ok(EprOrder::BFirst),
            "a_not_measured" => Ok(EprOrder::ANotMeasured),
            other => Err(format!("unknown order `{other}` (a_first, b_first, a_not_measured)")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Axis::Z => "z",
            Axis::X => "x",
        })
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "z" => Ok(Axis::Z),
            "x" => Ok(Axis::X),
            other => Err(format!("unknown axis `{other}` (z or x)")),
        }
    }
}

/// Bohm's spin-singlet EPR setup. B's local basis is decided at t1; A's
/// apparatus records A's spin along `a_axis` either before t1 (`AFirst`),
/// between t1 and t2 (`BFirst`), or not at all. The apparatus is read at t2.
pub fn epr_scenario(order: EprOrder, a_axis: Axis, b_axis: Axis) -> Result<Scenario, ScenarioError> {
    let tol = tolerances();
    let measured = order != EprOrder::ANotMeasured;
    let mut factors = vec![("qubitA", 2), ("qubitB", 2)];
    if measured {
        factors.push(("apparatusA", 2));
    }
    let space = HilbertSpace::new(factors)?;
    let d = space.total_dim();

    // (|↑↓> - |↓↑>)/√2 ⊗ |ready>
    let ready = if measured { vec![0] } else { vec![] };
    let ket = |a: usize, b: usize| space.basis_ket(&[vec![a, b], ready.clone()].concat());
    let (ud, du) = (ket(0, 1)?, ket(1, 0)?);
    let singlet: Vec<Complex64> = ud.iter().zip(&du).map(|(x, y)| (x - y) * FRAC_1_SQRT_2).collect();
    let initial = DensityMatrix::pure_state(&space, &singlet)?;

    let s = FRAC_1_SQRT_2;
    let b_decomposition = match b_axis {
        Axis::Z => Decomposition::basis(&space, "qubitB", &["+z", "-z"])?,
        Axis::X => Decomposition::local(
            &space,
            &["qubitB"],
            &[("+x", vec![real_vector(&[s, s])]), ("-x", vec![real_vector(&[s, -s])])],
            tol.structural_tol,
        )?,
    };

    let identity = || PropagatorSpec::Unitary(ComplexMatrix::identity(d));
    let family = if measured {
        let cnot = space.lift_operator_on(&["qubitA", "apparatusA"], &gates::controlled_not())?;
        let measure_a = match a_axis {
            Axis::Z => cnot,
            Axis::X => {
                let h = space.lift_operator("qubitA", &gates::hadamard())?;
                &(&h * &cnot) * &h
            }
        };
        let apparatus = Decomposition::basis(&space, "apparatusA", &["up", "down"])?;
        let propagators = match order {
            EprOrder::AFirst => vec![measure_a.into(), identity()],
            _ => vec![identity(), measure_a.into()],
        };
        Family::build(initial, vec![1.0, 2.0], propagators, vec![b_decomposition, apparatus], &tol)?
    } else {
        Family::build(
            initial,
            vec![1.0, 2.0],
            vec![identity(), identity()],
            vec![b_decomposition, Decomposition::trivial(&space, "any")],
            &tol,
        )?
    };

    let mut sc = Scenario::new(format!("epr(order={order}, a_axis={a_axis}, b_axis={b_axis})"), family);
    let [b_plus, b_minus] = b_axis.labels();
    sc.add_proposition("b_plus", Predicate::outcome(0, b_plus))?;
    sc.add_proposition("b_minus", Predicate::outcome(0, b_minus))?;
    sc.expect(
        "family is medium-consistent",
        Quantity::MaxViolation { condition: Condition::Medium },
        0.0,
        1e-12,
        Provenance::Exact,
    );
    sc.expect(
        format!("Pr(B = {b_plus}) = 1/2 regardless of A"),
        Quantity::PropositionProbability {
            proposition: "b_plus".into(),
        },
        0.5,
        1e-12,
        Provenance::ClosedForm,
    );
    if measured {
        sc.add_proposition("a_up", Predicate::outcome(1, "up"))?;
        sc.add_proposition("a_down", Predicate::outcome(1, "down"))?;
        let value = if a_axis == b_axis { 1.0 } else { 0.5 };
        sc.expect(
            format!("Pr(B = {b_minus} | A apparatus up)"),
            Quantity::ConditionalProbability {
                given: "a_up".into(),
                then: "b_minus".into(),
            },
            value,
            1e-10,
            Provenance::ClosedForm,
        );
    }
    Ok(sc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n_env: usize,
    pub max_violation: f64,
}

/// Normalized medium violation of the MQS family at θ = π/4 for
/// 0..=`n_env_max` environment qubits.
pub fn decoherence_sweep(n_env_max: usize, coupling_angle: f64) -> Result<Vec<SweepPoint>, ScenarioError> {
    decoherence_sweep_at(FRAC_PI_4, n_env_max, coupling_angle)
}

pub fn decoherence_sweep_at(theta: f64, n_env_max: usize, coupling_angle: f64) -> Result<Vec<SweepPoint>, ScenarioError> {
    if n_env_max > 10 {
        return Err(ScenarioError::Parameter {
            name: "n_env_max",
            message: format!("{n_env_max} is not in 0..=10"),
        });
    }
    let config = EngineConfig::default();
    (0..=n_env_max)
        .into_par_iter()
        .map(|n_env| {
            let s = mqs_with_environment(theta, n_env, coupling_angle)?;
            let d = s.functional(&config)?;
            Ok(SweepPoint {
                n_env,
                max_violation: d.max_violation(Condition::Medium),
            })
        })
        .collect()
}

/// Names and parameters of the built-in scenarios.
pub const CATALOG: &[(&str, &str)] = &[
    ("coin_toss", "n=3 bias=0.5"),
    ("measurement_chain", "theta=0.7853981633974483"),
    ("mqs", "theta=0.7853981633974483 n_env=0 coupling=0"),
    ("epr", "order=a_first a_axis=z b_axis=z"),
    ("decoherence_sweep", "n_env_max=8 coupling=0.7853981633974483 theta=0.7853981633974483"),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(s: &Scenario) {
        let outcomes = s.check_expectations(&EngineConfig::default()).unwrap();
        for o in &outcomes {
            assert!(o.passed, "{}: {o:?}", s.name);
        }
    }

    #[test]
    fn coin_three_fair() {
        let s = coin_toss_scenario(3, 0.5).unwrap();
        assert_eq!(s.family.history_count(), Some(8));
        all_pass(&s);
    }

    #[test]
    fn coin_certain_heads() {
        let s = coin_toss_scenario(1, 1.0).unwrap();
        let d = s.functional(&EngineConfig::default()).unwrap();
        let h = s.family.history_from_labels(&["H"]).unwrap();
        assert_eq!(history_probability(&d, &h, &EngineConfig::default()).unwrap(), 1.0);
        all_pass(&s);
    }

    #[test]
    fn coin_parameter_errors() {
        assert!(matches!(coin_toss_scenario(0, 0.5), Err(ScenarioError::Parameter { name: "n", .. })));
        assert!(matches!(coin_toss_scenario(11, 0.5), Err(ScenarioError::Parameter { name: "n", .. })));
        assert!(matches!(coin_toss_scenario(3, 1.5), Err(ScenarioError::Parameter { name: "bias", .. })));
    }

    #[test]
    fn measurement_chain_expectations() {
        for theta in [0.0, 0.3, FRAC_PI_4, 1.0, std::f64::consts::FRAC_PI_2] {
            all_pass(&measurement_chain_scenario(theta).unwrap());
        }
    }

    #[test]
    fn mqs_expectations() {
        for theta in [0.0, 0.4, FRAC_PI_4] {
            all_pass(&mqs_scenario(theta).unwrap());
        }
        let d = mqs_scenario(FRAC_PI_4).unwrap().functional(&EngineConfig::default()).unwrap();
        assert!((d.max_violation(Condition::Medium) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn epr_expectations() {
        for order in EprOrder::ALL {
            for a in Axis::ALL {
                for b in Axis::ALL {
                    all_pass(&epr_scenario(order, a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn sweep_with_perfect_records() {
        let points = decoherence_sweep(3, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((points[0].max_violation - 1.0).abs() < 1e-9);
        assert!(points[1..].iter().all(|p| p.max_violation < 1e-10));
    }

    #[test]
    fn parse_parameters() {
        assert_eq!("b_first".parse::<EprOrder>(), Ok(EprOrder::BFirst));
        assert_eq!("x".parse::<Axis>(), Ok(Axis::X));
        assert!("y".parse::<Axis>().is_err());
    }
}
