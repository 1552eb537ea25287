use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CliError, ErrorCategory};
use crate::histories::{EngineError, Family, PropagatorSpec};
use crate::linalg::{gates, hermitian_exponential, ComplexMatrix, LinalgError, ToleranceConfig};
use crate::logic::Predicate;
use crate::model::{Decomposition, DensityMatrix, HilbertSpace, ModelError, Property};

/// A complex number written as `[re, im]`.
pub type Amplitude = [f64; 2];

/// Scenario file as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub space: Vec<FactorSpec>,
    pub initial: InitialSpec,
    pub times: Vec<f64>,
    pub propagators: Vec<PropagatorEntry>,
    pub decompositions: Vec<DecompositionEntry>,
    #[serde(default)]
    pub propositions: BTreeMap<String, PredicateSpec>,
    #[serde(default)]
    pub queries: Vec<QuerySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    MaximallyMixed,
    /// Amplitudes in the product basis, first factor most significant.
    Ket(Vec<Amplitude>),
    /// Row-major density matrix.
    Density(Vec<Amplitude>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorEntry {
    /// Row-major unitary on the full space.
    Matrix(Vec<Amplitude>),
    Gate(GateSpec),
    Hamiltonian(HamiltonianSpec),
    /// Product of the listed steps, first entry applied first.
    Sequence(Vec<PropagatorEntry>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub matrix: Vec<Amplitude>,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionEntry {
    FactorBasis(FactorBasisSpec),
    Projectors(Vec<ProjectorSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorBasisSpec {
    pub factor: String,
    pub labels: Vec<String>,
}

/// One member, given either as a full projector or as spanning vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectorSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<Amplitude>>>,
}

/// Exactly one of the leaf pair (`time_index`, `outcome_label`), `all`,
/// `any` or `not` must be present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all: Option<Vec<PredicateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub any: Option<Vec<PredicateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not: Option<Box<PredicateSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub premise: String,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuerySpec {
    Consistency {
        /// Report at most this many violating pairs.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_pairs: Option<usize>,
    },
    Probability {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        history: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        proposition: Option<String>,
        /// Skip the consistency gate.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        unchecked: bool,
    },
    Conditional {
        given: String,
        then: String,
    },
    Implication {
        premise: String,
        conclusion: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Rule4Chain {
        steps: Vec<StepSpec>,
    },
    /// Compares the file's family with the same setup under other
    /// decompositions.
    Compatibility {
        decompositions: Vec<DecompositionEntry>,
    },
}

/// A parsed and fully validated scenario file.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub file: ScenarioFile,
    pub family: Arc<Family>,
    pub predicates: BTreeMap<String, Predicate>,
    /// Families named by compatibility queries, keyed by query index.
    pub alternatives: BTreeMap<usize, Arc<Family>>,
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::new(ErrorCategory::Schema, message).at(location)
}

fn linalg_category(e: &LinalgError) -> ErrorCategory {
    match e {
        LinalgError::NonFinite { .. } | LinalgError::NotHermitian { .. } => ErrorCategory::Validation,
        LinalgError::TooLarge { .. } => ErrorCategory::Resource,
        _ => ErrorCategory::Schema,
    }
}

fn model_category(e: &ModelError) -> ErrorCategory {
    match e {
        ModelError::Linalg(l) => linalg_category(l),
        ModelError::NoFactors
        | ModelError::ZeroDimension(..)
        | ModelError::DuplicateFactor(..)
        | ModelError::UnknownFactor(..)
        | ModelError::VectorLength { .. }
        | ModelError::LabelCount { .. }
        | ModelError::DuplicateOutcome(..)
        | ModelError::SpaceMismatch(..) => ErrorCategory::Schema,
        _ => ErrorCategory::Validation,
    }
}

pub(crate) fn engine_category(e: &EngineError) -> ErrorCategory {
    match e {
        EngineError::Linalg(l) => linalg_category(l),
        EngineError::Model(m) => model_category(m),
        EngineError::Propagator { source, .. } => linalg_category(source),
        EngineError::TooManyHistories { .. } => ErrorCategory::Resource,
        EngineError::Inconsistent { .. } => ErrorCategory::Refusal,
        EngineError::CountMismatch { .. } | EngineError::ForeignHistory | EngineError::UnknownOutcome(_) => {
            ErrorCategory::Schema
        }
        _ => ErrorCategory::Validation,
    }
}

fn model_err(location: impl Into<String>) -> impl FnOnce(ModelError) -> CliError {
    let location = location.into();
    move |e| CliError::new(model_category(&e), e.to_string()).at(location)
}

fn linalg_err(location: impl Into<String>) -> impl FnOnce(LinalgError) -> CliError {
    let location = location.into();
    move |e| CliError::new(linalg_category(&e), e.to_string()).at(location)
}

fn engine_location(e: &EngineError) -> String {
    match e {
        EngineError::NoTimes => "times".into(),
        EngineError::NonMonotonicTimes { index, .. } => format!("times[{index}]"),
        EngineError::CountMismatch { .. } => "propagators".into(),
        EngineError::NonUnitary { index, .. } | EngineError::Propagator { index, .. } => {
            format!("propagators[{index}]")
        }
        EngineError::SpaceMismatch { component, index } => format!("{component}[{index}]"),
        _ => String::new(),
    }
}

fn amplitudes(entries: &[Amplitude]) -> Vec<num_complex::Complex64> {
    entries.iter().map(|[re, im]| num_complex::Complex64::new(*re, *im)).collect()
}

fn square_matrix(entries: &[Amplitude], dim: usize, location: &str) -> Result<ComplexMatrix, CliError> {
    if entries.len() != dim * dim {
        return Err(schema(
            location,
            format!("expected {} row-major entries for a {dim}x{dim} matrix, got {}", dim * dim, entries.len()),
        ));
    }
    ComplexMatrix::from_vec(dim, dim, amplitudes(entries)).map_err(linalg_err(location))
}

fn gate_matrix(gate: &GateSpec, space: &HilbertSpace, location: &str) -> Result<ComplexMatrix, CliError> {
    let targets: Vec<&str> = match (&gate.target, &gate.targets) {
        (Some(t), None) => vec![t.as_str()],
        (None, Some(ts)) => ts.iter().map(String::as_str).collect(),
        (None, None) => Vec::new(),
        (Some(_), Some(_)) => return Err(schema(location, "give either `target` or `targets`, not both")),
    };
    let takes_angle = gate.name == "controlled_rotation";
    if takes_angle != gate.angle.is_some() {
        let message = if takes_angle {
            "gate `controlled_rotation` needs an `angle`".to_string()
        } else {
            format!("gate `{}` takes no `angle`", gate.name)
        };
        return Err(schema(location, message));
    }
    let (local, arity) = match gate.name.as_str() {
        "identity" if targets.is_empty() => return Ok(ComplexMatrix::identity(space.total_dim())),
        "identity" => {
            let dim = targets
                .iter()
                .map(|t| space.factor_dim(t))
                .product::<Result<usize, _>>()
                .map_err(model_err(location))?;
            (ComplexMatrix::identity(dim), targets.len())
        }
        "hadamard" => (gates::hadamard(), 1),
        "pauli_x" => (gates::pauli_x(), 1),
        "pauli_y" => (gates::pauli_y(), 1),
        "pauli_z" => (gates::pauli_z(), 1),
        "controlled_not" => (gates::controlled_not(), 2),
        "controlled_rotation" => (gates::controlled_rotation(gate.angle.unwrap_or_default()), 2),
        other => {
            return Err(schema(
                format!("{location}.name"),
                format!(
                    "unknown gate `{other}` (identity, hadamard, pauli_x, pauli_y, pauli_z, controlled_not, \
                     controlled_rotation)"
                ),
            ))
        }
    };
    if targets.len() != arity {
        return Err(schema(
            location,
            format!("gate `{}` acts on {arity} factor(s), got {}", gate.name, targets.len()),
        ));
    }
    space.lift_operator_on(&targets, &local).map_err(model_err(location))
}

fn propagator(
    entry: &PropagatorEntry,
    space: &HilbertSpace,
    tol: &ToleranceConfig,
    location: &str,
) -> Result<PropagatorSpec, CliError> {
    let dim = space.total_dim();
    Ok(match entry {
        PropagatorEntry::Matrix(m) => PropagatorSpec::Unitary(square_matrix(m, dim, &format!("{location}.matrix"))?),
        PropagatorEntry::Gate(g) => PropagatorSpec::Unitary(gate_matrix(g, space, &format!("{location}.gate"))?),
        PropagatorEntry::Hamiltonian(h) => PropagatorSpec::Generator {
            hamiltonian: square_matrix(&h.matrix, dim, &format!("{location}.hamiltonian.matrix"))?,
            duration: h.duration,
        },
        PropagatorEntry::Sequence(steps) => {
            let mut total = ComplexMatrix::identity(dim);
            for (i, step) in steps.iter().enumerate() {
                let at = format!("{location}.sequence[{i}]");
                let u = match propagator(step, space, tol, &at)? {
                    PropagatorSpec::Unitary(u) => u,
                    PropagatorSpec::Generator { hamiltonian, duration } => {
                        hermitian_exponential(&hamiltonian, duration, tol.structural_tol).map_err(linalg_err(&at))?
                    }
                };
                total = &u * &total;
            }
            PropagatorSpec::Unitary(total)
        }
    })
}

fn decomposition(
    entry: &DecompositionEntry,
    space: &HilbertSpace,
    tol: &ToleranceConfig,
    location: &str,
) -> Result<Decomposition, CliError> {
    match entry {
        DecompositionEntry::FactorBasis(fb) => {
            let labels: Vec<&str> = fb.labels.iter().map(String::as_str).collect();
            Decomposition::basis(space, &fb.factor, &labels).map_err(model_err(format!("{location}.factor_basis")))
        }
        DecompositionEntry::Projectors(members) => {
            let dim = space.total_dim();
            let props = members
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let at = format!("{location}.projectors[{i}]");
                    match (&p.matrix, &p.vectors) {
                        (Some(m), None) => {
                            let m = square_matrix(m, dim, &format!("{at}.matrix"))?;
                            Property::from_matrix(space, m, p.label.clone(), tol.structural_tol).map_err(model_err(at))
                        }
                        (None, Some(vs)) => {
                            let vectors: Vec<_> = vs.iter().map(|v| amplitudes(v)).collect();
                            Property::from_vectors(space, &vectors, p.label.clone(), tol.structural_tol)
                                .map_err(model_err(at))
                        }
                        _ => Err(schema(at, "give exactly one of `matrix` or `vectors`")),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Decomposition::new(space, props, tol.structural_tol).map_err(model_err(location))
        }
    }
}

fn predicate(spec: &PredicateSpec, location: &str) -> Result<Predicate, CliError> {
    let forms = [
        spec.time_index.is_some() || spec.outcome_label.is_some(),
        spec.all.is_some(),
        spec.any.is_some(),
        spec.not.is_some(),
    ];
    if forms.iter().filter(|f| **f).count() != 1 {
        return Err(schema(
            location,
            "a predicate is exactly one of {time_index, outcome_label}, {all}, {any} or {not}",
        ));
    }
    let list = |ps: &[PredicateSpec], key: &str| {
        ps.iter()
            .enumerate()
            .map(|(i, p)| predicate(p, &format!("{location}.{key}[{i}]")))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(match spec {
        PredicateSpec {
            time_index: Some(t),
            outcome_label: Some(l),
            ..
        } => Predicate::outcome(*t, l.clone()),
        PredicateSpec { all: Some(ps), .. } => Predicate::All(list(ps, "all")?),
        PredicateSpec { any: Some(ps), .. } => Predicate::Any(list(ps, "any")?),
        PredicateSpec { not: Some(p), .. } => Predicate::Not(Box::new(predicate(p, &format!("{location}.not"))?)),
        _ => return Err(schema(location, "a leaf predicate needs both `time_index` and `outcome_label`")),
    })
}

fn build_family(file: &ScenarioFile, tol: &ToleranceConfig) -> Result<Family, CliError> {
    let space = HilbertSpace::new(file.space.iter().map(|f| (f.label.clone(), f.dim))).map_err(model_err("space"))?;
    let dim = space.total_dim();
    let initial = match &file.initial {
        InitialSpec::MaximallyMixed => DensityMatrix::maximally_mixed(&space),
        InitialSpec::Ket(amps) => DensityMatrix::pure_state(&space, &amplitudes(amps)).map_err(model_err("initial.ket"))?,
        InitialSpec::Density(entries) => {
            let m = square_matrix(entries, dim, "initial.density")?;
            DensityMatrix::from_matrix(&space, m, tol.structural_tol).map_err(model_err("initial.density"))?
        }
    };
    let propagators = file
        .propagators
        .iter()
        .enumerate()
        .map(|(i, p)| propagator(p, &space, tol, &format!("propagators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let decompositions = file
        .decompositions
        .iter()
        .enumerate()
        .map(|(i, d)| decomposition(d, &space, tol, &format!("decompositions[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Family::build(initial, file.times.clone(), propagators, decompositions, tol)
        .map_err(|e| CliError::new(engine_category(&e), e.to_string()).at(engine_location(&e)))
}

fn check_name(predicates: &BTreeMap<String, Predicate>, name: &str, location: String) -> Result<(), CliError> {
    if predicates.contains_key(name) {
        Ok(())
    } else {
        Err(schema(location, format!("unknown proposition `{name}`")))
    }
}

fn validate_queries(
    file: &ScenarioFile,
    family: &Arc<Family>,
    predicates: &BTreeMap<String, Predicate>,
    tol: &ToleranceConfig,
) -> Result<BTreeMap<usize, Arc<Family>>, CliError> {
    let mut alternatives = BTreeMap::new();
    for (i, q) in file.queries.iter().enumerate() {
        let at = |field: &str| format!("queries[{i}].{field}");
        match q {
            QuerySpec::Consistency { .. } => {}
            QuerySpec::Probability {
                history, proposition, ..
            } => match (history, proposition) {
                (Some(h), None) => {
                    let labels: Vec<&str> = h.iter().map(String::as_str).collect();
                    family
                        .history_from_labels(&labels)
                        .map_err(|e| schema(at("history"), e.to_string()))?;
                }
                (None, Some(p)) => check_name(predicates, p, at("proposition"))?,
                _ => return Err(schema(format!("queries[{i}]"), "give exactly one of `history` or `proposition`")),
            },
            QuerySpec::Conditional { given, then } => {
                check_name(predicates, given, at("given"))?;
                check_name(predicates, then, at("then"))?;
            }
            QuerySpec::Implication {
                premise,
                conclusion,
                tol,
            } => {
                check_name(predicates, premise, at("premise"))?;
                check_name(predicates, conclusion, at("conclusion"))?;
                if tol.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
                    return Err(schema(at("tol"), "tolerance must be finite and non-negative"));
                }
            }
            QuerySpec::Rule4Chain { steps } => {
                for (k, s) in steps.iter().enumerate() {
                    check_name(predicates, &s.premise, at(&format!("steps[{k}].premise")))?;
                    check_name(predicates, &s.conclusion, at(&format!("steps[{k}].conclusion")))?;
                }
            }
            QuerySpec::Compatibility { decompositions } => {
                let decs = decompositions
                    .iter()
                    .enumerate()
                    .map(|(k, d)| decomposition(d, family.space(), tol, &at(&format!("decompositions[{k}]"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let other = family
                    .with_decompositions(decs)
                    .map_err(|e| CliError::new(engine_category(&e), e.to_string()).at(at("decompositions")))?;
                alternatives.insert(i, Arc::new(other));
            }
        }
    }
    Ok(alternatives)
}

/// Parses and validates a scenario file. Syntax errors carry line and
/// column; schema and validation errors carry the path of the offending
/// field.
pub fn parse_scenario_file(bytes: &[u8]) -> Result<ScenarioSpec, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::new(ErrorCategory::Parse, format!("scenario file is not UTF-8: {e}")))?;
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let category = match inner.classify() {
            serde_json::error::Category::Data => ErrorCategory::Schema,
            _ => ErrorCategory::Parse,
        };
        CliError::new(category, inner.to_string()).at(if path == "." { String::new() } else { path })
    })?;
    de.end()
        .map_err(|e| CliError::new(ErrorCategory::Parse, e.to_string()))?;

    let tol = ToleranceConfig::default();
    let family = Arc::new(build_family(&file, &tol)?);
    let predicates = file
        .propositions
        .iter()
        .map(|(name, spec)| {
            let at = format!("propositions.{name}");
            let p = predicate(spec, &at)?;
            p.validate(&family).map_err(|e| schema(&at, e.to_string()))?;
            Ok((name.clone(), p))
        })
        .collect::<Result<BTreeMap<_, _>, CliError>>()?;
    let alternatives = validate_queries(&file, &family, &predicates, &tol)?;
    Ok(ScenarioSpec {
        file,
        family,
        predicates,
        alternatives,
    })
}
