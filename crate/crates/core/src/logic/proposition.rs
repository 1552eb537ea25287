use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LogicError;
use crate::histories::{DecoherenceMatrix, EngineConfig, EngineError, Family};

/// A predicate over the outcome labels of a history, one label per time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Predicate {
    /// The outcome at `time_index` carries `outcome_label`.
    Outcome { time_index: usize, outcome_label: String },
    All(Vec<Predicate>),
    Any(Vec<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn outcome(time_index: usize, outcome_label: impl Into<String>) -> Self {
        Predicate::Outcome {
            time_index,
            outcome_label: outcome_label.into(),
        }
    }

    pub fn evaluate(&self, labels: &[&str]) -> bool {
        match self {
            Predicate::Outcome {
                time_index,
                outcome_label,
            } => labels.get(*time_index) == Some(&outcome_label.as_str()),
            Predicate::All(ps) => ps.iter().all(|p| p.evaluate(labels)),
            Predicate::Any(ps) => ps.iter().any(|p| p.evaluate(labels)),
            Predicate::Not(p) => !p.evaluate(labels),
        }
    }

    /// Checks every leaf against the family's times and outcome labels.
    pub fn validate(&self, family: &Family) -> Result<(), EngineError> {
        match self {
            Predicate::Outcome {
                time_index,
                outcome_label,
            } => {
                let dec = family.decompositions().get(*time_index).ok_or(EngineError::ForeignHistory)?;
                dec.outcome_index(outcome_label)
                    .map(|_| ())
                    .ok_or_else(|| EngineError::UnknownOutcome(outcome_label.clone()))
            }
            Predicate::All(ps) | Predicate::Any(ps) => ps.iter().try_for_each(|p| p.validate(family)),
            Predicate::Not(p) => p.validate(family),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

/// A set of elementary histories of one family.
#[derive(Debug, Clone)]
pub struct Proposition {
    family: Arc<Family>,
    members: BTreeSet<usize>,
    name: String,
}

impl PartialEq for Proposition {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_family(&self.family, &other.family)
    }
}

pub(crate) fn same_family(a: &Arc<Family>, b: &Arc<Family>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Proposition {
    /// The histories whose outcome labels satisfy `predicate`.
    pub fn from_predicate(
        family: &Arc<Family>,
        predicate: impl Fn(&[&str]) -> bool,
        name: impl Into<String>,
        max_histories: usize,
    ) -> Result<Self, EngineError> {
        let members = family
            .enumerate_histories(max_histories)?
            .iter()
            .filter(|h| predicate(&family.labels_of(h)))
            .map(|h| h.flat_index())
            .collect();
        Ok(Self {
            family: Arc::clone(family),
            members,
            name: name.into(),
        })
    }

    pub fn from_expression(
        family: &Arc<Family>,
        predicate: &Predicate,
        name: impl Into<String>,
        max_histories: usize,
    ) -> Result<Self, EngineError> {
        predicate.validate(family)?;
        Self::from_predicate(family, |labels| predicate.evaluate(labels), name, max_histories)
    }

    pub fn from_indices(
        family: &Arc<Family>,
        indices: impl IntoIterator<Item = usize>,
        name: impl Into<String>,
    ) -> Result<Self, EngineError> {
        let size = family.history_count().ok_or(EngineError::TooManyHistories { count: None, cap: usize::MAX })?;
        let members: BTreeSet<usize> = indices.into_iter().collect();
        if members.iter().any(|&i| i >= size) {
            return Err(EngineError::ForeignHistory);
        }
        Ok(Self {
            family: Arc::clone(family),
            members,
            name: name.into(),
        })
    }

    /// All elementary histories.
    pub fn universe(family: &Arc<Family>, name: impl Into<String>, max_histories: usize) -> Result<Self, EngineError> {
        Self::from_predicate(family, |_| true, name, max_histories)
    }

    pub fn family(&self) -> &Arc<Family> {
        &self.family
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Proposition) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn shares_family(&self, other: &Proposition) -> bool {
        same_family(&self.family, &other.family)
    }

    pub fn combine(&self, other: &Proposition, connective: Connective) -> Result<Proposition, LogicError> {
        if !self.shares_family(other) {
            return Err(LogicError::CrossFamily {
                first: self.name.clone(),
                second: other.name.clone(),
            });
        }
        let (members, op) = match connective {
            Connective::And => (&self.members & &other.members, "and"),
            Connective::Or => (&self.members | &other.members, "or"),
        };
        Ok(Proposition {
            family: Arc::clone(&self.family),
            members,
            name: format!("({} {op} {})", self.name, other.name),
        })
    }

    pub fn and(&self, other: &Proposition) -> Result<Proposition, LogicError> {
        self.combine(other, Connective::And)
    }

    pub fn or(&self, other: &Proposition) -> Result<Proposition, LogicError> {
        self.combine(other, Connective::Or)
    }

    /// Complement within the family's sample space.
    pub fn negate(&self) -> Proposition {
        let size = self.family.history_count().unwrap_or(0);
        Proposition {
            family: Arc::clone(&self.family),
            members: (0..size).filter(|i| !self.members.contains(i)).collect(),
            name: format!("not {}", self.name),
        }
    }
}

fn check_family(d: &DecoherenceMatrix, a: &Proposition) -> Result<(), LogicError> {
    if same_family(d.family(), &a.family) {
        Ok(())
    } else {
        Err(LogicError::CrossFamily {
            first: "decoherence matrix".into(),
            second: a.name.clone(),
        })
    }
}

/// `Σ_{α ∈ A} D(α, α)`; refused on inconsistent families.
pub fn proposition_probability(d: &DecoherenceMatrix, a: &Proposition, config: &EngineConfig) -> Result<f64, LogicError> {
    check_family(d, a)?;
    d.require_consistent(config)?;
    Ok(a.members.iter().map(|&i| d.clamped_diagonal(i)).sum())
}

/// `p(given ∧ then) / p(given)`.
pub fn conditional_probability(
    d: &DecoherenceMatrix,
    given: &Proposition,
    then: &Proposition,
    config: &EngineConfig,
) -> Result<f64, LogicError> {
    let joint = given.and(then)?;
    let p_given = proposition_probability(d, given, config)?;
    check_family(d, then)?;
    if p_given <= config.tolerances.probability_tol {
        return Err(LogicError::NullCondition {
            name: given.name.clone(),
            probability: p_given,
        });
    }
    let p_joint = proposition_probability(d, &joint, config)?;
    Ok(p_joint / p_given)
}

/// `a ⇒ b` iff `Pr(b | a) ≥ 1 - tol`.
pub fn implies(
    d: &DecoherenceMatrix,
    a: &Proposition,
    b: &Proposition,
    tol: f64,
    config: &EngineConfig,
) -> Result<bool, LogicError> {
    Ok(conditional_probability(d, a, b, config)? >= 1.0 - tol)
}
