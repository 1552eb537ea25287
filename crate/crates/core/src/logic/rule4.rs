use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::proposition::{conditional_probability, same_family};
use super::{LogicError, Proposition};
use crate::histories::{check_consistency, ConsistencyReport, DecoherenceMatrix, EngineConfig, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule4Failure {
    /// Propositions in step `step` do not belong to the chain's family.
    CrossFamily { step: usize, propositions: Vec<String> },
    FamilyInconsistent { report: ConsistencyReport },
    ImplicationFailed {
        step: usize,
        premise: String,
        conclusion: String,
        conditional_probability: f64,
    },
    NullCondition { step: usize, premise: String, probability: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule4Report {
    pub verdict: Verdict,
    pub failures: Vec<Rule4Failure>,
}

impl Rule4Report {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Checks a chain of implication claims `premise ⇒ conclusion` against a
/// single family: every proposition must belong to `family`, the family
/// must be consistent under `config`, and every implication must hold at
/// `config.tolerances.probability_tol`.
///
/// Implications are only evaluated for steps whose propositions belong to
/// the family, and only when the family is consistent; otherwise their
/// probabilities have no meaning.
pub fn validate_reasoning_chain(
    family: &Arc<Family>,
    d: &DecoherenceMatrix,
    steps: &[(Proposition, Proposition)],
    config: &EngineConfig,
) -> Rule4Report {
    let mut failures = Vec::new();

    let mut in_family = vec![true; steps.len()];
    for (step, (premise, conclusion)) in steps.iter().enumerate() {
        let foreign: Vec<String> = [premise, conclusion]
            .into_iter()
            .filter(|p| !same_family(p.family(), family))
            .map(|p| p.name().to_string())
            .collect();
        if !foreign.is_empty() {
            in_family[step] = false;
            failures.push(Rule4Failure::CrossFamily {
                step,
                propositions: foreign,
            });
        }
    }

    let functional_matches = same_family(d.family(), family);
    let report = check_consistency(d, config.condition, config.tolerances.consistency_tol);
    let consistent = functional_matches && report.consistent;
    if functional_matches && !report.consistent {
        failures.push(Rule4Failure::FamilyInconsistent { report });
    }

    if consistent {
        let tol = config.tolerances.probability_tol;
        for (step, (premise, conclusion)) in steps.iter().enumerate().filter(|(i, _)| in_family[*i]) {
            match conditional_probability(d, premise, conclusion, config) {
                Ok(p) if p >= 1.0 - tol => {}
                Ok(p) => failures.push(Rule4Failure::ImplicationFailed {
                    step,
                    premise: premise.name().to_string(),
                    conclusion: conclusion.name().to_string(),
                    conditional_probability: p,
                }),
                Err(LogicError::NullCondition { probability, .. }) => failures.push(Rule4Failure::NullCondition {
                    step,
                    premise: premise.name().to_string(),
                    probability,
                }),
                // Family membership and consistency were checked above.
                Err(other) => unreachable!("unexpected failure in a checked chain: {other}"),
            }
        }
    }

    Rule4Report {
        verdict: if failures.is_empty() { Verdict::Valid } else { Verdict::Invalid },
        failures,
    }
}
