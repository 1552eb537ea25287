use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DecoherenceMatrix, EngineError, History};
use crate::linalg::ToleranceConfig;

/// Which off-diagonal condition defines a consistent family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `Re D(α, β) = 0` for α ≠ β.
    Weak,
    /// `D(α, β) = 0` for α ≠ β.
    #[default]
    Medium,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Weak => "weak",
            Condition::Medium => "medium",
        })
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "weak" => Ok(Condition::Weak),
            "medium" => Ok(Condition::Medium),
            other => Err(format!("unknown consistency condition `{other}` (expected weak or medium)")),
        }
    }
}

/// Engine-wide settings for checked queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub tolerances: ToleranceConfig,
    pub condition: Condition,
    pub max_histories: usize,
}

pub const DEFAULT_MAX_HISTORIES: usize = 4096;

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            tolerances: ToleranceConfig::default(),
            condition: Condition::Medium,
            max_histories: DEFAULT_MAX_HISTORIES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolatingPair {
    pub alpha: usize,
    pub beta: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub condition: Condition,
    pub tolerance: f64,
    pub consistent: bool,
    pub max_violation: f64,
    /// Pairs `α < β` above tolerance, largest first, ties by `(α, β)`.
    pub violating_pairs: Vec<ViolatingPair>,
}

pub fn check_consistency(d: &DecoherenceMatrix, condition: Condition, tol: f64) -> ConsistencyReport {
    let cutoff = d.family().structural_tol();
    let mut violating_pairs = Vec::new();
    for alpha in 0..d.size() {
        for beta in alpha + 1..d.size() {
            let magnitude = d.violation(alpha, beta, condition, cutoff);
            if magnitude > tol {
                violating_pairs.push(ViolatingPair { alpha, beta, magnitude });
            }
        }
    }
    violating_pairs.sort_by(|x, y| {
        y.magnitude
            .total_cmp(&x.magnitude)
            .then(x.alpha.cmp(&y.alpha))
            .then(x.beta.cmp(&y.beta))
    });
    let max_violation = d.max_violation(condition);
    ConsistencyReport {
        condition,
        tolerance: tol,
        consistent: max_violation <= tol,
        max_violation,
        violating_pairs,
    }
}

impl DecoherenceMatrix {
    pub fn is_consistent(&self, condition: Condition, tol: f64) -> bool {
        self.max_violation(condition) <= tol
    }

    pub(crate) fn require_consistent(&self, config: &EngineConfig) -> Result<(), EngineError> {
        let tol = config.tolerances.consistency_tol;
        if self.is_consistent(config.condition, tol) {
            Ok(())
        } else {
            Err(EngineError::Inconsistent {
                condition: config.condition,
                max_violation: self.max_violation(config.condition),
                tolerance: tol,
            })
        }
    }

    /// `D(α, α)` clamped into [0, 1] when it strays by at most the structural tolerance.
    pub(crate) fn clamped_diagonal(&self, alpha: usize) -> f64 {
        let p = self.entry(alpha, alpha).re;
        let tol = self.family().structural_tol();
        if (-tol..0.0).contains(&p) {
            0.0
        } else if p > 1.0 && p <= 1.0 + tol {
            1.0
        } else {
            p
        }
    }
}

/// Probability of an elementary history; refused unless the family is
/// consistent under `config`.
pub fn history_probability(d: &DecoherenceMatrix, history: &History, config: &EngineConfig) -> Result<f64, EngineError> {
    d.require_consistent(config)?;
    history_probability_unchecked(d, history)
}

/// `D(α, α)` without the consistency gate.
pub fn history_probability_unchecked(d: &DecoherenceMatrix, history: &History) -> Result<f64, EngineError> {
    d.check_history(history)?;
    Ok(d.clamped_diagonal(history.flat_index()))
}
