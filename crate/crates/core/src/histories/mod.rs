//! Families of histories, the decoherence functional, consistency checks and
//! probabilities.

mod consistency;
mod family;
mod functional;

use thiserror::Error;

pub use consistency::{
    check_consistency, history_probability, history_probability_unchecked, Condition, ConsistencyReport,
    EngineConfig, ViolatingPair, DEFAULT_MAX_HISTORIES,
};
pub use family::{Family, FamilyRef, History, PropagatorSpec};
pub use functional::{decoherence_functional, DecoherenceMatrix};

use crate::linalg::LinalgError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("a family needs at least one time")]
    NoTimes,
    #[error("times must be strictly increasing: times[{index}] = {current} follows {previous}")]
    NonMonotonicTimes { index: usize, previous: f64, current: f64 },
    #[error("got {times} times, {propagators} propagators and {decompositions} decompositions")]
    CountMismatch {
        times: usize,
        propagators: usize,
        decompositions: usize,
    },
    #[error("propagator {index} is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitary { index: usize, deviation: f64 },
    #[error("propagator {index}: {source}")]
    Propagator { index: usize, source: LinalgError },
    #[error("{component} {index} lives on a different Hilbert space")]
    SpaceMismatch { component: &'static str, index: usize },
    #[error("history does not belong to this family")]
    ForeignHistory,
    #[error("unknown outcome label `{0}`")]
    UnknownOutcome(String),
    #[error("family has {} histories, above the cap of {cap}", count.map_or("too many".to_string(), |c| c.to_string()))]
    TooManyHistories { count: Option<usize>, cap: usize },
    #[error(
        "family inconsistent; histories are meaningless under Rule 4 \
         ({condition} violation {max_violation:e} > {tolerance:e})"
    )]
    Inconsistent {
        condition: Condition,
        max_violation: f64,
        tolerance: f64,
    },
}
