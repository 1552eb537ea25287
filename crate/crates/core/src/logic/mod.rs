//! Propositions over one family's sample space, implication by conditional
//! probability, reasoning-chain validation and family compatibility.
//!
//! Every query is scoped to an explicit family. Nothing here picks a family
//! for the caller.

mod compatibility;
mod proposition;
mod rule4;

use thiserror::Error;

pub use compatibility::{families_compatible, CompatibilityReason, CompatibilityReport};
pub use proposition::{conditional_probability, implies, proposition_probability, Connective, Predicate, Proposition};
pub use rule4::{validate_reasoning_chain, Rule4Failure, Rule4Report, Verdict};

use crate::histories::EngineError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("`{first}` and `{second}` belong to different families")]
    CrossFamily { first: String, second: String },
    #[error("cannot condition on `{name}`: probability {probability:e} is zero within tolerance")]
    NullCondition { name: String, probability: f64 },
}
