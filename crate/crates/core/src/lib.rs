//! Consistent-histories analysis of finite-dimensional quantum systems.
//!
//! Declare a [`Family`](histories::Family) of histories (an initial state,
//! unitary propagators and one projective decomposition per time), compute
//! its [decoherence functional](histories::decoherence_functional), check
//! consistency, assign probabilities and validate reasoning chains inside a
//! single consistent family.
//!
//! ```
//! use std::sync::Arc;
//! use chronologic::histories::{decoherence_functional, history_probability, EngineConfig};
//! use chronologic::scenarios::coin_toss_scenario;
//!
//! let scenario = coin_toss_scenario(3, 0.5).unwrap();
//! let family = Arc::clone(&scenario.family);
//! let d = decoherence_functional(&family, 4096).unwrap();
//! let hhh = family.history_from_labels(&["H", "H", "H"]).unwrap();
//! let p = history_probability(&d, &hhh, &EngineConfig::default()).unwrap();
//! assert!((p - 0.125).abs() < 1e-12);
//! ```


pub mod cli;
pub mod histories;
pub mod linalg;
pub mod logic;
pub mod model;
pub mod scenarios;


pub use histories::{Condition, DecoherenceMatrix, EngineConfig, EngineError, Family, History};
pub use linalg::{ComplexMatrix, ToleranceConfig};
pub use logic::{LogicError, Proposition};
pub use model::{Decomposition, DensityMatrix, HilbertSpace, ModelError, Property};
