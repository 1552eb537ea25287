use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::histories::{decoherence_functional, EngineConfig, EngineError, Family};
use crate::linalg::frobenius_distance;
use crate::model::{Decomposition, Property};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatibilityReason {
    CommutingRefinementConsistent,
    DecompositionsDoNotCommute,
    RefinementInconsistent,
    /// Different space, initial state, times or propagators.
    MismatchedSetup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub reason: CompatibilityReason,
    /// Time at which non-commuting members were found.
    pub time_index: Option<usize>,
    /// Largest `|PQ - QP|` entry found at that time.
    pub max_commutator: Option<f64>,
    /// Normalized consistency violation of the common refinement.
    pub refinement_violation: Option<f64>,
}

impl CompatibilityReport {
    fn incompatible(reason: CompatibilityReason) -> Self {
        Self {
            compatible: false,
            reason,
            time_index: None,
            max_commutator: None,
            refinement_violation: None,
        }
    }
}

fn same_setup(f1: &Family, f2: &Family, tol: f64) -> bool {
    let close = |a, b| frobenius_distance(a, b).is_ok_and(|x| x <= tol);
    f1.space() == f2.space()
        && f1.times() == f2.times()
        && close(f1.initial().matrix(), f2.initial().matrix())
        && f1.propagators().iter().zip(f2.propagators()).all(|(u, v)| close(u, v))
}

/// Sufficient test for a common consistent refinement.
///
/// When every pair of members at every time commutes, the products `PQ`
/// (zero products dropped) form the coarsest common refinement; the two
/// families are reported compatible iff that refinement is consistent.
/// Non-commuting decompositions are always reported incompatible.
pub fn families_compatible(f1: &Family, f2: &Family, config: &EngineConfig) -> Result<CompatibilityReport, EngineError> {
    let tol = config.tolerances.structural_tol;
    if !same_setup(f1, f2, tol) {
        return Ok(CompatibilityReport::incompatible(CompatibilityReason::MismatchedSetup));
    }

    let space = f1.space();
    let mut refined = Vec::with_capacity(f1.times().len());
    for (time_index, (d1, d2)) in f1.decompositions().iter().zip(f2.decompositions()).enumerate() {
        let mut worst: f64 = 0.0;
        let mut members = Vec::new();
        for p in d1.members() {
            for q in d2.members() {
                let pq = p.matrix() * q.matrix();
                let qp = q.matrix() * p.matrix();
                worst = worst.max((&pq - &qp).max_abs());
                if pq.frobenius_norm() > tol {
                    members.push((format!("{}&{}", p.label(), q.label()), pq));
                }
            }
        }
        if worst > tol {
            return Ok(CompatibilityReport {
                time_index: Some(time_index),
                max_commutator: Some(worst),
                ..CompatibilityReport::incompatible(CompatibilityReason::DecompositionsDoNotCommute)
            });
        }
        let props = members
            .into_iter()
            .map(|(label, m)| Property::from_matrix(space, m, label, tol))
            .collect::<Result<Vec<_>, _>>()?;
        refined.push(Decomposition::new(space, props, tol)?);
    }

    let refinement = Arc::new(f1.with_decompositions(refined)?);
    let d = decoherence_functional(&refinement, config.max_histories)?;
    let violation = d.max_violation(config.condition);
    let compatible = violation <= config.tolerances.consistency_tol;
    Ok(CompatibilityReport {
        compatible,
        reason: if compatible {
            CompatibilityReason::CommutingRefinementConsistent
        } else {
            CompatibilityReason::RefinementInconsistent
        },
        time_index: None,
        max_commutator: None,
        refinement_violation: Some(violation),
    })
}
