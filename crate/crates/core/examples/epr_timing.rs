//! EPR pair: the statistics of B do not depend on when, or whether, A is
//! measured.

use chronologic::histories::EngineConfig;
use chronologic::logic::{conditional_probability, proposition_probability};
use chronologic::scenarios::{epr_scenario, Axis, EprOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = EngineConfig::default();
    for a_axis in Axis::ALL {
        for b_axis in Axis::ALL {
            println!("A along {a_axis}, B along {b_axis}:");
            for order in EprOrder::ALL {
                let s = epr_scenario(order, a_axis, b_axis)?;
                let d = s.functional(&config)?;
                let b_plus = proposition_probability(&d, s.proposition("b_plus")?, &config)?;
                let correlation = match s.proposition("a_up") {
                    Ok(a_up) => {
                        let c = conditional_probability(&d, a_up, s.proposition("b_minus")?, &config)?;
                        format!("Pr(B- | A up) = {c:.6}")
                    }
                    Err(_) => "A not measured".to_string(),
                };
                println!("  {order:<15} Pr(B+) = {b_plus:.6}  {correlation}");
            }
        }
    }
    Ok(())
}
