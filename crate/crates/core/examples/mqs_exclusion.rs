//! Macroscopic quantum superpositions of the pointer make the family
//! inconsistent; environment records suppress the interference.

use chronologic::histories::{check_consistency, EngineConfig};
use chronologic::scenarios::{mqs_scenario, mqs_with_environment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = EngineConfig::default();
    let theta = std::f64::consts::FRAC_PI_4;

    let s = mqs_scenario(theta)?;
    let report = check_consistency(&s.functional(&config)?, config.condition, config.tolerances.consistency_tol);
    println!("isolated pointer: consistent = {}, max violation = {:.6}", report.consistent, report.max_violation);
    for pair in report.violating_pairs.iter().take(4) {
        println!("  {pair:?}");
    }

    println!("\nwith environment (coupling pi/4):");
    for n_env in 0..=6 {
        let s = mqs_with_environment(theta, n_env, std::f64::consts::FRAC_PI_4)?;
        let d = s.functional(&config)?;
        println!("  n_env = {n_env}: max violation {:.6e}", d.max_violation(config.condition));
    }
    Ok(())
}
