//! A spin measured by a pointer: the pointer reading at t2 lets us infer
//! the spin at t1.

use chronologic::histories::EngineConfig;
use chronologic::logic::{conditional_probability, implies, proposition_probability};
use chronologic::scenarios::measurement_chain_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = EngineConfig::default();
    let tol = config.tolerances.probability_tol;
    println!("{:>8} {:>10} {:>14} {:>10}", "theta", "Pr(up)", "Pr(+z | up)", "up => +z");
    for theta in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.0, 1.4] {
        let s = measurement_chain_scenario(theta)?;
        let d = s.functional(&config)?;
        let up = s.proposition("pointer_up@t2")?;
        let spin = s.proposition("spin+z@t1")?;
        let p = proposition_probability(&d, up, &config)?;
        let c = conditional_probability(&d, up, spin, &config)?;
        let holds = implies(&d, up, spin, tol, &config)?;
        println!("{theta:>8.4} {p:>10.6} {c:>14.6} {holds:>10}");
    }
    Ok(())
}
