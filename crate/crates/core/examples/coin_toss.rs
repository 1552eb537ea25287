//! Classical coin tosses as a trivially consistent family.
//!
//! Usage: `cargo run --example coin_toss -- [n] [bias]`

use chronologic::histories::EngineConfig;
use chronologic::logic::proposition_probability;
use chronologic::scenarios::coin_toss_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(3);
    let bias: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.5);

    let config = EngineConfig::default();
    let scenario = coin_toss_scenario(n, bias)?;
    let d = scenario.functional(&config)?;
    println!("{n} tosses, bias {bias}: {} histories", d.size());
    println!("medium-consistency violation: {:e}", d.max_violation(config.condition));

    for name in scenario.named_propositions.keys() {
        let p = proposition_probability(&d, scenario.proposition(name)?, &config)?;
        println!("  Pr({name}) = {p:.6}");
    }
    for outcome in scenario.check_against(&d, &config) {
        println!("[{}] {}", if outcome.passed { "pass" } else { "FAIL" }, outcome.description);
    }
    Ok(())
}
