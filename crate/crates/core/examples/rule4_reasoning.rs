//! Chains of inferences are accepted only inside one consistent family.

use chronologic::histories::EngineConfig;
use chronologic::logic::validate_reasoning_chain;
use chronologic::scenarios::{coin_toss_scenario, measurement_chain_scenario, mqs_scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = EngineConfig::default();
    let theta = std::f64::consts::FRAC_PI_4;

    let coin = coin_toss_scenario(3, 0.5)?;
    let a = coin.proposition("heads1")?;
    let a_or_b = a.or(coin.proposition("heads2")?)?;
    let chain = [(a.clone(), a_or_b.clone()), (a_or_b, coin.proposition("all")?.clone())];
    let report = validate_reasoning_chain(&coin.family, &coin.functional(&config)?, &chain, &config);
    println!("coin chain: {:?}", report.verdict);

    let pointer = measurement_chain_scenario(theta)?;
    let chain = [(pointer.proposition("pointer_up@t2")?.clone(), pointer.proposition("spin+z@t1")?.clone())];
    let report = validate_reasoning_chain(&pointer.family, &pointer.functional(&config)?, &chain, &config);
    println!("pointer retrodiction: {:?}", report.verdict);

    let mqs = mqs_scenario(theta)?;
    let d = mqs.functional(&config)?;
    let inside = [(mqs.proposition("mqs+@t2")?.clone(), mqs.proposition("spin+z@t1")?.clone())];
    let report = validate_reasoning_chain(&mqs.family, &d, &inside, &config);
    println!("MQS chain: {:?}", report.verdict);
    for failure in &report.failures {
        println!("  {}", serde_json::to_string(failure)?);
    }

    let mixed = [(pointer.proposition("pointer_up@t2")?.clone(), mqs.proposition("mqs+@t2")?.clone())];
    let report = validate_reasoning_chain(&pointer.family, &pointer.functional(&config)?, &mixed, &config);
    println!("pointer => MQS: {:?}", report.verdict);
    for failure in &report.failures {
        println!("  {}", serde_json::to_string(failure)?);
    }
    Ok(())
}
