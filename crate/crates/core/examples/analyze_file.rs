//! Parses a JSON scenario file and prints the analysis report, as the
//! `analyze` subcommand does.
//!
//! Usage: `cargo run --example analyze_file -- [path] [text|json]`

use chronologic::cli::{format_report, parse_scenario_file, run_query, Format};
use chronologic::histories::EngineConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/measurement.json").to_string());
    let format = match args.next().as_deref() {
        Some("json") => Format::Json,
        _ => Format::Text,
    };
    let spec = parse_scenario_file(&std::fs::read(&path)?)?;
    let report = run_query(&spec, &EngineConfig::default())?;
    std::io::Write::write_all(&mut std::io::stdout(), &format_report(&report, format))?;
    Ok(())
}
