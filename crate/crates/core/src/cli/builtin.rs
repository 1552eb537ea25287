use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::report::{num, render_engine, render_family, EngineSettings, FamilySummary, Render};
use super::{CliError, ErrorCategory};
use crate::histories::EngineConfig;
use crate::scenarios::{
    coin_toss_scenario, decoherence_sweep_at, epr_scenario, measurement_chain_scenario, mqs_with_environment,
    ExpectationOutcome, Scenario, ScenarioError, CATALOG,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_env: usize,
    pub max_violation: f64,
    /// `|cos(coupling)|^n_env`, the closed-form environment overlap.
    pub overlap: f64,
}

/// Result of `scenario run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRunReport {
    pub scenario: String,
    pub parameters: BTreeMap<String, String>,
    pub engine: EngineSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_violation: Option<f64>,
    pub expectations: Vec<ExpectationOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
}

impl ScenarioRunReport {
    pub fn all_passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }
}

/// Output of `scenario list`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub scenarios: BTreeMap<String, BTreeMap<String, String>>,
}

fn split_params(text: &str) -> BTreeMap<String, String> {
    text.split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn catalog() -> Catalog {
    Catalog {
        scenarios: CATALOG
            .iter()
            .map(|(name, defaults)| (name.to_string(), split_params(defaults)))
            .collect(),
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::new(ErrorCategory::Usage, message)
}

fn scenario_error(e: ScenarioError) -> CliError {
    let category = match &e {
        ScenarioError::Parameter { .. } | ScenarioError::UnknownProposition(_) => ErrorCategory::Usage,
        ScenarioError::Engine(inner) => super::schema::engine_category(inner),
        ScenarioError::Logic(_) => ErrorCategory::Refusal,
        ScenarioError::Model(_) => ErrorCategory::Validation,
    };
    CliError::new(category, e.to_string())
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = &self.0[key];
        raw.parse()
            .map_err(|e| usage(format!("parameter `{key}`: cannot parse `{raw}`: {e}")))
    }
}

/// Runs a built-in scenario by name; `overrides` are `key=value` pairs on
/// top of the catalog defaults.
pub fn run_scenario(name: &str, overrides: &[String], config: &EngineConfig) -> Result<ScenarioRunReport, CliError> {
    let (_, defaults) = CATALOG.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let known: Vec<&str> = CATALOG.iter().map(|(n, _)| *n).collect();
        usage(format!("unknown scenario `{name}` (known: {})", known.join(", ")))
    })?;
    let mut params = split_params(defaults);
    for kv in overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| usage(format!("parameter `{kv}` is not of the form key=value")))?;
        if !params.contains_key(k) {
            let known: Vec<&String> = params.keys().collect();
            return Err(usage(format!(
                "scenario `{name}` has no parameter `{k}` (known: {})",
                known.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        params.insert(k.to_string(), v.to_string());
    }
    let p = Params(params);

    if name == "decoherence_sweep" {
        let coupling: f64 = p.get("coupling")?;
        let points =
            decoherence_sweep_at(p.get("theta")?, p.get("n_env_max")?, coupling).map_err(scenario_error)?;
        return Ok(ScenarioRunReport {
            scenario: name.to_string(),
            parameters: p.0,
            engine: config.into(),
            family: None,
            max_violation: None,
            expectations: Vec::new(),
            sweep: points
                .iter()
                .map(|pt| SweepRow {
                    n_env: pt.n_env,
                    max_violation: pt.max_violation,
                    overlap: coupling.cos().abs().powi(pt.n_env as i32),
                })
                .collect(),
        });
    }

    let scenario: Scenario = match name {
        "coin_toss" => coin_toss_scenario(p.get("n")?, p.get("bias")?),
        "measurement_chain" => measurement_chain_scenario(p.get("theta")?),
        "mqs" => mqs_with_environment(p.get("theta")?, p.get("n_env")?, p.get("coupling")?),
        "epr" => {
            let order = p.get("order")?;
            epr_scenario(order, p.get("a_axis")?, p.get("b_axis")?)
        }
        _ => unreachable!("catalog entries are all handled"),
    }
    .map_err(scenario_error)?;
    let d = scenario.functional(config).map_err(scenario_error)?;
    Ok(ScenarioRunReport {
        scenario: scenario.name.clone(),
        parameters: p.0,
        engine: config.into(),
        family: Some(FamilySummary::of(&scenario.family, d.size())),
        max_violation: Some(d.max_violation(config.condition)),
        expectations: scenario.check_against(&d, config),
        sweep: Vec::new(),
    })
}

impl Render for ScenarioRunReport {
    fn render_text(&self, out: &mut String) {
        let _ = writeln!(out, "scenario: {}", self.scenario);
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "parameters: {}", params.join(" "));
        render_engine(&self.engine, out);
        if let Some(f) = &self.family {
            render_family(f, out);
        }
        if let Some(v) = self.max_violation {
            let _ = writeln!(out, "max_violation ({}): {}", self.engine.condition, num(v));
        }
        if !self.expectations.is_empty() {
            let _ = writeln!(out, "\nexpectations:");
        }
        for e in &self.expectations {
            let observed = e.observed.map_or_else(|| "-".to_string(), num);
            let _ = writeln!(
                out,
                "  [{}] {}\n         expected {} observed {} tolerance {}",
                if e.passed { "pass" } else { "FAIL" },
                e.description,
                num(e.expected),
                observed,
                num(e.tolerance)
            );
            if let Some(err) = &e.error {
                let _ = writeln!(out, "         error: {err}");
            }
        }
        if !self.sweep.is_empty() {
            let _ = writeln!(out, "\n{:>5} {:>24} {:>24}", "n_env", "max_violation", "overlap");
            for r in &self.sweep {
                let _ = writeln!(out, "{:>5} {:>24} {:>24}", r.n_env, num(r.max_violation), num(r.overlap));
            }
        }
    }
}

impl Render for Catalog {
    fn render_text(&self, out: &mut String) {
        for (name, params) in &self.scenarios {
            let params: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{name:<18} {}", params.join(" "));
        }
    }
}
