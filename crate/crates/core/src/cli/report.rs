use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use super::schema::{QuerySpec, ScenarioSpec};
use super::{CliError, ErrorCategory, Format};
use crate::histories::{
    check_consistency, decoherence_functional, history_probability, history_probability_unchecked, Condition,
    DecoherenceMatrix, EngineConfig, Family,
};
use crate::logic::{
    conditional_probability, families_compatible, implies, proposition_probability, validate_reasoning_chain,
    CompatibilityReport, LogicError, Proposition, Rule4Failure, Rule4Report,
};
use crate::model::Factor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineSettings {
    pub condition: Condition,
    pub structural_tol: f64,
    pub consistency_tol: f64,
    pub probability_tol: f64,
    pub max_histories: usize,
}

impl From<&EngineConfig> for EngineSettings {
    fn from(c: &EngineConfig) -> Self {
        Self {
            condition: c.condition,
            structural_tol: c.tolerances.structural_tol,
            consistency_tol: c.tolerances.consistency_tol,
            probability_tol: c.tolerances.probability_tol,
            max_histories: c.max_histories,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub factors: Vec<Factor>,
    pub dimension: usize,
    pub times: Vec<f64>,
    pub outcome_labels: Vec<Vec<String>>,
    pub history_count: usize,
}

impl FamilySummary {
    pub fn of(family: &Family, history_count: usize) -> Self {
        Self {
            factors: family.space().factors().to_vec(),
            dimension: family.space().total_dim(),
            times: family.times().to_vec(),
            outcome_labels: family
                .decompositions()
                .iter()
                .map(|d| d.labels().iter().map(|l| l.to_string()).collect())
                .collect(),
            history_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub alpha: usize,
    pub beta: usize,
    pub alpha_history: Vec<String>,
    pub beta_history: Vec<String>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryOutcome {
    Consistency {
        condition: Condition,
        tolerance: f64,
        consistent: bool,
        max_violation: f64,
        violating_pair_count: usize,
        violating_pairs: Vec<PairRow>,
    },
    Probability {
        subject: String,
        value: f64,
        checked: bool,
    },
    Conditional {
        given: String,
        then: String,
        value: f64,
    },
    Implication {
        premise: String,
        conclusion: String,
        holds: bool,
        conditional_probability: f64,
        tolerance: f64,
    },
    Rule4Chain {
        report: Rule4Report,
    },
    Compatibility {
        report: CompatibilityReport,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub index: usize,
    pub query: QuerySpec,
    pub outcome: QueryOutcome,
}

/// Result of `analyze`: configuration, family summary and one entry per
/// query in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine: EngineSettings,
    pub family: FamilySummary,
    pub results: Vec<QueryResult>,
}

fn query_error(index: usize) -> impl Fn(LogicError) -> CliError {
    move |e| {
        let category = match &e {
            LogicError::Engine(inner) => super::schema::engine_category(inner),
            LogicError::CrossFamily { .. } | LogicError::NullCondition { .. } => ErrorCategory::Refusal,
        };
        CliError::new(category, e.to_string()).at(format!("queries[{index}]"))
    }
}

fn pair_rows(d: &DecoherenceMatrix, pairs: impl Iterator<Item = (usize, usize, f64)>) -> Vec<PairRow> {
    let family = d.family();
    let histories = |i| {
        let h = family
            .history(&decode(family, i))
            .expect("index within the family");
        family.labels_of(&h).into_iter().map(String::from).collect()
    };
    pairs
        .map(|(alpha, beta, magnitude)| PairRow {
            alpha,
            beta,
            alpha_history: histories(alpha),
            beta_history: histories(beta),
            magnitude,
        })
        .collect()
}

/// Mixed-radix digits of a flat history index, earliest time first.
fn decode(family: &Family, mut flat: usize) -> Vec<usize> {
    let radices = family.radices();
    let mut digits = vec![0; radices.len()];
    for (k, r) in radices.iter().enumerate().rev() {
        digits[k] = flat % r;
        flat /= r;
    }
    digits
}

/// Runs every query of `spec` in file order.
pub fn run_query(spec: &ScenarioSpec, config: &EngineConfig) -> Result<Report, CliError> {
    let family = &spec.family;
    let d = decoherence_functional(family, config.max_histories)
        .map_err(|e| CliError::new(super::schema::engine_category(&e), e.to_string()))?;

    let propositions = spec
        .predicates
        .iter()
        .map(|(name, p)| {
            Proposition::from_expression(family, p, name.clone(), config.max_histories)
                .map(|prop| (name.clone(), prop))
                .map_err(|e| {
                    CliError::new(super::schema::engine_category(&e), e.to_string()).at(format!("propositions.{name}"))
                })
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    let prop = |name: &str| &propositions[name];

    let mut results = Vec::with_capacity(spec.file.queries.len());
    for (index, query) in spec.file.queries.iter().enumerate() {
        let fail = query_error(index);
        let outcome = match query {
            QuerySpec::Consistency { max_pairs } => {
                let r = check_consistency(&d, config.condition, config.tolerances.consistency_tol);
                let shown = max_pairs.unwrap_or(usize::MAX);
                QueryOutcome::Consistency {
                    condition: r.condition,
                    tolerance: r.tolerance,
                    consistent: r.consistent,
                    max_violation: r.max_violation,
                    violating_pair_count: r.violating_pairs.len(),
                    violating_pairs: pair_rows(
                        &d,
                        r.violating_pairs.iter().take(shown).map(|p| (p.alpha, p.beta, p.magnitude)),
                    ),
                }
            }
            QuerySpec::Probability {
                history,
                proposition,
                unchecked,
            } => {
                let (subject, value) = if let Some(labels) = history {
                    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
                    let h = family.history_from_labels(&labels).map_err(|e| fail(e.into()))?;
                    let p = if *unchecked {
                        history_probability_unchecked(&d, &h)
                    } else {
                        history_probability(&d, &h, config)
                    };
                    (format!("history {}", labels.join(",")), p.map_err(|e| fail(e.into()))?)
                } else {
                    let name = proposition.as_deref().expect("validated at parse time");
                    let p = if *unchecked {
                        Ok(d.coarse_grained_weight(prop(name).members().iter().copied()))
                    } else {
                        proposition_probability(&d, prop(name), config)
                    };
                    (format!("proposition {name}"), p.map_err(&fail)?)
                };
                QueryOutcome::Probability {
                    subject,
                    value,
                    checked: !unchecked,
                }
            }
            QuerySpec::Conditional { given, then } => QueryOutcome::Conditional {
                given: given.clone(),
                then: then.clone(),
                value: conditional_probability(&d, prop(given), prop(then), config).map_err(&fail)?,
            },
            QuerySpec::Implication {
                premise,
                conclusion,
                tol,
            } => {
                let tolerance = tol.unwrap_or(config.tolerances.probability_tol);
                let (a, b) = (prop(premise), prop(conclusion));
                QueryOutcome::Implication {
                    premise: premise.clone(),
                    conclusion: conclusion.clone(),
                    holds: implies(&d, a, b, tolerance, config).map_err(&fail)?,
                    conditional_probability: conditional_probability(&d, a, b, config).map_err(&fail)?,
                    tolerance,
                }
            }
            QuerySpec::Rule4Chain { steps } => {
                let steps: Vec<_> = steps
                    .iter()
                    .map(|s| (prop(&s.premise).clone(), prop(&s.conclusion).clone()))
                    .collect();
                QueryOutcome::Rule4Chain {
                    report: validate_reasoning_chain(family, &d, &steps, config),
                }
            }
            QuerySpec::Compatibility { .. } => {
                let other = &spec.alternatives[&index];
                QueryOutcome::Compatibility {
                    report: families_compatible(family, other, config).map_err(|e| fail(e.into()))?,
                }
            }
        };
        results.push(QueryResult {
            index,
            query: query.clone(),
            outcome,
        });
    }

    Ok(Report {
        engine: config.into(),
        family: FamilySummary::of(family, d.size()),
        results,
    })
}

/// Writes every float as `{:.16e}`: 17 significant digits, so values
/// round-trip exactly and text and JSON agree digit for digit.
struct FixedPrecision;

impl serde_json::ser::Formatter for FixedPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", num(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON with keys in sorted order and fixed-precision floats.
pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    // Round-tripping through `Value` sorts object keys.
    let value = serde_json::to_value(value).expect("reports serialize");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedPrecision);
    value.serialize(&mut ser).expect("writing to memory");
    out.push(b'\n');
    out
}

/// Reports that can be rendered as a human-readable table.
pub trait Render: Serialize {
    fn render_text(&self, out: &mut String);
}

pub fn format_report<R: Render>(report: &R, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Text => {
            let mut out = String::new();
            report.render_text(&mut out);
            out.into_bytes()
        }
    }
}

pub(crate) fn render_engine(e: &EngineSettings, out: &mut String) {
    let _ = writeln!(
        out,
        "engine: condition={} structural_tol={} consistency_tol={} probability_tol={} max_histories={}",
        e.condition,
        num(e.structural_tol),
        num(e.consistency_tol),
        num(e.probability_tol),
        e.max_histories
    );
}

pub(crate) fn render_family(f: &FamilySummary, out: &mut String) {
    let factors: Vec<String> = f.factors.iter().map(|x| format!("{}({})", x.label, x.dim)).collect();
    let times: Vec<String> = f.times.iter().map(|t| num(*t)).collect();
    let _ = writeln!(
        out,
        "family: factors={} dimension={} histories={}",
        factors.join(" "),
        f.dimension,
        f.history_count
    );
    let _ = writeln!(out, "times: {}", times.join(" "));
    for (k, labels) in f.outcome_labels.iter().enumerate() {
        let _ = writeln!(out, "  t{k}: {{{}}}", labels.join(", "));
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_rule4(r: &Rule4Report, out: &mut String) {
    let _ = writeln!(out, "  verdict: {}", if r.is_valid() { "valid" } else { "invalid" });
    for f in &r.failures {
        let _ = match f {
            Rule4Failure::CrossFamily { step, propositions } => {
                writeln!(out, "  failure: cross_family step={step} propositions={}", propositions.join(","))
            }
            Rule4Failure::FamilyInconsistent { report } => writeln!(
                out,
                "  failure: family_inconsistent condition={} max_violation={}",
                report.condition,
                num(report.max_violation)
            ),
            Rule4Failure::ImplicationFailed {
                step,
                premise,
                conclusion,
                conditional_probability,
            } => writeln!(
                out,
                "  failure: implication_failed step={step} {premise} => {conclusion} conditional_probability={}",
                num(*conditional_probability)
            ),
            Rule4Failure::NullCondition {
                step,
                premise,
                probability,
            } => writeln!(
                out,
                "  failure: null_condition step={step} premise={premise} probability={}",
                num(*probability)
            ),
        };
    }
}

impl Render for Report {
    fn render_text(&self, out: &mut String) {
        out.push_str("chronologic analysis report\n");
        render_engine(&self.engine, out);
        render_family(&self.family, out);
        for r in &self.results {
            let _ = write!(out, "\n[{}] ", r.index);
            let _ = match &r.outcome {
                QueryOutcome::Consistency {
                    condition,
                    tolerance,
                    consistent,
                    max_violation,
                    violating_pair_count,
                    violating_pairs,
                } => {
                    let _ = writeln!(out, "consistency ({condition}, tolerance {})", num(*tolerance));
                    let _ = writeln!(out, "  consistent: {}", yes_no(*consistent));
                    let _ = writeln!(out, "  max_violation: {}", num(*max_violation));
                    let _ = writeln!(out, "  violating pairs: {violating_pair_count}");
                    if !violating_pairs.is_empty() {
                        let _ = writeln!(out, "  {:>6} {:>6} {:>24}  histories", "alpha", "beta", "magnitude");
                    }
                    for p in violating_pairs {
                        let _ = writeln!(
                            out,
                            "  {:>6} {:>6} {:>24}  ({}) ({})",
                            p.alpha,
                            p.beta,
                            num(p.magnitude),
                            p.alpha_history.join(","),
                            p.beta_history.join(",")
                        );
                    }
                    Ok(())
                }
                QueryOutcome::Probability {
                    subject,
                    value,
                    checked,
                } => writeln!(
                    out,
                    "probability of {subject}{}\n  value: {}",
                    if *checked { "" } else { " (unchecked)" },
                    num(*value)
                ),
                QueryOutcome::Conditional { given, then, value } => {
                    writeln!(out, "conditional Pr({then} | {given})\n  value: {}", num(*value))
                }
                QueryOutcome::Implication {
                    premise,
                    conclusion,
                    holds,
                    conditional_probability,
                    tolerance,
                } => writeln!(
                    out,
                    "implication {premise} => {conclusion} (tolerance {})\n  holds: {}\n  conditional_probability: {}",
                    num(*tolerance),
                    yes_no(*holds),
                    num(*conditional_probability)
                ),
                QueryOutcome::Rule4Chain { report } => {
                    let _ = writeln!(out, "rule4_chain");
                    render_rule4(report, out);
                    Ok(())
                }
                QueryOutcome::Compatibility { report } => {
                    let opt = |x: Option<f64>| x.map_or("-".to_string(), num);
                    writeln!(
                        out,
                        "compatibility\n  compatible: {}\n  reason: {}\n  time_index: {}\n  max_commutator: {}\n  \
                         refinement_violation: {}",
                        yes_no(report.compatible),
                        serde_json::to_value(report.reason).expect("enum serializes").as_str().unwrap_or_default(),
                        report.time_index.map_or("-".to_string(), |t| t.to_string()),
                        opt(report.max_commutator),
                        opt(report.refinement_violation)
                    )
                }
            };
        }
    }
}
