use std::path::PathBuf;
use std::process::{Command, Output};

use chronologic::cli::{
    format_report, parse_scenario_file, run_query, ErrorCategory, Format, QueryOutcome, Report, MAX_HISTORIES_ENV,
};
use chronologic::histories::EngineConfig;
use chronologic::scenarios::coin_toss_scenario;

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn read(name: &str) -> Vec<u8> {
    std::fs::read(scenario_path(name)).unwrap()
}

fn chronologic(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chronologic"));
    cmd.args(args).env_remove(MAX_HISTORIES_ENV);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chronologic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const MINIMAL: &str = r#"{
  "space": [{"label": "q", "dim": 2}],
  "initial": {"ket": [[1, 0], [0, 0]]},
  "times": [1],
  "propagators": [{"gate": {"name": "identity"}}],
  "decompositions": [{"factor_basis": {"factor": "q", "labels": ["0", "1"]}}]
}"#;

#[test]
fn minimal_file_has_two_histories() {
    let spec = parse_scenario_file(MINIMAL.as_bytes()).unwrap();
    assert_eq!(spec.family.history_count(), Some(2));
}

#[test]
fn non_unitary_literal_names_index_and_deviation() {
    let text = MINIMAL.replace(
        r#"{"gate": {"name": "identity"}}"#,
        r#"{"matrix": [[1, 0], [0, 0], [0, 0], [2, 0]]}"#,
    );
    let err = parse_scenario_file(text.as_bytes()).unwrap_err();
    assert_eq!(err.category, ErrorCategory::Validation);
    assert_eq!(err.location.as_deref(), Some("propagators[0]"));
    assert!(err.message.contains("not unitary"), "{err}");
    assert!(err.message.contains("3e0"), "{err}");
}

#[test]
fn coin3_file_builds_the_coin_scenario_family() {
    let spec = parse_scenario_file(&read("coin3.json")).unwrap();
    let built = coin_toss_scenario(3, 0.5).unwrap();
    assert_eq!(*spec.family, *built.family);
}

#[test]
fn coin3_consistency_query() {
    let spec = parse_scenario_file(&read("coin3.json")).unwrap();
    let report = run_query(&spec, &EngineConfig::default()).unwrap();
    match &report.results[0].outcome {
        QueryOutcome::Consistency {
            consistent,
            max_violation,
            ..
        } => {
            assert!(consistent);
            assert!(max_violation.abs() <= 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn measurement_implication_holds() {
    let spec = parse_scenario_file(&read("measurement.json")).unwrap();
    let report = run_query(&spec, &EngineConfig::default()).unwrap();
    let holds = report.results.iter().find_map(|r| match &r.outcome {
        QueryOutcome::Implication { holds, .. } => Some(*holds),
        _ => None,
    });
    assert_eq!(holds, Some(true));
}

#[test]
fn inconsistent_probability_is_refused() {
    let spec = parse_scenario_file(&read("double_hadamard.json")).unwrap();
    let err = run_query(&spec, &EngineConfig::default()).unwrap_err();
    assert_eq!(err.category, ErrorCategory::Refusal);
    assert!(err.message.contains("family inconsistent; histories are meaningless under Rule 4"));
}

#[test]
fn empty_query_list_gives_header_only() {
    let spec = parse_scenario_file(MINIMAL.as_bytes()).unwrap();
    let report = run_query(&spec, &EngineConfig::default()).unwrap();
    assert!(report.results.is_empty());
    let text = String::from_utf8(format_report(&report, Format::Text)).unwrap();
    assert!(text.starts_with("chronologic analysis report\n"));
    assert!(!text.contains("\n["));
}

#[test]
fn json_round_trips_value_identically() {
    for file in ["coin3.json", "measurement.json"] {
        let spec = parse_scenario_file(&read(file)).unwrap();
        let report = run_query(&spec, &EngineConfig::default()).unwrap();
        let bytes = format_report(&report, Format::Json);
        let back: Report = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, report);
        assert_eq!(format_report(&back, Format::Json), bytes);
    }
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let spec = parse_scenario_file(&read("coin3.json")).unwrap();
    let report = run_query(&spec, &EngineConfig::default()).unwrap();
    let text = String::from_utf8(format_report(&report, Format::Text)).unwrap();
    let json = String::from_utf8(format_report(&report, Format::Json)).unwrap();
    for r in &report.results {
        if let QueryOutcome::Probability { value, .. } = r.outcome {
            let digits = format!("{value:.16e}");
            assert!(text.contains(&digits) && json.contains(&digits));
        }
    }
}

#[test]
fn violating_pairs_sorted_by_magnitude_then_index() {
    let text = r#"{
      "space": [{"label": "q", "dim": 2}],
      "initial": {"ket": [[0.6, 0], [0.8, 0]]},
      "times": [1, 2, 3],
      "propagators": [
        {"gate": {"name": "hadamard", "target": "q"}},
        {"gate": {"name": "hadamard", "target": "q"}},
        {"hamiltonian": {"matrix": [[0, 0], [0.3, -0.2], [0.3, 0.2], [1, 0]], "duration": 0.7}}
      ],
      "decompositions": [
        {"factor_basis": {"factor": "q", "labels": ["0", "1"]}},
        {"factor_basis": {"factor": "q", "labels": ["0", "1"]}},
        {"factor_basis": {"factor": "q", "labels": ["0", "1"]}}
      ],
      "queries": [{"type": "consistency"}]
    }"#;
    let spec = parse_scenario_file(text.as_bytes()).unwrap();
    let report = run_query(&spec, &EngineConfig::default()).unwrap();
    let QueryOutcome::Consistency { violating_pairs, .. } = &report.results[0].outcome else {
        panic!("expected a consistency outcome");
    };
    assert!(violating_pairs.len() > 1);
    for w in violating_pairs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(a.magnitude > b.magnitude || (a.magnitude == b.magnitude && (a.alpha, a.beta) < (b.alpha, b.beta)));
    }
}

#[test]
fn schema_errors_carry_paths() {
    let cases = [
        (MINIMAL.replace(r#""times": [1]"#, r#""times": [1], "colour": "red""#), ErrorCategory::Schema),
        (MINIMAL.replace(r#""name": "identity""#, r#""name": "identity", "bogus": 1"#), ErrorCategory::Schema),
        (MINIMAL.replace("identity", "toffoli"), ErrorCategory::Schema),
        (MINIMAL.replace(r#""factor": "q""#, r#""factor": "r""#), ErrorCategory::Schema),
        (MINIMAL[..MINIMAL.len() - 5].to_string(), ErrorCategory::Parse),
        (MINIMAL.replace(r#""times": [1]"#, r#""times": [1,]"#), ErrorCategory::Parse),
        (MINIMAL.replace(r#"[[1, 0], [0, 0]]"#, r#"[[1, 0], [0, 0], [0, 0]]"#), ErrorCategory::Schema),
    ];
    for (text, category) in cases {
        let err = parse_scenario_file(text.as_bytes()).unwrap_err();
        assert_eq!(err.category, category, "{err}");
    }
    let err = parse_scenario_file(MINIMAL.replace("identity", "toffoli").as_bytes()).unwrap_err();
    assert_eq!(err.location.as_deref(), Some("propagators[0].gate.name"));
    let err = parse_scenario_file(
        MINIMAL
            .replace(r#""name": "identity""#, r#""name": "identity", "bogus": 1"#)
            .as_bytes(),
    )
    .unwrap_err();
    assert!(err.message.contains("bogus"), "{err}");
    assert!(err.location.as_deref().unwrap_or("").starts_with("propagators[0]"), "{err}");
}

#[test]
fn unknown_proposition_in_query_is_located() {
    let text = MINIMAL.replace(
        r#""decompositions""#,
        r#""queries": [{"type": "conditional", "given": "nope", "then": "nope"}], "decompositions""#,
    );
    let err = parse_scenario_file(text.as_bytes()).unwrap_err();
    assert_eq!(err.category, ErrorCategory::Schema);
    assert_eq!(err.location.as_deref(), Some("queries[0].given"));
}

#[test]
fn binary_exit_codes() {
    let ok = chronologic(&["analyze", scenario_path("coin3.json").to_str().unwrap()], &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());

    let refusal = chronologic(&["analyze", scenario_path("double_hadamard.json").to_str().unwrap()], &[]);
    assert_eq!(refusal.status.code(), Some(4));
    assert!(refusal.stdout.is_empty());
    assert!(String::from_utf8_lossy(&refusal.stderr).starts_with("error[refusal]:"));

    let bad_json = write_temp("bad.json", "{ not json");
    let parse = chronologic(&["analyze", bad_json.to_str().unwrap()], &[]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).starts_with("error[parse]:"));

    let non_unitary = write_temp(
        "non_unitary.json",
        &MINIMAL.replace(r#"{"gate": {"name": "identity"}}"#, r#"{"matrix": [[1, 0], [0, 0], [0, 0], [2, 0]]}"#),
    );
    let physics = chronologic(&["analyze", non_unitary.to_str().unwrap()], &[]);
    assert_eq!(physics.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&physics.stderr).starts_with("error[validation]: propagators[0]:"));

    let capped = chronologic(
        &["analyze", scenario_path("coin3.json").to_str().unwrap()],
        &[(MAX_HISTORIES_ENV, "7")],
    );
    assert_eq!(capped.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&capped.stderr).starts_with("error[resource]:"));

    let raised = chronologic(
        &["analyze", scenario_path("coin3.json").to_str().unwrap()],
        &[(MAX_HISTORIES_ENV, "8")],
    );
    assert_eq!(raised.status.code(), Some(0));

    let usage = chronologic(&["analyze"], &[]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).starts_with("error[usage]:"));

    let missing = chronologic(&["analyze", "/nonexistent/file.json"], &[]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error[io]:"));
}

#[test]
fn unchecked_probability_reports_the_diagonal() {
    let text = String::from_utf8(read("double_hadamard.json"))
        .unwrap()
        .replace(r#""history": ["0", "0"]"#, r#""history": ["0", "0"], "unchecked": true"#);
    let path = write_temp("unchecked.json", &text);
    let out = chronologic(&["analyze", path.to_str().unwrap(), "--format", "json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    let QueryOutcome::Probability { value, checked, .. } = report.results[1].outcome else {
        panic!("expected a probability outcome");
    };
    assert!(!checked);
    assert!((value - 0.25).abs() < 1e-12);
}

#[test]
fn weak_condition_flag_changes_the_verdict() {
    // H, S, H: weak-consistent but medium-inconsistent.
    let text = r#"{
      "space": [{"label": "q", "dim": 2}],
      "initial": {"ket": [[1, 0], [0, 0]]},
      "times": [1, 2],
      "propagators": [
        {"gate": {"name": "hadamard", "target": "q"}},
        {"sequence": [
          {"matrix": [[1, 0], [0, 0], [0, 0], [0, 1]]},
          {"gate": {"name": "hadamard", "target": "q"}}
        ]}
      ],
      "decompositions": [
        {"factor_basis": {"factor": "q", "labels": ["0", "1"]}},
        {"factor_basis": {"factor": "q", "labels": ["0", "1"]}}
      ],
      "queries": [{"type": "probability", "history": ["0", "0"]}]
    }"#;
    let path = write_temp("hsh.json", text);
    let medium = chronologic(&["analyze", path.to_str().unwrap()], &[]);
    assert_eq!(medium.status.code(), Some(4));
    let weak = chronologic(&["analyze", path.to_str().unwrap(), "--condition", "weak"], &[]);
    assert_eq!(weak.status.code(), Some(0), "{}", String::from_utf8_lossy(&weak.stderr));
}

#[test]
fn scenario_commands() {
    let list = chronologic(&["scenario", "list"], &[]);
    assert_eq!(list.status.code(), Some(0));
    let names = String::from_utf8(list.stdout).unwrap();
    for name in ["coin_toss", "measurement_chain", "mqs", "epr", "decoherence_sweep"] {
        assert!(names.contains(name));
    }

    let run = chronologic(
        &["scenario", "run", "coin_toss", "--param", "n=2", "--param", "bias=0.25", "--format", "json"],
        &[],
    );
    assert_eq!(run.status.code(), Some(0));
    let report: chronologic::cli::ScenarioRunReport = serde_json::from_slice(&run.stdout).unwrap();
    assert!(report.all_passed());
    assert_eq!(report.family.unwrap().history_count, 4);

    let bad = chronologic(&["scenario", "run", "coin_toss", "--param", "sides=6"], &[]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = chronologic(&["scenario", "run", "dice"], &[]);
    assert_eq!(unknown.status.code(), Some(2));
    let range = chronologic(&["scenario", "run", "coin_toss", "--param", "n=11"], &[]);
    assert_eq!(range.status.code(), Some(2));
}
