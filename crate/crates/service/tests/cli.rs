mod common;

use std::collections::BTreeMap;
use std::process::{Command, Output};

use common::*;
use serde_json::{json, Value};
use stplan_core::imo::{Formulation, Label, SessionView};
use stplan_service::commands::{self, SolveOutput};
use stplan_service::ErrorBody;

fn stplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stplan")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error(o: &Output) -> ErrorBody {
    assert!(!o.status.success());
    let stderr = String::from_utf8_lossy(&o.stderr);
    let line = stderr.lines().last().unwrap();
    serde_json::from_str(line).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

fn small_instance() -> Value {
    let item = |id: &str| json!({"id": id, "name": id.to_uppercase()});
    json!({
        "meta": {
            "name": "small",
            "facilities": [item("a"), item("b"), item("c")],
            "locations": [item("x"), item("y")],
            "criteria": [item("u"), item("v")],
            "horizon": 2,
            "interest_rate": 0.05
        },
        "evaluations": [
            [[10.0, 20.0], [30.0, 5.0]],
            [[15.0, 15.0], [1.0, 40.0]],
            [[25.0, 2.0], [12.0, 18.0]]
        ],
        "costs": [50.0, 60.0, 40.0],
        "budgets": [100.0, 60.0],
        "weights": [0.6, 0.4],
        "stakeholders": {
            "members": [item("p"), item("q")],
            "criterion_weights": [[0.9, 0.1], [0.2, 0.8]],
            "planner_weights": [0.5, 0.5]
        }
    })
}

#[test]
fn solve_prints_the_weighted_optimum() {
    let out = stdout(&stplan(&["solve", &path("council.json")]));
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .take(6)
        .map(|l| l.split_whitespace().collect())
        .collect();
    let got: Vec<(&str, &str, &str)> = rows.iter().map(|r| (r[0], r[r.len() - 2], r[r.len() - 1])).collect();
    assert_eq!(
        got,
        [
            ("F1", "north", "2"),
            ("F3", "south", "0"),
            ("F4", "north", "0"),
            ("F5", "south", "0"),
            ("F6", "south", "3"),
            ("F7", "north", "1"),
        ]
    );
    assert!(out.contains("value: 771.547180706"));
}

#[test]
fn solve_json_output() {
    let out = stdout(&stplan(&["solve", &path("council.json"), "--json"]));
    let r: SolveOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(r.strategy.unwrap(), weighted_optimum());
    assert_eq!(r.warnings.len(), 2);

    let out = stdout(&stplan(&[
        "solve",
        &path("council.json"),
        "--objective",
        "cpl",
        "--json",
    ]));
    let r: SolveOutput = serde_json::from_str(&out).unwrap();
    assert!((r.value - 0.4927793417).abs() < 1e-9);
    assert_eq!(r.compromise.unwrap().members.len(), 2);

    let out = stdout(&stplan(&["solve", &path("council.json"), "--continuous", "--json"]));
    let r: SolveOutput = serde_json::from_str(&out).unwrap();
    assert!(r.strategy.is_none());
    assert!((r.value - 67931.5710240855).abs() < 1e-6);
}

#[test]
fn empty_budget_gives_the_empty_strategy() {
    let out = stdout(&stplan(&["solve", &path("empty-budget.json")]));
    assert!(out.contains("(no activations)"));
    assert!(out.contains("value: 0\n"));
}

#[test]
fn expected_solve_builds_housing_early() {
    let out = stdout(&stplan(&["solve", &path("council.json"), "--expected", "--json"]));
    let r: SolveOutput = serde_json::from_str(&out).unwrap();
    assert!((r.value - 787.0439).abs() < 1e-3);
    let housing = r.activations.iter().find(|a| a.facility == "F8").unwrap();
    assert!(housing.period <= 1);
}

#[test]
fn errors_are_json_on_stderr() {
    let e = error(&stplan(&["solve", "no-such-file.json"]));
    assert_eq!(e.code, "io_error");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut v = small_instance();
    v["weights"] = json!([0.6, 0.6]);
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = stplan(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = error(&o);
    assert_eq!(e.code, "validation_error");
    assert_eq!(e.pointer, "/weights");

    let o = stplan(&["solve", &path("council.json"), "--objective", "best"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error(&o).code, "usage_error");

    let e = error(&stplan(&[
        "solve",
        &path("council.json"),
        "--continuous",
        "--objective",
        "cpo",
    ]));
    assert_eq!(e.code, "usage_error");
    let e = error(&stplan(&["imo", &path("empty-budget.json")]));
    assert_eq!(e.code, "usage_error");
}

#[test]
fn help_exits_cleanly() {
    let o = stplan(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("solve"));
}

#[test]
fn check_prints_the_canonical_file() {
    let o = stplan(&["check", &path("council.json")]);
    assert_eq!(stdout(&o), fixture_text("council.json"));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 2);
}

#[test]
fn dashboard_to_stdout_and_directory() {
    let strategy = path("council-optimum.strategy.json");
    let out = stdout(&stplan(&["dashboard", &path("council.json"), "--strategy", &strategy]));
    assert!(out.starts_with("table,facility,criterion,location,period,stakeholder,value\n"));
    let overall: Vec<&str> = out.lines().filter(|l| l.starts_with("yhat,")).collect();
    assert_eq!(overall.len(), 1);
    let v: f64 = overall[0].rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - 771.5471807067).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&stplan(&[
        "dashboard",
        &path("council.json"),
        "--strategy",
        &strategy,
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]));
    let written: Vec<&str> = out.lines().collect();
    assert!(written.len() > 30);
    assert!(dir.path().join("yhat_LT.csv").exists());
}

#[test]
fn solve_out_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    stdout(&stplan(&[
        "solve",
        &path("council.json"),
        "--out",
        csv.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("y^K,")));
}

#[test]
fn oracle_on_a_small_instance() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.json");
    std::fs::write(&file, small_instance().to_string()).unwrap();
    let out = stdout(&stplan(&["oracle", file.to_str().unwrap()]));
    let names: Vec<&str> = out.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["overall", "cpl", "cpo", "cpol", "cpk"]);
    assert!(out.lines().all(|l| l.ends_with("same strategy: true")));
}

#[test]
fn imo_prints_the_first_sample_and_replays_journals() {
    let view: SessionView = serde_json::from_str(&stdout(&stplan(&["imo", &path("council.json")]))).unwrap();
    assert_eq!(view.sample.len(), 6);
    assert_eq!(view.objectives.len(), 6);

    let wb = council();
    let mut s = commands::start_session(&wb, Formulation::Location, 6).unwrap();
    assert_eq!(s.view(), view);
    let labels: BTreeMap<String, Label> = [(s.sample()[0].id.clone(), Label::Good)].into();
    s.submit_labels(labels).unwrap();
    let rule = s.rules()[0].id.clone();
    s.choose_rule(&rule).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("journal.json");
    std::fs::write(&journal, serde_json::to_string(&s.journal()).unwrap()).unwrap();
    let out = stdout(&stplan(&[
        "imo",
        &path("council.json"),
        "--journal",
        journal.to_str().unwrap(),
    ]));
    let replayed: SessionView = serde_json::from_str(&out).unwrap();
    assert_eq!(replayed, s.view());

    std::fs::write(&journal, "{\"formulation\": \"location\"}").unwrap();
    let e = error(&stplan(&[
        "imo",
        &path("council.json"),
        "--journal",
        journal.to_str().unwrap(),
    ]));
    assert_eq!(e.code, "parse_error");
}
