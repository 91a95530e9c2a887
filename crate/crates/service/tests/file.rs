mod common;

use common::*;
use proptest::prelude::*;
use serde_json::{json, Value};
use stplan_service::{parse_instance, InstanceFile, ServiceError, Workbench};

fn council_json() -> Value {
    serde_json::from_str(&fixture_text("council.json")).unwrap()
}

fn error_of(v: &Value) -> ServiceError {
    parse_instance(&v.to_string()).unwrap_err()
}

#[test]
fn fixtures_are_canonical() {
    for name in ["council.json", "empty-budget.json"] {
        let text = fixture_text(name);
        assert_eq!(parse_instance(&text).unwrap().to_json(), text, "{name}");
    }
}

#[test]
fn council_fixture_contents() {
    let wb = council();
    assert_eq!(wb.instance.num_facilities(), 8);
    assert_eq!(wb.instance.horizon(), 5);
    assert_eq!(wb.trees.len(), 2);
    assert_eq!(wb.tree_tolerance, 1e-3);
    assert_eq!(wb.stakeholders.as_ref().unwrap().stakeholders().len(), 3);
    assert_eq!(wb.thresholds.as_ref().unwrap().labels().len(), 4);
    // two printed maxima above their period budget
    assert_eq!(wb.warnings.len(), 2);
    assert!(wb.warnings[0].contains("/continuous/facility_max/1/1"));
}

#[test]
fn unknown_keys_are_rejected_with_a_pointer() {
    let mut v = council_json();
    v["meta"]["colour"] = json!("red");
    match error_of(&v) {
        ServiceError::Parse { pointer, message } => {
            assert_eq!(pointer, "/meta/colour");
            assert!(message.contains("colour"));
        }
        e => panic!("{e:?}"),
    }
    let mut v = council_json();
    v["uncertainty"]["trees"][0]["root"]["extra"] = json!(1);
    let e = error_of(&v);
    assert_eq!(e.code(), "parse_error");
    assert_eq!(e.body().pointer, "/uncertainty/trees/0/root/extra");
}

#[test]
fn validation_errors_point_into_the_file() {
    let mut v = council_json();
    v["weights"] = json!([0.5, 0.3, 0.1]);
    let e = error_of(&v);
    assert_eq!(e.code(), "validation_error");
    assert_eq!(e.status(), 422);
    assert_eq!(e.body().pointer, "/weights");

    let mut v = council_json();
    v["meta"]["facilities"][1]["id"] = json!("F1");
    assert_eq!(error_of(&v).body().pointer, "/meta/facilities/1/id");

    let mut v = council_json();
    v["continuous"]["facility_max"][0] = json!([null, null]);
    assert_eq!(error_of(&v).body().pointer, "/continuous/facility_max/0");

    let mut v = council_json();
    v["uncertainty"]["trees"][1]["root"]["children"][0]["probability"] = json!(0.5);
    let body = error_of(&v).body();
    assert!(
        body.pointer.starts_with("/uncertainty/trees/1/root"),
        "{}",
        body.pointer
    );

    let mut v = council_json();
    v["stakeholders"]["planner_weights"] = json!([0.5, 0.5, 0.5]);
    assert_eq!(error_of(&v).code(), "validation_error");

    let mut v = council_json();
    v["thresholds"]["values"][0][0] = json!([35.0, 20.0, 55.0]);
    assert_eq!(error_of(&v).code(), "validation_error");
}

#[test]
fn every_error_is_collected() {
    let mut v = council_json();
    v["weights"] = json!([0.5, 0.3, 0.1]);
    v["costs"][0] = json!(-1.0);
    let body = error_of(&v).body();
    assert!(body.errors.len() >= 2, "{:?}", body.errors);
}

#[test]
fn trailing_garbage_is_a_parse_error() {
    let text = fixture_text("empty-budget.json") + "{}";
    assert_eq!(parse_instance(&text).unwrap_err().code(), "parse_error");
}

#[test]
fn optional_blocks_may_be_left_out() {
    let wb = parse_instance(&fixture_text("empty-budget.json")).unwrap();
    assert!(wb.bounds.is_none() && wb.trees.is_empty() && wb.stakeholders.is_none() && wb.thresholds.is_none());
    let file: InstanceFile = serde_json::from_str(&wb.to_json()).unwrap();
    assert!(file.continuous.is_none() && file.uncertainty.is_none());
}

fn rewrite(wb: &Workbench, evals: &[u32], costs: &[u32], budgets: &[u32], rate: u32) -> Workbench {
    let mut file = wb.to_file();
    for (i, row) in file.evaluations.iter_mut().enumerate() {
        for (j, per_loc) in row.iter_mut().enumerate() {
            for (l, v) in per_loc.iter_mut().enumerate() {
                *v = evals[(i * 3 + j) * 2 + l] as f64 / 7.0;
            }
        }
    }
    file.costs = costs.iter().map(|&c| c as f64 / 3.0).collect();
    file.budgets = budgets.iter().map(|&b| b as f64).collect();
    file.meta.interest_rate = rate as f64 / 1000.0;
    file.thresholds = None;
    Workbench::from_file(file).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_exact(
        evals in prop::collection::vec(0u32..1000, 48),
        costs in prop::collection::vec(1u32..1000, 8),
        budgets in prop::collection::vec(0u32..500, 5),
        rate in 0u32..300,
    ) {
        let wb = rewrite(&council(), &evals, &costs, &budgets, rate);
        let text = wb.to_json();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &wb);
        prop_assert_eq!(back.to_json(), text);
    }
}
