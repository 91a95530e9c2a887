mod common;

use common::*;
use proptest::prelude::*;
use stplan_core::lp::*;
use stplan_core::{validate_instance, Error, Item, ProblemInstance, RawInstance};

#[derive(Debug, Clone)]
struct Case {
    n: usize,
    p: usize,
    evals: Vec<u32>,
    budgets: Vec<u32>,
    rate: u32,
    /// (kind, index, period, value); kind 0..4 = facility max/min, location max/min
    bounds: Vec<(u8, usize, usize, u32)>,
}

fn cases() -> impl proptest::strategy::Strategy<Value = Case> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(n, p)| {
        (
            prop::collection::vec(0u32..100, n * 2 * 2),
            prop::collection::vec(0u32..200, p),
            0u32..25,
            prop::collection::vec((0u8..4, 0usize..3, 0usize..3, 0u32..120), 0..6),
        )
            .prop_map(move |(evals, budgets, rate, bounds)| Case {
                n,
                p,
                evals,
                budgets,
                rate,
                bounds,
            })
    })
}

fn instance(c: &Case) -> ProblemInstance {
    let raw = RawInstance {
        facilities: (0..c.n).map(|i| Item::new(format!("f{i}"), format!("F{i}"))).collect(),
        locations: vec![Item::new("a", "A"), Item::new("b", "B")],
        criteria: vec![Item::new("x", "X"), Item::new("y", "Y")],
        horizon: c.p,
        evaluations: (0..c.n)
            .map(|i| {
                (0..2)
                    .map(|j| (0..2).map(|l| c.evals[(i * 2 + j) * 2 + l] as f64).collect())
                    .collect()
            })
            .collect(),
        costs: vec![1.0; c.n],
        budgets: c.budgets.iter().map(|&b| b as f64).collect(),
        weights: vec![0.75, 0.25],
        interest_rate: c.rate as f64 / 100.0,
        precedence: Vec::new(),
    };
    validate_instance(raw).unwrap()
}

/// Bounds of `c` that are in range and ordered; the rest are dropped.
fn bounds(c: &Case) -> BudgetBounds {
    let mut b = BudgetBounds::default();
    for &(kind, idx, t, v) in &c.bounds {
        let (idx, t, v) = (idx, t % c.p, v as f64);
        match kind {
            0 if idx < c.n => {
                b.facility_max.insert((idx, t), v.min(c.budgets[t] as f64));
            }
            1 if idx < c.n => {
                b.facility_min.insert((idx, t), v / 4.0);
            }
            2 if idx < 2 => {
                b.location_max.insert((idx, t), v.min(c.budgets[t] as f64));
            }
            3 if idx < 2 => {
                b.location_min.insert((idx, t), v / 4.0);
            }
            _ => {}
        }
    }
    let fix = |max: &BTreeMapF, min: &mut BTreeMapF| {
        for (k, v) in min.iter_mut() {
            if let Some(&m) = max.get(k) {
                *v = v.min(m);
            }
        }
    };
    fix(&b.facility_max.clone(), &mut b.facility_min);
    fix(&b.location_max.clone(), &mut b.location_min);
    b
}

type BTreeMapF = std::collections::BTreeMap<(usize, usize), f64>;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_equals_whole_program(c in cases()) {
        let inst = instance(&c);
        let program = build_program(&inst, &bounds(&c)).unwrap();
        match (solve_lp(&program), solve_whole(&program)) {
            (Ok(a), Ok(b)) => {
                prop_assert!(close(a.objective_value, b.objective_value), "{} vs {}", a.objective_value, b.objective_value);
                prop_assert!(check_allocation(&inst, &bounds(&c), &a.allocation).feasible);
                prop_assert!(check_allocation(&inst, &bounds(&c), &b.allocation).feasible);
            }
            (Err(Error::Infeasible), Err(Error::Infeasible)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|o| o.objective_value), b.map(|o| o.objective_value)),
        }
    }

    #[test]
    fn larger_budget_never_hurts(c in cases(), extra in 1u32..100, period in 0usize..3) {
        let inst = instance(&c);
        let b = bounds(&c);
        let Ok(base) = solve_lp(&build_program(&inst, &b).unwrap()) else { return Ok(()) };
        let mut richer = c.clone();
        richer.budgets[period % c.p] += extra;
        let rich = solve_lp(&build_program(&instance(&richer), &b).unwrap()).unwrap();
        prop_assert!(rich.objective_value >= base.objective_value - 1e-9);
    }

    #[test]
    fn raising_a_minimum_never_helps(c in cases(), i in 0usize..3, t in 0usize..3, v in 0u32..50) {
        let inst = instance(&c);
        let b = bounds(&c);
        let Ok(base) = solve_lp(&build_program(&inst, &b).unwrap()) else { return Ok(()) };
        let mut tighter = b.clone();
        let key = (i % c.n, t % c.p);
        let old = tighter.facility_min.get(&key).copied().unwrap_or(0.0);
        let new = old + v as f64;
        if tighter.facility_max.get(&key).is_some_and(|&m| m < new) {
            return Ok(());
        }
        tighter.facility_min.insert(key, new);
        if let Ok(r) = solve_lp(&build_program(&inst, &tighter).unwrap()) {
            prop_assert!(r.objective_value <= base.objective_value + 1e-9);
        }
    }
}

#[test]
fn random_feasible_points_never_beat_the_solver() {
    use proptest::test_runner::{Config, TestRunner};
    let inst = council();
    // maxima only, so rejection sampling finds feasible points
    let mut b = budget_bounds();
    b.facility_min.clear();
    b.location_min.clear();
    let best = solve_lp(&build_program(&inst, &b).unwrap()).unwrap();
    let program = build_program(&inst, &b).unwrap();
    let gen = prop::collection::vec(0.0f64..1.0, 80);
    let mut runner = TestRunner::new(Config::with_cases(4000));
    let feasible = std::cell::Cell::new(0);
    runner
        .run(&gen, |u| {
            let mut a = BudgetAllocation::zeros(&inst);
            for i in 0..8 {
                for l in 0..2 {
                    for t in 0..5 {
                        // proposal box from the maxima, scaled up so some samples are rejected
                        let cap = [
                            b.facility_max.get(&(i, t)).map_or(f64::INFINITY, |v| v / 2.0),
                            b.location_max.get(&(l, t)).map_or(f64::INFINITY, |v| v / 8.0),
                            inst.budget(t) / 16.0,
                        ]
                        .into_iter()
                        .fold(f64::INFINITY, f64::min);
                        a.set(i, l, t, 1.2 * u[(i * 2 + l) * 5 + t] * cap);
                    }
                }
            }
            if check_allocation(&inst, &b, &a).feasible {
                feasible.set(feasible.get() + 1);
                prop_assert!(program.value(&a) <= best.objective_value + 1e-9);
            }
            Ok(())
        })
        .unwrap();
    assert!(feasible.get() >= 100, "only {} feasible samples", feasible.get());
}

#[test]
fn council_allocation_and_printed_one() {
    let inst = council();
    let b = budget_bounds();
    let warnings = b.validate(&inst).unwrap();
    // two printed maxima exceed their period budget
    assert_eq!(warnings.len(), 2);
    let program = build_program(&inst, &b).unwrap();
    assert_eq!(program.num_vars(), 80);
    let r = solve_lp(&program).unwrap();
    assert!(check_allocation(&inst, &b, &r.allocation).feasible);
    let whole = solve_whole(&program).unwrap();
    assert!(close(whole.objective_value, r.objective_value));

    // the printed allocation overspends three location maxima, which is why
    // it scores above every feasible allocation
    let printed = printed_allocation(&inst);
    let report = check_allocation(&inst, &b, &printed);
    let broken: Vec<(Option<usize>, Option<usize>)> =
        report.violations.iter().map(|v| (v.location, v.period)).collect();
    assert_eq!(broken, [(Some(1), Some(2)), (Some(1), Some(3)), (Some(0), Some(4))]);
    assert!(program.value(&printed) > r.objective_value);
    let mut relaxed = b.clone();
    for (l, t) in [(1, 2), (1, 3), (0, 4)] {
        relaxed.location_max.remove(&(l, t));
    }
    assert!(check_allocation(&inst, &relaxed, &printed).feasible);
    let rr = solve_lp(&build_program(&inst, &relaxed).unwrap()).unwrap();
    assert!(rr.objective_value >= program.value(&printed) - 1e-9);
}

#[test]
fn minimum_above_budget_is_infeasible() {
    let inst = council();
    let mut b = BudgetBounds::default();
    b.facility_min.insert((0, 1), 150.0);
    b.facility_min.insert((1, 1), 150.0);
    assert!(matches!(
        solve_lp(&build_program(&inst, &b).unwrap()),
        Err(Error::Infeasible)
    ));
}
