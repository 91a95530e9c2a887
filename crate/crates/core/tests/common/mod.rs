#![allow(dead_code)]

use stplan_core::dashboard::StakeholderSet;
use stplan_core::imo::{Boundary, ThresholdScheme};
use stplan_core::uncertainty::{ScenarioNode, ScenarioTree, Scope};
use stplan_core::{validate_instance, Activation, Item, ProblemInstance, RawInstance, Strategy};

pub const ROWS: [(&str, [f64; 7]); 8] = [
    ("School", [21.0, 23.0, 90.0, 80.0, 23.0, 32.0, 200.0]),
    ("Leisure Centre", [36.0, 46.0, 59.0, 72.0, 36.0, 34.0, 300.0]),
    ("Council Offices", [18.0, 20.0, 22.0, 30.0, 21.0, 26.0, 150.0]),
    ("Recycling Centre", [60.0, 65.0, 71.0, 60.0, 90.0, 88.0, 100.0]),
    ("Start-Up Incubator", [80.0, 82.0, 12.0, 12.0, 15.0, 12.0, 150.0]),
    ("Healthcare Centre", [20.0, 18.0, 19.0, 19.0, 45.0, 59.0, 200.0]),
    ("Community Centre", [35.0, 31.0, 56.0, 48.0, 33.0, 40.0, 100.0]),
    ("Social Housing", [12.0, 21.0, 69.0, 73.0, 18.0, 17.0, 250.0]),
];

pub fn council_raw() -> RawInstance {
    RawInstance {
        facilities: ROWS
            .iter()
            .enumerate()
            .map(|(k, (name, _))| Item::new(format!("F{}", k + 1), *name))
            .collect(),
        locations: vec![Item::new("north", "North"), Item::new("south", "South")],
        criteria: vec![
            Item::new("econ", "Economic"),
            Item::new("social", "Social"),
            Item::new("env", "Environmental"),
        ],
        horizon: 5,
        evaluations: ROWS
            .iter()
            .map(|(_, r)| vec![vec![r[0], r[1]], vec![r[2], r[3]], vec![r[4], r[5]]])
            .collect(),
        costs: ROWS.iter().map(|(_, r)| r[6]).collect(),
        budgets: vec![400.0, 100.0, 200.0, 200.0, 150.0],
        weights: vec![0.5, 0.3, 0.2],
        interest_rate: 0.1,
        precedence: Vec::new(),
    }
}

pub fn council() -> ProblemInstance {
    validate_instance(council_raw()).unwrap()
}

/// 1-based `(facility, location, period)` triples.
pub fn strategy(triples: &[(usize, usize, usize)]) -> Strategy {
    triples
        .iter()
        .map(|&(i, l, t)| Activation::new(i - 1, l - 1, t))
        .collect()
}

pub fn weighted_optimum() -> Strategy {
    strategy(&[(1, 1, 2), (3, 2, 0), (4, 1, 0), (5, 2, 0), (6, 2, 3), (7, 1, 1)])
}

pub fn satisfaction_labels() -> Vec<String> {
    [
        "weakly satisfactory",
        "satisfactory",
        "very satisfactory",
        "extremely satisfactory",
    ]
    .map(String::from)
    .to_vec()
}

pub fn thresholds(boundary: Boundary) -> ThresholdScheme {
    ThresholdScheme::uniform(satisfaction_labels(), &[20.0, 35.0, 55.0], 3, 2, boundary).unwrap()
}

/// Planning, development and government committees; the government row is
/// rescaled to sum to one.
pub fn stakeholders() -> StakeholderSet {
    StakeholderSet::new(
        vec![
            Item::new("planning", "Planning"),
            Item::new("development", "Development"),
            Item::new("government", "Government"),
        ],
        vec![
            vec![0.1, 0.1, 0.8],
            vec![0.1, 0.2, 0.7],
            vec![0.4 / 1.1, 0.3 / 1.1, 0.4 / 1.1],
        ],
        vec![0.5, 0.4, 0.1],
        3,
    )
    .unwrap()
}

/// Per-period (max, min) budget bounds of each facility, `None` if absent.
pub const FACILITY_BOUNDS: [[(Option<f64>, Option<f64>); 5]; 8] = [
    [
        (None, Some(10.0)),
        (Some(50.0), None),
        (None, Some(5.0)),
        (Some(20.0), None),
        (None, None),
    ],
    [
        (Some(70.0), Some(20.0)),
        (Some(150.0), Some(5.0)),
        (Some(10.0), Some(10.0)),
        (None, None),
        (None, Some(16.0)),
    ],
    [
        (None, None),
        (None, Some(3.0)),
        (Some(8.0), Some(8.0)),
        (None, None),
        (None, None),
    ],
    [
        (Some(32.0), Some(16.0)),
        (None, None),
        (None, None),
        (Some(2.0), Some(2.0)),
        (Some(260.0), Some(5.0)),
    ],
    [
        (None, None),
        (Some(70.0), Some(5.0)),
        (Some(140.0), Some(10.0)),
        (None, Some(2.0)),
        (Some(14.0), None),
    ],
    [
        (None, Some(8.0)),
        (None, None),
        (None, Some(4.0)),
        (None, None),
        (None, Some(2.0)),
    ],
    [
        (Some(30.0), None),
        (None, Some(5.0)),
        (None, None),
        (Some(10.0), Some(1.0)),
        (Some(16.0), Some(14.0)),
    ],
    [
        (None, Some(16.0)),
        (Some(60.0), None),
        (Some(180.0), Some(10.0)),
        (None, None),
        (None, None),
    ],
];

pub const LOCATION_BOUNDS: [[(Option<f64>, Option<f64>); 5]; 2] = [
    [
        (Some(65.0), Some(6.0)),
        (None, Some(2.0)),
        (None, None),
        (Some(4.0), Some(4.0)),
        (Some(13.0), Some(10.0)),
    ],
    [
        (Some(21.0), Some(3.0)),
        (Some(10.0), Some(7.0)),
        (Some(6.0), Some(6.0)),
        (Some(20.0), Some(5.0)),
        (None, None),
    ],
];

pub fn budget_bounds() -> stplan_core::lp::BudgetBounds {
    let mut b = stplan_core::lp::BudgetBounds::default();
    for (i, row) in FACILITY_BOUNDS.iter().enumerate() {
        for (t, &(max, min)) in row.iter().enumerate() {
            if let Some(v) = max {
                b.facility_max.insert((i, t), v);
            }
            if let Some(v) = min {
                b.facility_min.insert((i, t), v);
            }
        }
    }
    for (l, row) in LOCATION_BOUNDS.iter().enumerate() {
        for (t, &(max, min)) in row.iter().enumerate() {
            if let Some(v) = max {
                b.location_max.insert((l, t), v);
            }
            if let Some(v) = min {
                b.location_min.insert((l, t), v);
            }
        }
    }
    b
}

/// The printed continuous allocation, 1-based `(i, l, t, amount)`.
pub const PRINTED_ALLOCATION: [(usize, usize, usize, f64); 28] = [
    (1, 1, 0, 10.0),
    (1, 1, 2, 5.0),
    (2, 2, 0, 20.0),
    (2, 2, 1, 5.0),
    (2, 2, 2, 10.0),
    (2, 2, 3, 195.0),
    (2, 2, 4, 16.0),
    (3, 2, 1, 3.0),
    (3, 2, 2, 8.0),
    (4, 1, 0, 32.0),
    (4, 1, 1, 82.0),
    (4, 1, 2, 153.0),
    (4, 1, 3, 2.0),
    (4, 1, 4, 118.0),
    (5, 1, 1, 3.0),
    (5, 1, 3, 1.0),
    (5, 2, 1, 2.0),
    (5, 2, 2, 10.0),
    (5, 2, 3, 1.0),
    (6, 1, 0, 8.0),
    (6, 2, 2, 4.0),
    (6, 2, 4, 2.0),
    (7, 1, 1, 5.0),
    (7, 1, 3, 1.0),
    (7, 1, 4, 14.0),
    (8, 1, 0, 15.0),
    (8, 2, 0, 1.0),
    (8, 2, 2, 10.0),
];

pub fn printed_allocation(inst: &ProblemInstance) -> stplan_core::lp::BudgetAllocation {
    let entries: Vec<_> = PRINTED_ALLOCATION
        .iter()
        .map(|&(i, l, t, v)| (i - 1, l - 1, t, v))
        .collect();
    stplan_core::lp::BudgetAllocation::from_entries(inst, &entries).unwrap()
}

/// Final-period states of the social housing economic evaluation, in tree
/// order: path probability, performance North, performance South.
pub const HOUSING_STATES: [(f64, f64, f64); 32] = [
    (0.0234, 76.0, 89.0),
    (0.0702, 64.0, 92.0),
    (0.01872, 96.0, 84.0),
    (0.04368, 78.0, 95.0),
    (0.0364, 81.0, 78.0),
    (0.1456, 86.0, 93.0),
    (0.1092, 66.0, 17.0),
    (0.0728, 69.0, 99.0),
    (0.00819, 78.0, 96.0),
    (0.04641, 64.0, 88.0),
    (0.01764, 81.0, 12.0),
    (0.01176, 67.0, 78.0),
    (0.0196, 90.0, 69.0),
    (0.0784, 81.0, 87.0),
    (0.049, 67.0, 79.0),
    (0.049, 95.0, 94.0),
    (0.00612, 39.0, 15.0),
    (0.02448, 68.0, 92.0),
    (0.00162, 76.0, 15.0),
    (0.00378, 26.0, 77.0),
    (0.0084, 80.0, 69.0),
    (0.0336, 70.0, 67.0),
    (0.0252, 94.0, 93.0),
    (0.0168, 43.0, 12.0),
    (0.00432, 62.0, 75.0),
    (0.01008, 44.0, 88.0),
    (0.00384, 65.0, 77.0),
    (0.00576, 26.0, 10.0),
    (0.00448, 66.0, 48.0),
    (0.01792, 51.0, 87.0),
    (0.01176, 42.0, 15.0),
    (0.02184, 41.0, 96.0),
];

/// Complete binary tree of depth 5 over [`HOUSING_STATES`]. Conditional
/// probabilities come from leaf sums; inner states carry the conditional
/// mean of their leaves.
pub fn housing_tree(location: usize) -> ScenarioTree {
    fn build(states: &[(f64, f64)], parent: f64, path: &mut Vec<usize>) -> ScenarioNode {
        let mass: f64 = states.iter().map(|s| s.0).sum();
        let mean = match states {
            [(_, y)] => *y,
            _ => states.iter().map(|s| s.0 * s.1).sum::<f64>() / mass,
        };
        let label = std::iter::once(path.len())
            .chain(path.iter().copied())
            .map(|h| h.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let node = ScenarioNode::leaf(format!("s({label})"), mass / parent, mean);
        if states.len() == 1 {
            return node;
        }
        let (a, b) = states.split_at(states.len() / 2);
        let mut children = Vec::new();
        for (h, half) in [a, b].into_iter().enumerate() {
            path.push(h + 1);
            children.push(build(half, mass, path));
            path.pop();
        }
        node.with_children(children)
    }
    let states: Vec<(f64, f64)> = HOUSING_STATES
        .iter()
        .map(|&(p, n, s)| (p, if location == 0 { n } else { s }))
        .collect();
    let mut root = build(&states, 1.0, &mut Vec::new());
    root.probability = 1.0;
    ScenarioTree::new(
        Scope {
            facility: 7,
            criterion: 0,
            location,
        },
        root,
    )
}

/// Any strategy on the council dimensions, feasible or not.
pub fn any_strategy() -> impl proptest::strategy::Strategy<Value = Strategy> {
    use proptest::prelude::*;
    prop::collection::vec(prop::option::of((0usize..2, 0usize..5)), 8).prop_map(|choice| {
        choice
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|(l, t)| Activation::new(i, l, t)))
            .collect()
    })
}
