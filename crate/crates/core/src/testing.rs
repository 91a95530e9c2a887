use crate::instance::{validate_instance, Activation, Item, ProblemInstance, RawInstance, Strategy};

const ROWS: [(&str, [f64; 7]); 8] = [
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

/// Parses 1-based `(facility, location, period)` triples.
pub fn strategy(triples: &[(usize, usize, usize)]) -> Strategy {
    triples
        .iter()
        .map(|&(i, l, t)| Activation::new(i - 1, l - 1, t))
        .collect()
}

pub fn weighted_optimum() -> Strategy {
    strategy(&[(1, 1, 2), (3, 2, 0), (4, 1, 0), (5, 2, 0), (6, 2, 3), (7, 1, 1)])
}
