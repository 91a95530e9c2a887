#![allow(dead_code)]

use std::path::PathBuf;

use stplan_core::{Activation, Strategy};
use stplan_service::{load_instance, Workbench};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn council() -> Workbench {
    load_instance(fixture("council.json")).unwrap()
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
