//! Dense bounded-variable primal simplex with Bland's rule.
//!
//! Variables live in `[0, upper]` (`upper` may be infinite). Every row gets a
//! slack where needed and an artificial variable; phase one drives the
//! artificials to zero, phase two fixes them at zero and optimizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coefficients: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

/// `maximize objective . x` subject to `rows` and `0 <= x <= upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            objective: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coefficients: Vec<(usize, f64)>, kind: RowKind, rhs: f64) {
        self.rows.push(Row {
            coefficients,
            kind,
            rhs,
        });
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

struct Tableau {
    /// `B^-1 A`, one row per constraint.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    x: Vec<f64>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
    iterations: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Tableau {
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (r, row) in self.a.iter().enumerate() {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (dj, arj) in d.iter_mut().zip(row) {
                    *dj -= cb * arj;
                }
            }
        }
        d
    }

    fn step(&mut self, cost: &[f64]) -> Step {
        let d = self.reduced_costs(cost);
        let entering = (0..self.x.len()).find(|&j| {
            !self.is_basic[j]
                && self.upper[j] > 0.0
                && ((!self.at_upper[j] && d[j] > EPS) || (self.at_upper[j] && d[j] < -EPS))
        });
        let Some(j) = entering else {
            return Step::Optimal;
        };
        let dir = if self.at_upper[j] { -1.0 } else { 1.0 };

        // (step length, leaving row or None for a bound flip, leaving goes to upper)
        let mut best: Option<(f64, Option<usize>, bool)> = None;
        if self.upper[j].is_finite() {
            best = Some((self.upper[j], None, false));
        }
        for (r, row) in self.a.iter().enumerate() {
            let alpha = row[j] * dir;
            let b = self.basis[r];
            let candidate = if alpha > EPS {
                Some(((self.x[b]).max(0.0) / alpha, false))
            } else if alpha < -EPS && self.upper[b].is_finite() {
                Some(((self.upper[b] - self.x[b]).max(0.0) / -alpha, true))
            } else {
                None
            };
            if let Some((theta, to_upper)) = candidate {
                let replace = match best {
                    None => true,
                    Some((t, leaving, _)) => {
                        theta < t - EPS || (theta <= t + EPS && leaving.is_some_and(|lr| b < self.basis[lr]))
                    }
                };
                if replace {
                    best = Some((theta, Some(r), to_upper));
                }
            }
        }
        let Some((theta, leaving, to_upper)) = best else {
            return Step::Unbounded;
        };
        self.iterations += 1;

        self.x[j] += dir * theta;
        for r in 0..self.a.len() {
            let b = self.basis[r];
            self.x[b] -= self.a[r][j] * dir * theta;
        }
        match leaving {
            None => {
                self.at_upper[j] = !self.at_upper[j];
                self.x[j] = if self.at_upper[j] { self.upper[j] } else { 0.0 };
            }
            Some(r) => {
                let b = self.basis[r];
                self.x[b] = if to_upper { self.upper[b] } else { 0.0 };
                self.at_upper[b] = to_upper;
                self.is_basic[b] = false;
                self.is_basic[j] = true;
                self.at_upper[j] = false;
                self.basis[r] = j;
                self.pivot(r, j);
            }
        }
        Step::Moved
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.a[r][j];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[r].clone();
        for (k, row) in self.a.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let f = row[j];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                    if v.abs() < 1e-13 {
                        *v = 0.0;
                    }
                }
                row[j] = 0.0;
            }
        }
    }

    fn run(&mut self, cost: &[f64]) -> Result<()> {
        let limit = 50 * (self.x.len() + self.a.len()) + 1000;
        for _ in 0..limit {
            match self.step(cost) {
                Step::Optimal => return Ok(()),
                Step::Unbounded => return Err(Error::Unbounded),
                Step::Moved => {}
            }
        }
        Err(Error::IterationLimit)
    }
}

/// Solves `lp` to optimality, returning a vertex solution.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    let m = lp.rows.len();
    let num_slack = lp.rows.iter().filter(|r| r.kind != RowKind::Eq).count();
    let total = n + num_slack + m;
    let mut a = vec![vec![0.0; total]; m];
    let mut upper = lp.upper.clone();
    upper.resize(total, f64::INFINITY);
    let mut x = vec![0.0; total];
    let mut basis = Vec::with_capacity(m);

    let mut slack = n;
    for (r, row) in lp.rows.iter().enumerate() {
        for &(j, c) in &row.coefficients {
            a[r][j] += c;
        }
        match row.kind {
            RowKind::Le => {
                a[r][slack] = 1.0;
                slack += 1;
            }
            RowKind::Ge => {
                a[r][slack] = -1.0;
                slack += 1;
            }
            RowKind::Eq => {}
        }
        let mut rhs = row.rhs;
        if rhs < 0.0 {
            for v in a[r].iter_mut() {
                *v = -*v;
            }
            rhs = -rhs;
        }
        let art = n + num_slack + r;
        a[r][art] = 1.0;
        x[art] = rhs;
        basis.push(art);
    }
    let mut is_basic = vec![false; total];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut t = Tableau {
        a,
        basis,
        x,
        upper,
        at_upper: vec![false; total],
        is_basic,
        iterations: 0,
    };

    let mut phase_one = vec![0.0; total];
    for c in &mut phase_one[n + num_slack..] {
        *c = -1.0;
    }
    t.run(&phase_one)?;
    let infeasibility: f64 = t.x[n + num_slack..].iter().sum();
    if infeasibility > FEASIBILITY_TOL {
        return Err(Error::Infeasible);
    }
    for k in n + num_slack..total {
        t.upper[k] = 0.0;
        t.x[k] = 0.0;
    }

    let mut phase_two = lp.objective.clone();
    phase_two.resize(total, 0.0);
    t.run(&phase_two)?;

    let mut sol: Vec<f64> = t.x[..n].to_vec();
    for (v, u) in sol.iter_mut().zip(&lp.upper) {
        if v.abs() < 1e-12 {
            *v = 0.0;
        }
        *v = v.clamp(0.0, *u);
    }
    Ok(LpSolution {
        objective: lp.value(&sol),
        x: sol,
        iterations: t.iterations,
    })
}
