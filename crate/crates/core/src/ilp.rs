//! Exact solver for 0-1 integer linear programs.
//!
//! Problems maximize a linear objective over binary variables subject to
//! linear `<=`, `=` and `>=` constraints. [`solve`] runs a depth-first
//! branch-and-bound with interval propagation over the constraints;
//! [`brute_force`] enumerates every assignment and serves as the oracle the
//! solver is checked against.
//!
//! Bound at a node: the objective of the fixed variables plus the positive
//! coefficients of the free ones, tightened by unit-coefficient rows. Free
//! variables sharing an at-most-one row contribute only their largest
//! coefficient, and the groups inside a cardinality row `sum x <= k`
//! contribute only their `k` largest values. Variables are branched in order of
//! descending `|objective coefficient|` (ties by index), trying the value
//! the objective prefers first: `1` for positive coefficients, `0`
//! otherwise. Among equal-valued optima the first one found wins, so the
//! result is deterministic.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for constraint satisfaction and objective comparisons.
pub const TOLERANCE: f64 = 1e-9;

/// Largest problem [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("objective has {got} coefficients for {n_vars} variables")]
    ObjectiveLength { got: usize, n_vars: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
    #[error("constraint `{constraint}` references variable {var} but the problem has {n_vars}")]
    VariableOutOfRange {
        constraint: String,
        var: usize,
        n_vars: usize,
    },
    #[error("constraint `{constraint}` mentions variable {var} twice")]
    DuplicateVariable { constraint: String, var: usize },
    #[error("brute force is limited to {BRUTE_FORCE_MAX_VARS} variables, problem has {0}")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub name: String,
}

impl LinearConstraint {
    pub fn new(name: impl Into<String>, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        LinearConstraint {
            terms,
            sense,
            rhs,
            name: name.into(),
        }
    }

    pub fn lhs(&self, assignment: &[bool]) -> f64 {
        self.terms
            .iter()
            .filter(|(v, _)| assignment[*v])
            .map(|(_, a)| a)
            .sum()
    }

    pub fn holds(&self, lhs: f64) -> bool {
        match self.sense {
            Sense::Le => lhs <= self.rhs + TOLERANCE,
            Sense::Ge => lhs >= self.rhs - TOLERANCE,
            Sense::Eq => (lhs - self.rhs).abs() <= TOLERANCE,
        }
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.holds(self.lhs(assignment))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IlpProblem {
    pub n_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<LinearConstraint>,
}

impl IlpProblem {
    /// A problem with `n_vars` variables, zero objective and no constraints.
    pub fn new(n_vars: usize) -> Self {
        IlpProblem {
            n_vars,
            objective: vec![0.0; n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.constraints
            .push(LinearConstraint::new(name, terms, sense, rhs));
    }

    pub fn check(&self) -> Result<(), SolveError> {
        if self.objective.len() != self.n_vars {
            return Err(SolveError::ObjectiveLength {
                got: self.objective.len(),
                n_vars: self.n_vars,
            });
        }
        if let Some(i) = self.objective.iter().position(|c| !c.is_finite()) {
            return Err(SolveError::NonFinite(format!("objective coefficient {i}")));
        }
        let mut seen = vec![usize::MAX; self.n_vars];
        for (ci, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(SolveError::NonFinite(format!("rhs of `{}`", con.name)));
            }
            for &(var, coef) in &con.terms {
                if var >= self.n_vars {
                    return Err(SolveError::VariableOutOfRange {
                        constraint: con.name.clone(),
                        var,
                        n_vars: self.n_vars,
                    });
                }
                if !coef.is_finite() {
                    return Err(SolveError::NonFinite(format!("`{}`", con.name)));
                }
                if seen[var] == ci {
                    return Err(SolveError::DuplicateVariable {
                        constraint: con.name.clone(),
                        var,
                    });
                }
                seen[var] = ci;
            }
        }
        Ok(())
    }

    pub fn objective_of(&self, assignment: &[bool]) -> f64 {
        self.objective
            .iter()
            .zip(assignment)
            .filter(|(_, &x)| x)
            .map(|(c, _)| c)
            .sum()
    }

    /// Names of the constraints the assignment violates.
    pub fn violations(&self, assignment: &[bool]) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.is_satisfied(assignment))
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn is_feasible(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n_vars && self.constraints.iter().all(|c| c.is_satisfied(assignment))
    }

    /// Plain-text LP-style dump for manual inspection.
    pub fn to_lp_string(&self) -> String {
        fn linear(out: &mut String, terms: impl Iterator<Item = (usize, f64)>) {
            let mut empty = true;
            for (v, c) in terms {
                let sign = if c < 0.0 { '-' } else { '+' };
                let _ = write!(out, " {sign} {} x{v}", c.abs());
                empty = false;
            }
            if empty {
                out.push_str(" 0");
            }
        }

        let mut out = String::from("maximize\n  obj:");
        linear(
            &mut out,
            self.objective
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(v, c)| (v, *c)),
        );
        out.push_str("\nsubject to\n");
        for con in &self.constraints {
            let _ = write!(out, "  {}:", con.name);
            linear(&mut out, con.terms.iter().copied());
            let _ = writeln!(out, " {} {}", con.sense, con.rhs);
        }
        out.push_str("binary\n ");
        for v in 0..self.n_vars {
            let _ = write!(out, " x{v}");
        }
        out.push_str("\nend\n");
        out
    }
}

impl fmt::Display for IlpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_lp_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IlpSolution {
    pub status: Status,
    pub assignment: Option<Vec<bool>>,
    pub objective_value: Option<f64>,
    pub nodes_explored: u64,
}

impl IlpSolution {
    fn from_best(problem: &IlpProblem, best: Option<Vec<bool>>, nodes_explored: u64) -> Self {
        match best {
            Some(assignment) => IlpSolution {
                status: Status::Optimal,
                objective_value: Some(problem.objective_of(&assignment)),
                assignment: Some(assignment),
                nodes_explored,
            },
            None => IlpSolution {
                status: Status::Infeasible,
                assignment: None,
                objective_value: None,
                nodes_explored,
            },
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

const FREE: i8 = -1;

/// Unit-coefficient rows used to tighten the bound. Every positive
/// variable belongs to exactly one item: either an at-most-one group or a
/// singleton. Items lying wholly inside a cardinality row are owned by it.
struct BoundPlan {
    items: Vec<Vec<usize>>,
    /// Owning cardinality row of each item, as an index into `cards`.
    owner: Vec<Option<usize>>,
    /// (constraint index, item indices)
    cards: Vec<(usize, Vec<usize>)>,
}

fn unit_row(con: &LinearConstraint) -> bool {
    matches!(con.sense, Sense::Le | Sense::Eq) && con.terms.iter().all(|&(_, a)| a == 1.0)
}

impl BoundPlan {
    fn new(problem: &IlpProblem) -> Self {
        let n = problem.n_vars;
        let positive = |v: usize| problem.objective[v] > 0.0;
        let mut packing: Vec<usize> = (0..problem.constraints.len())
            .filter(|&ci| {
                let con = &problem.constraints[ci];
                unit_row(con) && con.rhs >= 1.0 - TOLERANCE && con.rhs < 2.0 - TOLERANCE
            })
            .collect();
        packing.sort_by_key(|&ci| std::cmp::Reverse(problem.constraints[ci].terms.len()));

        let mut item_of = vec![usize::MAX; n];
        let mut items: Vec<Vec<usize>> = Vec::new();
        for ci in packing {
            let group: Vec<usize> = problem.constraints[ci]
                .terms
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| positive(v) && item_of[v] == usize::MAX)
                .collect();
            if group.len() > 1 {
                for &v in &group {
                    item_of[v] = items.len();
                }
                items.push(group);
            }
        }
        for (v, slot) in item_of.iter_mut().enumerate() {
            if positive(v) && *slot == usize::MAX {
                *slot = items.len();
                items.push(vec![v]);
            }
        }

        let mut owner = vec![None; items.len()];
        let mut cards = Vec::new();
        let mut in_row = vec![false; n];
        for (ci, con) in problem.constraints.iter().enumerate() {
            if !unit_row(con) || con.rhs < 2.0 - TOLERANCE || con.rhs >= con.terms.len() as f64 {
                continue;
            }
            for &(v, _) in &con.terms {
                in_row[v] = true;
            }
            let mut owned = Vec::new();
            for &(v, _) in &con.terms {
                let it = item_of[v];
                if it == usize::MAX || owner[it].is_some() || items[it][0] != v {
                    continue;
                }
                if items[it].iter().all(|&u| in_row[u]) {
                    owner[it] = Some(cards.len());
                    owned.push(it);
                }
            }
            for &(v, _) in &con.terms {
                in_row[v] = false;
            }
            if !owned.is_empty() {
                cards.push((ci, owned));
            }
        }
        BoundPlan { items, owner, cards }
    }
}

struct Search<'a> {
    problem: &'a IlpProblem,
    plan: BoundPlan,
    item_value: Vec<f64>,
    scratch: Vec<f64>,
    /// Constraints mentioning each variable.
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<usize>,
    order: Vec<usize>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    best: Option<(f64, Vec<bool>)>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(problem: &'a IlpProblem) -> Self {
        let mut watches = vec![Vec::new(); problem.n_vars];
        for (ci, con) in problem.constraints.iter().enumerate() {
            for &(v, _) in &con.terms {
                watches[v].push(ci);
            }
        }
        let mut order: Vec<usize> = (0..problem.n_vars).collect();
        order.sort_by(|&a, &b| {
            problem.objective[b]
                .abs()
                .total_cmp(&problem.objective[a].abs())
                .then(a.cmp(&b))
        });
        let plan = BoundPlan::new(problem);
        Search {
            problem,
            item_value: vec![0.0; plan.items.len()],
            scratch: Vec::new(),
            plan,
            watches,
            value: vec![FREE; problem.n_vars],
            trail: Vec::with_capacity(problem.n_vars),
            order,
            queue: Vec::new(),
            queued: vec![false; problem.constraints.len()],
            best: None,
            nodes: 0,
        }
    }

    fn assign(&mut self, var: usize, val: i8) {
        debug_assert_eq!(self.value[var], FREE);
        self.value[var] = val;
        self.trail.push(var);
        for &ci in &self.watches[var] {
            if !self.queued[ci] {
                self.queued[ci] = true;
                self.queue.push(ci);
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.value[var] = FREE;
        }
    }

    fn clear_queue(&mut self) {
        for ci in self.queue.drain(..) {
            self.queued[ci] = false;
        }
    }

    /// Interval reasoning over queued constraints until fixpoint. Returns
    /// `false` on a conflict.
    fn propagate(&mut self) -> bool {
        while let Some(ci) = self.queue.pop() {
            self.queued[ci] = false;
            let con = &self.problem.constraints[ci];
            let (mut fixed, mut pos, mut neg) = (0.0, 0.0, 0.0);
            for &(v, a) in &con.terms {
                match self.value[v] {
                    FREE if a > 0.0 => pos += a,
                    FREE => neg += a,
                    1 => fixed += a,
                    _ => {}
                }
            }
            let min = fixed + neg;
            let max = fixed + pos;
            let upper = matches!(con.sense, Sense::Le | Sense::Eq);
            let lower = matches!(con.sense, Sense::Ge | Sense::Eq);
            if (upper && min > con.rhs + TOLERANCE) || (lower && max < con.rhs - TOLERANCE) {
                self.clear_queue();
                return false;
            }
            let mut forced: Vec<(usize, i8)> = Vec::new();
            for &(v, a) in &con.terms {
                if self.value[v] != FREE || a == 0.0 {
                    continue;
                }
                // Moving v from its min-contributing value to the other one
                // raises the minimum by |a|; symmetrically for the maximum.
                if upper && min + a.abs() > con.rhs + TOLERANCE {
                    forced.push((v, if a > 0.0 { 0 } else { 1 }));
                } else if lower && max - a.abs() < con.rhs - TOLERANCE {
                    forced.push((v, if a > 0.0 { 1 } else { 0 }));
                }
            }
            for (v, val) in forced {
                if self.value[v] == FREE {
                    self.assign(v, val);
                } else if self.value[v] != val {
                    self.clear_queue();
                    return false;
                }
            }
        }
        true
    }

    fn bound(&mut self) -> f64 {
        let obj = &self.problem.objective;
        let mut total: f64 = obj.iter().zip(&self.value).filter(|(_, &x)| x == 1).map(|(c, _)| c).sum();
        for (k, item) in self.plan.items.iter().enumerate() {
            // a member at 1 leaves nothing more to gain from the group
            let mut best = 0.0f64;
            for &v in item {
                match self.value[v] {
                    1 => {
                        best = 0.0;
                        break;
                    }
                    FREE => best = best.max(obj[v]),
                    _ => {}
                }
            }
            self.item_value[k] = best;
            if self.plan.owner[k].is_none() {
                total += best;
            }
        }
        for (ci, owned) in &self.plan.cards {
            let con = &self.problem.constraints[*ci];
            let ones = con.terms.iter().filter(|&&(v, _)| self.value[v] == 1).count();
            let room = ((con.rhs + TOLERANCE).floor() as usize).saturating_sub(ones);
            self.scratch.clear();
            self.scratch.extend(owned.iter().map(|&k| self.item_value[k]));
            if room < self.scratch.len() {
                self.scratch.select_nth_unstable_by(room, |a, b| b.total_cmp(a));
                self.scratch.truncate(room);
            }
            total += self.scratch.iter().sum::<f64>();
        }
        total
    }

    fn dfs(&mut self, start: usize) {
        self.nodes += 1;
        let bound = self.bound();
        if let Some((best, _)) = &self.best {
            if bound <= best + TOLERANCE {
                return;
            }
        }
        let mut k = start;
        while k < self.order.len() && self.value[self.order[k]] != FREE {
            k += 1;
        }
        if k == self.order.len() {
            let assignment: Vec<bool> = self.value.iter().map(|&x| x == 1).collect();
            debug_assert!(self.problem.is_feasible(&assignment));
            // With every variable fixed the bound is the objective value.
            self.best = Some((self.problem.objective_of(&assignment), assignment));
            return;
        }
        let var = self.order[k];
        let first: i8 = if self.problem.objective[var] > 0.0 { 1 } else { 0 };
        for val in [first, 1 - first] {
            let mark = self.trail.len();
            self.assign(var, val);
            if self.propagate() {
                self.dfs(k + 1);
            }
            self.undo(mark);
        }
    }
}

/// Maximize the objective of `problem` exactly.
pub fn solve(problem: &IlpProblem) -> Result<IlpSolution, SolveError> {
    problem.check()?;
    let mut search = Search::new(problem);
    search.queue = (0..problem.constraints.len()).collect();
    search.queued.iter_mut().for_each(|q| *q = true);
    if search.propagate() {
        search.dfs(0);
    }
    let nodes = search.nodes;
    Ok(IlpSolution::from_best(
        problem,
        search.best.map(|(_, a)| a),
        nodes,
    ))
}

/// Enumerate all `2^n` assignments and return the best feasible one,
/// preferring the lexicographically smallest assignment among ties.
pub fn brute_force(problem: &IlpProblem) -> Result<IlpSolution, SolveError> {
    problem.check()?;
    let n = problem.n_vars;
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(SolveError::TooLarge(n));
    }
    let mut by_var: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (ci, con) in problem.constraints.iter().enumerate() {
        for &(v, a) in &con.terms {
            by_var[v].push((ci, a));
        }
    }

    // Gray-code walk: each step flips one variable and updates the
    // constraint sums it touches.
    let mut x = vec![false; n];
    let mut lhs = vec![0.0; problem.constraints.len()];
    let mut value = 0.0;
    let mut best: Option<(f64, Vec<bool>)> = None;
    let total: u64 = 1 << n;
    for step in 0..total {
        if step > 0 {
            let flip = step.trailing_zeros() as usize;
            let sign = if x[flip] { -1.0 } else { 1.0 };
            x[flip] = !x[flip];
            value += sign * problem.objective[flip];
            for &(ci, a) in &by_var[flip] {
                lhs[ci] += sign * a;
            }
        }
        let feasible = problem
            .constraints
            .iter()
            .zip(&lhs)
            .all(|(c, &l)| c.holds(l));
        if !feasible {
            continue;
        }
        let replace = match &best {
            None => true,
            Some((b, a)) => value > b + TOLERANCE || (value >= b - TOLERANCE && x < *a),
        };
        if replace {
            best = Some((value, x.clone()));
        }
    }
    Ok(IlpSolution::from_best(problem, best.map(|(_, a)| a), total))
}
