//! Depth-first branch-and-bound with periodic best-bound restarts.

use std::time::{Duration, Instant};

use crate::lp::{finish, solve_lp, LpStatus};
use crate::model::LinearProgram;
use crate::simplex::{Basis, Outcome, Simplex};
use crate::{SolveError, TOL_FEAS};

const RESTART_EVERY: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct MipOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    /// Nodes whose bound is within `max(abs_gap, rel_gap * |incumbent|)` of the
    /// incumbent are pruned.
    pub rel_gap: f64,
    pub abs_gap: f64,
    pub int_tol: f64,
}

impl Default for MipOptions {
    fn default() -> Self {
        MipOptions {
            time_limit: None,
            node_limit: None,
            rel_gap: 0.0,
            abs_gap: 1e-9,
            int_tol: crate::TOL_INT,
        }
    }
}

impl MipOptions {
    pub fn with_time_limit(limit: Duration) -> Self {
        MipOptions {
            time_limit: Some(limit),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MipStatus {
    /// Tree exhausted (up to the configured gap).
    Optimal,
    /// A limit stopped the search; the incumbent is feasible but unproven.
    Feasible,
    Infeasible,
    /// A limit stopped the search before any integer point was found.
    NoIncumbent,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Limit {
    Time,
    Nodes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipResult {
    pub status: MipStatus,
    /// Incumbent, empty when there is none.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Best proven lower bound.
    pub bound: f64,
    pub nodes: usize,
    pub elapsed: Duration,
    pub truncated_by: Option<Limit>,
}

impl MipResult {
    pub fn has_incumbent(&self) -> bool {
        !self.x.is_empty()
    }
}

struct Node {
    seq: usize,
    changes: Vec<(usize, f64, f64)>,
    basis: Basis,
    bound: f64,
}

pub fn solve_mip(lp: &LinearProgram, options: &MipOptions) -> Result<MipResult, SolveError> {
    lp.validate()?;
    let started = Instant::now();
    let mut engine = Simplex::new(lp);
    let root = engine.solve_cold();
    let root_sol = finish(lp, &mut engine, root);
    let fail = |status| MipResult {
        status,
        x: Vec::new(),
        objective: f64::NAN,
        bound: f64::NAN,
        nodes: 1,
        elapsed: started.elapsed(),
        truncated_by: None,
    };
    match root_sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Ok(fail(MipStatus::Infeasible)),
        LpStatus::Unbounded => return Ok(fail(MipStatus::Unbounded)),
        LpStatus::NumericalFailure | LpStatus::IterationLimit => {
            return Ok(fail(MipStatus::NumericalFailure))
        }
    }

    let mut search = Search {
        lp,
        options,
        incumbent: None,
        nodes: 1,
        seq: 0,
        dropped: 0,
    };
    let mut open: Vec<Node> = Vec::new();
    let root_basis = engine.snapshot();
    search.dive(&mut engine, &root_sol.x, &root_basis);
    search.expand(&[], &root_sol.x, root_sol.objective, root_basis, &mut open);

    let mut truncated_by = None;
    while !open.is_empty() {
        if let Some(limit) = options.time_limit {
            if started.elapsed() >= limit {
                truncated_by = Some(Limit::Time);
                break;
            }
        }
        if let Some(limit) = options.node_limit {
            if search.nodes >= limit {
                truncated_by = Some(Limit::Nodes);
                break;
            }
        }
        let node = if search.nodes % RESTART_EVERY == 0 {
            let best = open
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.bound.total_cmp(&b.bound).then(a.seq.cmp(&b.seq)))
                .map(|(i, _)| i)
                .expect("open set is non-empty");
            open.remove(best)
        } else {
            open.pop().expect("open set is non-empty")
        };
        search.nodes += 1;
        if search.prunable(node.bound) {
            continue;
        }
        for j in 0..lp.num_vars() {
            engine.set_bounds(j, lp.lower[j], lp.upper[j]);
        }
        for &(j, lo, hi) in &node.changes {
            engine.set_bounds(j, lo, hi);
        }
        let mut outcome = engine.solve_warm(&node.basis);
        if matches!(outcome, Outcome::Numerical | Outcome::IterationLimit) {
            outcome = engine.solve_cold();
        }
        if outcome != Outcome::Optimal {
            if outcome != Outcome::Infeasible {
                search.dropped += 1;
            }
            continue;
        }
        let mut bounded = lp.clone();
        for &(j, lo, hi) in &node.changes {
            bounded.set_bounds(j, lo, hi);
        }
        let sol = finish(&bounded, &mut engine, outcome);
        if !sol.is_optimal() {
            search.dropped += 1;
            continue;
        }
        search.expand(&node.changes, &sol.x, sol.objective, engine.snapshot(), &mut open);
    }

    let elapsed = started.elapsed();
    let open_bound = open.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    Ok(match search.incumbent {
        Some((x, obj)) => MipResult {
            status: if truncated_by.is_some() && open.iter().any(|n| !search_prunable(options, obj, n.bound)) {
                MipStatus::Feasible
            } else {
                MipStatus::Optimal
            },
            bound: open_bound.min(obj),
            objective: obj,
            x,
            nodes: search.nodes,
            elapsed,
            truncated_by,
        },
        None => MipResult {
            status: if truncated_by.is_some() {
                MipStatus::NoIncumbent
            } else if search.dropped > 0 {
                MipStatus::NumericalFailure
            } else {
                MipStatus::Infeasible
            },
            x: Vec::new(),
            objective: f64::NAN,
            bound: open_bound,
            nodes: search.nodes,
            elapsed,
            truncated_by,
        },
    })
}

fn search_prunable(options: &MipOptions, incumbent: f64, bound: f64) -> bool {
    let gap = options.abs_gap.max(options.rel_gap * incumbent.abs());
    bound >= incumbent - gap
}

struct Search<'a> {
    lp: &'a LinearProgram,
    options: &'a MipOptions,
    incumbent: Option<(Vec<f64>, f64)>,
    nodes: usize,
    seq: usize,
    /// Nodes abandoned because their LP could not be solved reliably.
    dropped: usize,
}

impl Search<'_> {
    fn prunable(&self, bound: f64) -> bool {
        match &self.incumbent {
            Some((_, obj)) => search_prunable(self.options, *obj, bound),
            None => false,
        }
    }

    /// Either records `x` as an incumbent or pushes its two children.
    fn expand(
        &mut self,
        changes: &[(usize, f64, f64)],
        x: &[f64],
        objective: f64,
        basis: Basis,
        open: &mut Vec<Node>,
    ) {
        if self.prunable(objective) {
            return;
        }
        let mut branch: Option<(usize, f64)> = None;
        let mut best = self.options.int_tol;
        for (j, &v) in x.iter().enumerate() {
            if !self.lp.integer[j] {
                continue;
            }
            let frac = v - v.floor();
            let dist = frac.min(1.0 - frac);
            if dist > best {
                best = dist;
                branch = Some((j, v));
            }
        }
        let Some((j, v)) = branch else {
            self.accept(changes, x);
            return;
        };
        let (lo, hi) = current_bounds(self.lp, changes, j);
        let down = {
            let mut c = changes.to_vec();
            c.push((j, lo, v.floor()));
            c
        };
        let up = {
            let mut c = changes.to_vec();
            c.push((j, v.ceil(), hi));
            c
        };
        let up_first = v - v.floor() >= 0.5;
        let (second, first) = if up_first { (down, up) } else { (up, down) };
        for changes in [second, first] {
            self.seq += 1;
            open.push(Node {
                seq: self.seq,
                changes,
                basis: basis.clone(),
                bound: objective,
            });
        }
    }

    /// Rounding dive: repeatedly pins the fractional integer variable closest
    /// to an integer and re-solves the LP. When neither rounding of a variable
    /// keeps the LP feasible it is left free for the rest of the dive, since
    /// equality rows often make it integral once its neighbours are pinned.
    /// An integral end point becomes an incumbent candidate.
    fn dive(&mut self, engine: &mut Simplex, root_x: &[f64], root_basis: &Basis) {
        let lp = self.lp;
        let mut changes: Vec<(usize, f64, f64)> = Vec::new();
        let mut x = root_x.to_vec();
        let mut basis = root_basis.clone();
        let mut skipped = vec![false; lp.num_vars()];
        loop {
            let mut pick: Option<(usize, f64)> = None;
            let mut closest = f64::INFINITY;
            for (j, &v) in x.iter().enumerate() {
                if !lp.integer[j] || skipped[j] {
                    continue;
                }
                let dist = (v - v.round()).abs();
                if dist > self.options.int_tol && dist < closest {
                    closest = dist;
                    pick = Some((j, v));
                }
            }
            let Some((j, v)) = pick else {
                self.accept(&changes, &x);
                return;
            };
            let (lo, hi) = current_bounds(lp, &changes, j);
            let near = v.round();
            let far = if near > v { v.floor() } else { v.ceil() };
            let mut stepped = false;
            for target in [near, far] {
                if target < lo || target > hi {
                    continue;
                }
                let mut trial = changes.clone();
                trial.push((j, target, target));
                for k in 0..lp.num_vars() {
                    engine.set_bounds(k, lp.lower[k], lp.upper[k]);
                }
                for &(k, a, b) in &trial {
                    engine.set_bounds(k, a, b);
                }
                if engine.solve_warm(&basis) != Outcome::Optimal {
                    continue;
                }
                let mut bounded = lp.clone();
                for &(k, a, b) in &trial {
                    bounded.set_bounds(k, a, b);
                }
                let sol = finish(&bounded, engine, Outcome::Optimal);
                if !sol.is_optimal() || self.prunable(sol.objective) {
                    continue;
                }
                changes = trial;
                x = sol.x;
                basis = engine.snapshot();
                stepped = true;
                break;
            }
            if !stepped {
                skipped[j] = true;
            }
        }
    }

    fn accept(&mut self, changes: &[(usize, f64, f64)], x: &[f64]) {
        let lp = self.lp;
        let mut snapped = x.to_vec();
        for (j, v) in snapped.iter_mut().enumerate() {
            if lp.integer[j] {
                *v = v.round();
            }
        }
        let candidate = if lp.max_violation(&snapped) <= TOL_FEAS * 1e-2 {
            Some(snapped)
        } else {
            // Re-solve the continuous part with integers pinned to their rounded values.
            let mut fixed = lp.clone();
            for &(j, lo, hi) in changes {
                fixed.set_bounds(j, lo, hi);
            }
            for (j, &v) in snapped.iter().enumerate() {
                if lp.integer[j] {
                    fixed.set_bounds(j, v, v);
                }
            }
            match solve_lp(&fixed) {
                Ok(sol) if sol.is_optimal() && lp.max_violation(&sol.x) <= TOL_FEAS => {
                    let mut x = sol.x;
                    for (j, v) in x.iter_mut().enumerate() {
                        if lp.integer[j] {
                            *v = snapped[j];
                        }
                    }
                    Some(x)
                }
                _ => None,
            }
        };
        if let Some(x) = candidate {
            let obj = lp.objective_value(&x);
            let improves = match &self.incumbent {
                Some((_, best)) => obj < *best - 1e-12 * (1.0 + best.abs()),
                None => true,
            };
            if improves {
                self.incumbent = Some((x, obj));
            }
        }
    }
}

fn current_bounds(lp: &LinearProgram, changes: &[(usize, f64, f64)], j: usize) -> (f64, f64) {
    changes
        .iter()
        .rev()
        .find(|c| c.0 == j)
        .map(|&(_, lo, hi)| (lo, hi))
        .unwrap_or((lp.lower[j], lp.upper[j]))
}
