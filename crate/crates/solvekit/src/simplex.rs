//! Dense bounded-variable simplex.
//!
//! Every row `i` owns a slack column `n + i` with bounds `[0, inf)` for `<=`
//! rows and `[0, 0]` for `=` rows, plus an artificial column `n + m + i`
//! used only by phase one. The basis inverse is held explicitly and updated
//! in product form, with a full refactorisation every `REFACTOR_EVERY` pivots.

use crate::model::{LinearProgram, Relation};
use crate::{TOL_FEAS, TOL_OPT};

const TOL_PIVOT: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const STALL_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarState {
    Basic,
    Lower,
    Upper,
}

/// A basis that can seed a later solve of the same problem with tightened bounds.
#[derive(Debug, Clone)]
pub(crate) struct Basis {
    basis: Vec<usize>,
    state: Vec<VarState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
}

pub(crate) struct Simplex {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    binv: Vec<f64>,
    x: Vec<f64>,
    pivots_since_refactor: usize,
    pub(crate) iterations: usize,
    iteration_limit: usize,
    /// Iteration count at which the current solve gives up.
    budget_end: usize,
}

impl Simplex {
    pub(crate) fn new(lp: &LinearProgram) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let total = n + 2 * m;
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                match cols[j].last_mut() {
                    Some((r, v)) if *r == i => *v += a,
                    _ => cols[j].push((i, a)),
                }
            }
        }
        for col in cols.iter_mut().take(n) {
            col.retain(|&(_, a)| a != 0.0);
        }
        let mut lb = lp.lower.clone();
        let mut ub = lp.upper.clone();
        lb.resize(total, 0.0);
        ub.resize(total, 0.0);
        for (i, row) in lp.rows.iter().enumerate() {
            cols[n + i] = vec![(i, 1.0)];
            cols[n + m + i] = vec![(i, 1.0)];
            ub[n + i] = match row.relation {
                Relation::Le => f64::INFINITY,
                Relation::Eq => 0.0,
            };
        }
        let mut cost = lp.costs.clone();
        cost.resize(total, 0.0);
        Simplex {
            m,
            n,
            cols,
            cost,
            lb,
            ub,
            rhs: lp.rows.iter().map(|r| r.rhs).collect(),
            basis: Vec::new(),
            state: vec![VarState::Lower; total],
            binv: Vec::new(),
            x: vec![0.0; total],
            pivots_since_refactor: 0,
            iterations: 0,
            iteration_limit: 20_000 + 50 * (m + n),
            budget_end: 0,
        }
    }

    pub(crate) fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lb[j] = lo;
        self.ub[j] = hi;
    }

    pub(crate) fn snapshot(&self) -> Basis {
        Basis {
            basis: self.basis.clone(),
            state: self.state.clone(),
        }
    }

    /// Structural part of the current point.
    pub(crate) fn primal(&self) -> Vec<f64> {
        self.x[..self.n].to_vec()
    }

    /// Row duals `y = c_B B^-1` for the phase-two costs.
    pub(crate) fn duals(&self) -> Vec<f64> {
        self.compute_duals(&self.cost)
    }

    pub(crate) fn reduced_costs(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n).map(|j| self.reduced_cost(j, &self.cost, y)).collect()
    }

    /// Two-phase primal simplex from the slack/artificial basis.
    pub(crate) fn solve_cold(&mut self) -> Outcome {
        let (n, m) = (self.n, self.m);
        self.budget_end = self.iterations + self.iteration_limit;
        self.basis = Vec::with_capacity(m);
        for j in 0..n {
            self.state[j] = VarState::Lower;
            self.x[j] = self.lb[j];
        }
        let mut residual = self.rhs.clone();
        for j in 0..n {
            let xj = self.x[j];
            if xj != 0.0 {
                for &(i, a) in &self.cols[j] {
                    residual[i] -= a * xj;
                }
            }
        }
        let mut phase_one = vec![0.0; n + 2 * m];
        for (i, &r) in residual.iter().enumerate() {
            let slack = n + i;
            let art = n + m + i;
            let slack_fits = r >= 0.0 && r <= self.ub[slack];
            if slack_fits {
                self.basis.push(slack);
                self.state[slack] = VarState::Basic;
                self.x[slack] = r;
                self.state[art] = VarState::Lower;
                self.x[art] = 0.0;
                self.lb[art] = 0.0;
                self.ub[art] = 0.0;
                self.cols[art] = vec![(i, 1.0)];
            } else {
                self.state[slack] = VarState::Lower;
                self.x[slack] = 0.0;
                let sign = if r < 0.0 { -1.0 } else { 1.0 };
                self.cols[art] = vec![(i, sign)];
                self.basis.push(art);
                self.state[art] = VarState::Basic;
                self.x[art] = r.abs();
                self.lb[art] = 0.0;
                self.ub[art] = f64::INFINITY;
                phase_one[art] = 1.0;
            }
        }
        if let Err(o) = self.refactor() {
            return o;
        }

        if phase_one.iter().any(|&c| c > 0.0) {
            match self.run_primal(&phase_one) {
                Outcome::Optimal => {}
                Outcome::Unbounded => return Outcome::Numerical,
                other => return other,
            }
            for i in 0..m {
                let art = n + m + i;
                if self.x[art] > TOL_FEAS * (1.0 + self.rhs[i].abs()) {
                    return Outcome::Infeasible;
                }
            }
        }
        self.close_artificials();
        self.run_primal(&self.cost.clone())
    }

    /// Re-solves from `start` after bounds were tightened: dual simplex, then a
    /// primal clean-up pass. Falls back to a cold start when the warm path fails.
    pub(crate) fn solve_warm(&mut self, start: &Basis) -> Outcome {
        self.budget_end = self.iterations + self.iteration_limit;
        self.basis = start.basis.clone();
        self.state = start.state.clone();
        self.close_artificials();
        for j in 0..self.state.len() {
            match self.state[j] {
                VarState::Basic => {}
                VarState::Lower => self.x[j] = self.lb[j],
                VarState::Upper => {
                    if self.ub[j].is_finite() {
                        self.x[j] = self.ub[j];
                    } else {
                        self.state[j] = VarState::Lower;
                        self.x[j] = self.lb[j];
                    }
                }
            }
        }
        if self.refactor().is_err() {
            return self.solve_cold();
        }
        match self.run_dual() {
            Outcome::Optimal => match self.run_primal(&self.cost.clone()) {
                Outcome::Optimal => Outcome::Optimal,
                Outcome::Unbounded => Outcome::Unbounded,
                _ => self.solve_cold(),
            },
            Outcome::Infeasible => Outcome::Infeasible,
            _ => self.solve_cold(),
        }
    }

    fn close_artificials(&mut self) {
        let (n, m) = (self.n, self.m);
        for art in n + m..n + 2 * m {
            self.lb[art] = 0.0;
            self.ub[art] = 0.0;
            if self.state[art] != VarState::Basic {
                self.state[art] = VarState::Lower;
                self.x[art] = 0.0;
            }
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.ub[j] - self.lb[j] <= 1e-12
    }

    fn compute_duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yk, &v) in y.iter_mut().zip(row) {
                    *yk += cb * v;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(k, a) in &self.cols[j] {
            for (i, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[i * m + k] * a;
            }
        }
        alpha
    }

    /// Rebuilds `B^-1` by Gauss-Jordan elimination with partial pivoting and
    /// recomputes the basic values.
    fn refactor(&mut self) -> Result<(), Outcome> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (c, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                a[i * m + c] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in col + 1..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-11 {
                return Err(Outcome::Numerical);
            }
            if piv != col {
                for k in 0..m {
                    a.swap(piv * m + k, col * m + k);
                    inv.swap(piv * m + k, col * m + k);
                }
            }
            let p = a[col * m + col];
            for k in 0..m {
                a[col * m + k] /= p;
                inv[col * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= f * a[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        // Rows of `inv` correspond to basis positions because `a` had basis
        // columns in position order.
        self.binv = inv;
        self.pivots_since_refactor = 0;
        self.recompute_basic_values();
        Ok(())
    }

    fn recompute_basic_values(&mut self) {
        let m = self.m;
        let mut r = self.rhs.clone();
        for j in 0..self.cols.len() {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                for &(i, a) in &self.cols[j] {
                    r[i] -= a * xj;
                }
            }
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let v: f64 = row.iter().zip(&r).map(|(a, b)| a * b).sum();
            self.x[self.basis[p]] = v;
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let p = alpha[r];
        for k in 0..m {
            self.binv[r * m + k] /= p;
        }
        let pivot_row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
        for (i, &ai) in alpha.iter().enumerate() {
            if i != r && ai != 0.0 {
                for (k, &pv) in pivot_row.iter().enumerate() {
                    self.binv[i * m + k] -= ai * pv;
                }
            }
        }
        self.basis[r] = q;
        self.state[q] = VarState::Basic;
        self.pivots_since_refactor += 1;
    }

    fn run_primal(&mut self, cost: &[f64]) -> Outcome {
        let mut stall = 0usize;
        loop {
            if self.iterations >= self.budget_end {
                return Outcome::IterationLimit;
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                if let Err(o) = self.refactor() {
                    return o;
                }
            }
            let bland = stall > STALL_LIMIT;
            let y = self.compute_duals(cost);

            let mut entering: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..self.cols.len() {
                if self.state[j] == VarState::Basic || self.is_fixed(j) {
                    continue;
                }
                let d = self.reduced_cost(j, cost, &y);
                let dir = match self.state[j] {
                    VarState::Lower if d < -TOL_OPT => 1.0,
                    VarState::Upper if d > TOL_OPT => -1.0,
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir));
                    break;
                }
                if d.abs() > best {
                    best = d.abs();
                    entering = Some((j, dir));
                }
            }
            let Some((q, dir)) = entering else {
                return Outcome::Optimal;
            };
            self.iterations += 1;

            let alpha = self.ftran(q);
            let flip = self.ub[q] - self.lb[q];
            let leave = self.primal_ratio(&alpha, dir, bland);

            let (theta, row) = match leave {
                Some((r, t)) if t < flip => (t, Some(r)),
                _ if flip.is_finite() => (flip, None),
                _ => return Outcome::Unbounded,
            };
            if theta <= 1e-12 {
                stall += 1;
            } else {
                stall = 0;
            }
            for (i, &a) in alpha.iter().enumerate() {
                if a != 0.0 {
                    let b = self.basis[i];
                    self.x[b] -= dir * theta * a;
                }
            }
            self.x[q] += dir * theta;
            match row {
                None => {
                    self.state[q] = if dir > 0.0 {
                        VarState::Upper
                    } else {
                        VarState::Lower
                    };
                    self.x[q] = if dir > 0.0 { self.ub[q] } else { self.lb[q] };
                }
                Some(r) => {
                    let leaving = self.basis[r];
                    let rate = -dir * alpha[r];
                    if rate < 0.0 {
                        self.state[leaving] = VarState::Lower;
                        self.x[leaving] = self.lb[leaving];
                    } else {
                        self.state[leaving] = VarState::Upper;
                        self.x[leaving] = self.ub[leaving];
                    }
                    self.pivot(r, q, &alpha);
                }
            }
        }
    }

    /// Harris two-pass ratio test; in Bland mode the textbook test with
    /// lowest-index tie breaking.
    fn primal_ratio(&self, alpha: &[f64], dir: f64, bland: bool) -> Option<(usize, f64)> {
        let limit = |i: usize, slack: f64| -> Option<f64> {
            let a = alpha[i];
            if a.abs() <= TOL_PIVOT {
                return None;
            }
            let b = self.basis[i];
            let rate = -dir * a;
            if rate < 0.0 {
                self.lb[b]
                    .is_finite()
                    .then(|| ((self.x[b] - self.lb[b] + slack) / -rate).max(0.0))
            } else {
                self.ub[b]
                    .is_finite()
                    .then(|| ((self.ub[b] - self.x[b] + slack) / rate).max(0.0))
            }
        };
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                if let Some(t) = limit(i, 0.0) {
                    let better = match best {
                        None => true,
                        Some((r, bt)) => {
                            t < bt - 1e-12 || (t <= bt + 1e-12 && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        best = Some((i, t));
                    }
                }
            }
            return best;
        }
        let mut relaxed = f64::INFINITY;
        for i in 0..self.m {
            if let Some(t) = limit(i, TOL_FEAS) {
                relaxed = relaxed.min(t);
            }
        }
        if !relaxed.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if let Some(t) = limit(i, 0.0) {
                if t <= relaxed {
                    let better = match best {
                        None => true,
                        Some((r, _)) => alpha[i].abs() > alpha[r].abs(),
                    };
                    if better {
                        best = Some((i, t));
                    }
                }
            }
        }
        best
    }

    fn run_dual(&mut self) -> Outcome {
        let m = self.m;
        let cost = self.cost.clone();
        loop {
            if self.iterations >= self.budget_end {
                return Outcome::IterationLimit;
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                if let Err(o) = self.refactor() {
                    return o;
                }
            } else {
                self.recompute_basic_values();
            }
            let mut leave: Option<(usize, bool)> = None;
            let mut worst = 0.0;
            for (p, &b) in self.basis.iter().enumerate() {
                let below = self.lb[b] - self.x[b];
                let above = self.x[b] - self.ub[b];
                let tol = TOL_FEAS * (1.0 + self.x[b].abs().min(1e6));
                if below > tol && below > worst {
                    worst = below;
                    leave = Some((p, true));
                } else if above > tol && above > worst {
                    worst = above;
                    leave = Some((p, false));
                }
            }
            let Some((r, below)) = leave else {
                return Outcome::Optimal;
            };
            self.iterations += 1;

            let y = self.compute_duals(&cost);
            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            for j in 0..self.cols.len() {
                if self.state[j] == VarState::Basic || self.is_fixed(j) {
                    continue;
                }
                let arj: f64 = self.cols[j].iter().map(|&(i, a)| rho[i] * a).sum();
                if arj.abs() <= TOL_PIVOT {
                    continue;
                }
                let eligible = match (self.state[j], below) {
                    (VarState::Lower, true) => arj < 0.0,
                    (VarState::Upper, true) => arj > 0.0,
                    (VarState::Lower, false) => arj > 0.0,
                    (VarState::Upper, false) => arj < 0.0,
                    (VarState::Basic, _) => false,
                };
                if eligible {
                    let d = self.reduced_cost(j, &cost, &y);
                    cands.push((j, d.abs(), arj));
                }
            }
            if cands.is_empty() {
                return Outcome::Infeasible;
            }
            let relaxed = cands
                .iter()
                .map(|&(_, d, a)| (d + TOL_OPT) / a.abs())
                .fold(f64::INFINITY, f64::min);
            let mut chosen: Option<(usize, f64)> = None;
            for &(j, d, a) in &cands {
                if d / a.abs() <= relaxed {
                    let better = match chosen {
                        None => true,
                        Some((_, ba)) => a.abs() > ba.abs(),
                    };
                    if better {
                        chosen = Some((j, a));
                    }
                }
            }
            let (q, _) = chosen.expect("candidate set is non-empty");
            let leaving = self.basis[r];
            if below {
                self.state[leaving] = VarState::Lower;
                self.x[leaving] = self.lb[leaving];
            } else {
                self.state[leaving] = VarState::Upper;
                self.x[leaving] = self.ub[leaving];
            }
            let alpha = self.ftran(q);
            if alpha[r].abs() <= TOL_PIVOT {
                return Outcome::Numerical;
            }
            self.pivot(r, q, &alpha);
        }
    }

    /// Recomputes basic values from scratch; used before reporting a solution.
    pub(crate) fn polish(&mut self) -> Result<(), Outcome> {
        self.refactor()
    }
}
