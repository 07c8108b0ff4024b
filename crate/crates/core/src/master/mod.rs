//! Restricted master LP over the three phases, addressed by semantic row
//! and column identities.

mod colgen;
mod column;
mod layout;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use solvekit::{solve_lp, LinearProgram, LpSolution, LpStatus, Relation};

pub use colgen::{run_colgen, ColgenOptions, ColumnStats, RelaxedSolution};
pub use column::{
    canonical_column, column_reduced_cost, jumbo_waste, reel_waste, CanonicalColumn, ColumnKey,
    Duals,
};
pub use layout::{RowId, RowLayout, Scope};

use crate::instances::Instance;
use crate::pricing::{homogeneous_1d, homogeneous_2d};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MasterError {
    #[error("scope {0} is not a contiguous range of phases")]
    BadScope(Scope),
    #[error("column {0:?} does not belong to {1}")]
    ColumnOutOfScope(ColumnKey, Scope),
    #[error("no column can supply {0}")]
    Unsupplied(RowId),
    #[error("{0}")]
    Infeasible(InfeasibilityReport),
    #[error("LP solver failed with status {0:?}")]
    Solver(String),
}

/// Why a master has no feasible point: demand rows left short by the
/// smallest total shortfall, and the capacity rows that bind there.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityReport {
    pub phase: u8,
    pub short: Vec<RowId>,
    pub binding: Vec<RowId>,
}

impl fmt::Display for InfeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |rows: &[RowId]| rows.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "phase {} infeasible", self.phase)?;
        if !self.binding.is_empty() {
            write!(f, "; capacity exhausted in {}", list(&self.binding))?;
        }
        if !self.short.is_empty() {
            write!(f, "; demand unmet in {}", list(&self.short))?;
        }
        Ok(())
    }
}

/// Demand added to the rows a restricted scope cannot see: jumbos consumed
/// by reel cutting, `[k][m1][t]`, and reels consumed by sheet cutting, `[i2]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtraDemand {
    pub jumbos: Option<Vec<Vec<Vec<f64>>>>,
    pub reels: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnOrigin {
    Initial,
    Generated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MasterColumn {
    pub key: ColumnKey,
    pub objective: f64,
    /// Sparse entries by flat row index.
    pub entries: Vec<(usize, f64)>,
    pub origin: ColumnOrigin,
}

/// Objective used when assembling the LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    /// True costs, no artificial columns.
    Cost,
    /// Zero costs plus one unit-cost artificial per demand row.
    Feasibility,
}

/// Master LP solution with values per pool column and duals by row.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// Artificial values, one per demand row; empty in cost mode.
    pub artificials: Vec<f64>,
    pub duals: Duals,
    pub iterations: usize,
}

impl MasterSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone)]
pub struct MasterProblem<'a> {
    inst: &'a Instance,
    layout: RowLayout,
    rhs: Vec<f64>,
    extra: ExtraDemand,
    columns: Vec<MasterColumn>,
    lookup: HashMap<ColumnKey, usize>,
}

impl<'a> MasterProblem<'a> {
    /// Master with every stock and production column of the scope plus the
    /// homogeneous cutting patterns.
    pub fn build_initial(
        inst: &'a Instance,
        scope: Scope,
        extra: &ExtraDemand,
    ) -> Result<MasterProblem<'a>, MasterError> {
        let mut master = MasterProblem::empty(inst, scope, extra)?;
        let d = inst.dims;
        if scope.phase1 {
            for k in 0..d.grammages {
                for m1 in 0..d.jumbo_machines {
                    for t in 0..d.periods {
                        master.insert(ColumnKey::X1 { k, m1, t }, ColumnOrigin::Initial);
                        master.insert(ColumnKey::E1 { k, m1, t }, ColumnOrigin::Initial);
                    }
                }
            }
        }
        if scope.phase2 {
            let patterns = homogeneous_1d(inst);
            for t in 0..d.periods {
                for p in &patterns {
                    for m2 in 0..d.rewinders {
                        master.insert(p.key(m2, t), ColumnOrigin::Initial);
                    }
                }
            }
            for i2 in 0..d.reel_types {
                for t in 0..d.periods {
                    master.insert(ColumnKey::E2 { i2, t }, ColumnOrigin::Initial);
                }
            }
        }
        if scope.phase3 {
            let patterns = homogeneous_2d(inst);
            for tau in 0..d.subperiods {
                for p in &patterns {
                    for m3 in 0..d.cutters {
                        master.insert(p.key(m3, tau), ColumnOrigin::Initial);
                    }
                }
            }
            for i3 in 0..d.sheet_types {
                for tau in 0..d.subperiods {
                    master.insert(ColumnKey::E3 { i3, tau }, ColumnOrigin::Initial);
                }
            }
        }
        master.check_supply()?;
        Ok(master)
    }

    /// Rows and right-hand sides only, no columns.
    pub fn empty(
        inst: &'a Instance,
        scope: Scope,
        extra: &ExtraDemand,
    ) -> Result<MasterProblem<'a>, MasterError> {
        if !scope.is_contiguous() {
            return Err(MasterError::BadScope(scope));
        }
        let layout = RowLayout::new(inst.dims, scope);
        let rhs = layout
            .rows()
            .map(|row| match row {
                RowId::JumboBalance { k, m1, t } => {
                    let shift = match (&extra.jumbos, scope.phase2) {
                        (Some(j), false) => j[k][m1][t],
                        _ => 0.0,
                    };
                    inst.phase1.demand[k][m1][t] + shift
                }
                RowId::ReelDemand { i2, t } => {
                    let shift = match &extra.reels {
                        Some(r) if t > 0 || !scope.phase3 => r[i2],
                        _ => 0.0,
                    };
                    inst.phase2.demand[i2][t] + shift
                }
                RowId::SheetDemand { i3, tau } => inst.phase3.demand[i3][tau],
                RowId::Capacity1 { t } => inst.phase1.capacity[t],
                RowId::Capacity2 { t } => inst.phase2.capacity[t],
                RowId::Capacity3 { tau } => inst.phase3.capacity[tau],
            })
            .collect();
        Ok(MasterProblem {
            inst,
            layout,
            rhs,
            extra: extra.clone(),
            columns: Vec::new(),
            lookup: HashMap::new(),
        })
    }

    /// A demand row with positive right-hand side needs some column that
    /// adds to it.
    fn check_supply(&self) -> Result<(), MasterError> {
        let mut supplied = vec![false; self.layout.len()];
        for col in &self.columns {
            for &(r, a) in &col.entries {
                if a > 0.0 {
                    supplied[r] = true;
                }
            }
        }
        for (r, row) in self.layout.rows().enumerate() {
            if !row.is_capacity() && self.rhs[r] > 0.0 && !supplied[r] {
                return Err(MasterError::Unsupplied(row));
            }
        }
        Ok(())
    }

    fn insert(&mut self, key: ColumnKey, origin: ColumnOrigin) -> bool {
        if self.lookup.contains_key(&key) {
            return false;
        }
        let col = canonical_column(self.inst, &self.layout, &key);
        let entries = col
            .entries
            .iter()
            .map(|&(row, a)| (self.layout.index(row).expect("in layout"), a))
            .collect();
        self.lookup.insert(key.clone(), self.columns.len());
        self.columns.push(MasterColumn {
            key,
            objective: col.objective,
            entries,
            origin,
        });
        true
    }

    /// Inserts a generated column; `false` when the key is already pooled.
    pub fn add_column(&mut self, key: ColumnKey) -> Result<bool, MasterError> {
        if !self.layout.scope().contains(key.phase()) {
            return Err(MasterError::ColumnOutOfScope(key, self.layout.scope()));
        }
        Ok(self.insert(key, ColumnOrigin::Generated))
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn layout(&self) -> &RowLayout {
        &self.layout
    }

    pub fn scope(&self) -> Scope {
        self.layout.scope()
    }

    /// Demand added on top of the instance's own, as passed at construction.
    pub fn extra(&self) -> &ExtraDemand {
        &self.extra
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn rhs_of(&self, row: RowId) -> Option<f64> {
        self.layout.index(row).map(|i| self.rhs[i])
    }

    pub fn columns(&self) -> &[MasterColumn] {
        &self.columns
    }

    pub fn column_index(&self, key: &ColumnKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    fn relation(row: RowId) -> Relation {
        if row.is_capacity() {
            Relation::Le
        } else {
            Relation::Eq
        }
    }

    /// LP over the pooled columns; column `j` of the pool is variable `j`.
    /// In feasibility mode one artificial per demand row follows the pool.
    pub fn to_linear_program(&self, mode: CostMode) -> LinearProgram {
        let mut lp = LinearProgram::new();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.layout.len()];
        for col in &self.columns {
            let cost = match mode {
                CostMode::Cost => col.objective,
                CostMode::Feasibility => 0.0,
            };
            let j = lp.add_var(cost);
            for &(r, a) in &col.entries {
                rows[r].push((j, a));
            }
        }
        if mode == CostMode::Feasibility {
            for (r, row) in self.layout.rows().enumerate() {
                if !row.is_capacity() {
                    let j = lp.add_var(1.0);
                    rows[r].push((j, 1.0));
                }
            }
        }
        for (r, coeffs) in rows.into_iter().enumerate() {
            lp.add_row(coeffs, Self::relation(self.layout.row(r)), self.rhs[r]);
        }
        lp
    }

    pub fn solve_mode(&self, mode: CostMode) -> Result<MasterSolution, MasterError> {
        let lp = self.to_linear_program(mode);
        let sol = solve_lp(&lp).map_err(|e| MasterError::Solver(e.to_string()))?;
        Ok(self.wrap(sol, mode))
    }

    fn wrap(&self, sol: LpSolution, mode: CostMode) -> MasterSolution {
        let n = self.columns.len();
        let weight = match mode {
            CostMode::Cost => 1.0,
            CostMode::Feasibility => 0.0,
        };
        MasterSolution {
            status: sol.status,
            objective: sol.objective,
            values: sol.x[..n].to_vec(),
            artificials: sol.x[n..].to_vec(),
            duals: Duals::new(self.layout, sol.duals, weight),
            iterations: sol.iterations,
        }
    }

    /// Solves the restricted master with true costs. An infeasible master is
    /// diagnosed by minimizing the total demand shortfall over the pool.
    pub fn solve(&self) -> Result<MasterSolution, MasterError> {
        let sol = self.solve_mode(CostMode::Cost)?;
        match sol.status {
            LpStatus::Optimal => Ok(sol),
            LpStatus::Infeasible => {
                let feas = self.solve_mode(CostMode::Feasibility)?;
                if !feas.is_optimal() {
                    return Err(MasterError::Solver(format!("{:?}", feas.status)));
                }
                Err(MasterError::Infeasible(self.diagnose(&feas)))
            }
            other => Err(MasterError::Solver(format!("{other:?}"))),
        }
    }

    /// Names short demand rows and the capacity rows whose duals show they
    /// limit the shortfall.
    pub fn diagnose(&self, feas: &MasterSolution) -> InfeasibilityReport {
        let demand_rows: Vec<RowId> = self.layout.rows().filter(|r| !r.is_capacity()).collect();
        let short: Vec<RowId> = demand_rows
            .iter()
            .zip(&feas.artificials)
            .filter(|(_, &v)| v > 1e-6)
            .map(|(&r, _)| r)
            .collect();
        let binding: Vec<RowId> = self
            .layout
            .rows()
            .filter(|r| r.is_capacity() && feas.duals.get(*r).abs() > 1e-9)
            .collect();
        let phase = binding
            .first()
            .or(short.first())
            .map_or(0, |r| r.phase());
        InfeasibilityReport {
            phase,
            short,
            binding,
        }
    }

    /// Value of the master objective at per-column values.
    pub fn objective_at(&self, values: &[f64]) -> f64 {
        self.columns.iter().zip(values).map(|(c, v)| c.objective * v).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate_tiny_instance;

    /// Single sheet type, single cutter, one sub-period; the reel holds an
    /// exact 40-sheet grid.
    fn sheet_only(demand: f64, capacity: f64) -> Instance {
        let mut inst = generate_tiny_instance(5, false);
        let d = &mut inst.dims;
        d.subperiods = 1;
        d.cutters = 1;
        d.reel_types = 1;
        d.sheet_types = 1;
        d.periods = 1;
        d.jumbo_machines = 1;
        d.rewinders = 1;
        inst.phase1.production_cost = vec![vec![vec![1.0]]];
        inst.phase1.stock_cost = vec![vec![0.1]];
        inst.phase1.jumbo_length = vec![40.0];
        inst.phase1.jumbo_weight = vec![vec![1.0]];
        inst.phase1.demand = vec![vec![vec![0.0]]];
        inst.phase1.production_time = vec![vec![1.0]];
        inst.phase1.capacity = vec![100.0];
        let p2 = &mut inst.phase2;
        p2.waste_cost = vec![vec![0.1]];
        p2.stock_cost = vec![vec![0.1]];
        p2.reel_length = vec![20.0];
        p2.reel_width = vec![16.0];
        p2.reel_weight = vec![1.0];
        p2.demand = vec![vec![0.0]];
        p2.cutting_time = vec![vec![vec![1.0]]];
        p2.capacity = vec![100.0];
        p2.reels_by_grammage = vec![vec![0]];
        let p3 = &mut inst.phase3;
        p3.waste_cost = vec![vec![0.01]];
        p3.stock_cost = vec![vec![0.1]];
        p3.sheet_length = vec![4.0];
        p3.sheet_width = vec![2.0];
        p3.sheet_weight = vec![1.0];
        p3.demand = vec![vec![demand]];
        p3.cutting_time = vec![vec![1.0]];
        p3.capacity = vec![capacity];
        p3.sheets_by_grammage = vec![vec![0]];
        inst
    }

    #[test]
    fn forced_single_pattern() {
        let inst = sheet_only(40.0, 10.0);
        let master = MasterProblem::build_initial(&inst, Scope::PHASE3, &ExtraDemand::default()).unwrap();
        let sol = master.solve().unwrap();
        let y = master
            .columns()
            .iter()
            .position(|c| c.key.is_cutting())
            .unwrap();
        assert!((sol.values[y] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn capacity_shortfall_names_capacity3() {
        let inst = sheet_only(400.0, 2.0);
        let master = MasterProblem::build_initial(&inst, Scope::PHASE3, &ExtraDemand::default()).unwrap();
        match master.solve() {
            Err(MasterError::Infeasible(report)) => {
                assert_eq!(report.phase, 3);
                assert_eq!(report.binding, vec![RowId::Capacity3 { tau: 0 }]);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn doubling_costs_doubles_objective() {
        let inst = generate_tiny_instance(11, true);
        let mut doubled = inst.clone();
        for v in doubled.phase1.production_cost.iter_mut().flatten().flatten() {
            *v *= 2.0;
        }
        for v in doubled.phase1.stock_cost.iter_mut().flatten() {
            *v *= 2.0;
        }
        for v in doubled
            .phase2
            .waste_cost
            .iter_mut()
            .chain(doubled.phase2.stock_cost.iter_mut())
            .chain(doubled.phase3.waste_cost.iter_mut())
            .chain(doubled.phase3.stock_cost.iter_mut())
            .flatten()
        {
            *v *= 2.0;
        }
        let a = MasterProblem::build_initial(&inst, Scope::ALL, &ExtraDemand::default()).unwrap();
        let b = MasterProblem::build_initial(&doubled, Scope::ALL, &ExtraDemand::default()).unwrap();
        let (sa, sb) = (a.solve().unwrap(), b.solve().unwrap());
        assert!((sb.objective - 2.0 * sa.objective).abs() <= 1e-9 * (1.0 + sa.objective.abs()));
        for (x, y) in sa.values.iter().zip(&sb.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn duplicate_column_rejected() {
        let inst = generate_tiny_instance(2, true);
        let mut master = MasterProblem::build_initial(&inst, Scope::ALL, &ExtraDemand::default()).unwrap();
        let mut counts = vec![0; inst.dims.reel_types];
        counts[0] = 1;
        let key = ColumnKey::Y2 { k: 0, m1: 0, m2: 0, t: 0, counts };
        assert_eq!(master.add_column(key.clone()), Ok(true));
        assert_eq!(master.add_column(key), Ok(false));
    }

    #[test]
    fn out_of_scope_column_rejected() {
        let inst = generate_tiny_instance(2, true);
        let mut master = MasterProblem::build_initial(&inst, Scope::PHASE3, &ExtraDemand::default()).unwrap();
        assert!(master.add_column(ColumnKey::E2 { i2: 0, t: 0 }).is_err());
    }

    #[test]
    fn stock_columns_link_periods() {
        let mut inst = generate_tiny_instance(2, true);
        inst.dims.periods = 2;
        inst.phase2.stock_cost = vec![vec![0.1, 0.1]; inst.dims.reel_types];
        let layout = RowLayout::new(inst.dims, Scope::PHASE2);
        let col = canonical_column(&inst, &layout, &ColumnKey::E2 { i2: 0, t: 0 });
        assert_eq!(
            col.entries,
            vec![
                (RowId::ReelDemand { i2: 0, t: 0 }, -1.0),
                (RowId::ReelDemand { i2: 0, t: 1 }, 1.0)
            ]
        );
    }

    #[test]
    fn sheet_columns_carry_counts() {
        let inst = generate_tiny_instance(4, true);
        let layout = RowLayout::new(inst.dims, Scope::ALL);
        let counts: Vec<u32> = (0..inst.dims.sheet_types as u32).map(|i| i + 1).collect();
        let key = ColumnKey::Y3 { i2: 0, m3: 0, tau: 0, counts: counts.clone() };
        let col = canonical_column(&inst, &layout, &key);
        for (i3, &a) in counts.iter().enumerate() {
            assert!(col.entries.contains(&(RowId::SheetDemand { i3, tau: 0 }, a as f64)));
        }
        assert!(col.entries.contains(&(RowId::ReelDemand { i2: 0, t: 0 }, -1.0)));
    }

    #[test]
    fn zero_demand_gives_zero() {
        let inst = generate_tiny_instance(8, true).without_demand();
        let master = MasterProblem::build_initial(&inst, Scope::ALL, &ExtraDemand::default()).unwrap();
        let sol = master.solve().unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reel_rhs_inflation_depends_on_scope() {
        let mut inst = generate_tiny_instance(6, true);
        inst.dims.periods = 2;
        let nf2 = inst.dims.reel_types;
        inst.phase2.demand = vec![vec![3.0, 4.0]; nf2];
        inst.phase2.waste_cost = vec![vec![0.1, 0.1]];
        inst.phase2.stock_cost = vec![vec![0.1, 0.1]; nf2];
        inst.phase2.capacity = vec![100.0, 100.0];
        inst.phase1.capacity = vec![100.0, 100.0];
        inst.phase1.stock_cost = vec![vec![0.1, 0.1]];
        let m1 = inst.dims.jumbo_machines;
        inst.phase1.production_cost = vec![vec![vec![1.0, 1.0]; m1]];
        inst.phase1.demand = vec![vec![vec![0.0, 0.0]; m1]];
        let extra = ExtraDemand { jumbos: None, reels: Some(vec![2.0; nf2]) };
        let alone = MasterProblem::empty(&inst, Scope::PHASE2, &extra).unwrap();
        let joint = MasterProblem::empty(&inst, Scope::ALL, &extra).unwrap();
        assert_eq!(alone.rhs_of(RowId::ReelDemand { i2: 0, t: 0 }), Some(5.0));
        assert_eq!(joint.rhs_of(RowId::ReelDemand { i2: 0, t: 0 }), Some(3.0));
        assert_eq!(joint.rhs_of(RowId::ReelDemand { i2: 0, t: 1 }), Some(6.0));
    }
}
