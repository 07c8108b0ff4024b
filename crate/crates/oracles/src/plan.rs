//! A from-scratch restatement of the planning model: row right-hand sides,
//! column coefficients, a constraint checker for integer plans and a
//! full-enumeration LP for tiny instances.

use std::collections::BTreeMap;

use paperplan::instances::Instance;
use paperplan::master::{ColumnKey, ExtraDemand, RowId, Scope};
use solvekit::{solve_lp, LinearProgram, Relation};

use crate::patterns::{grammage_of_reel, jumbo_patterns, reel_patterns};

/// Rows of the model restricted to `scope`, in family order.
pub fn rows(inst: &Instance, scope: Scope) -> Vec<RowId> {
    let d = inst.dims;
    let mut out = Vec::new();
    if scope.phase1 {
        for k in 0..d.grammages {
            for m1 in 0..d.jumbo_machines {
                for t in 0..d.periods {
                    out.push(RowId::JumboBalance { k, m1, t });
                }
            }
        }
        out.extend((0..d.periods).map(|t| RowId::Capacity1 { t }));
    }
    if scope.phase2 {
        for i2 in 0..d.reel_types {
            for t in 0..d.periods {
                out.push(RowId::ReelDemand { i2, t });
            }
        }
        out.extend((0..d.periods).map(|t| RowId::Capacity2 { t }));
    }
    if scope.phase3 {
        for i3 in 0..d.sheet_types {
            for tau in 0..d.subperiods {
                out.push(RowId::SheetDemand { i3, tau });
            }
        }
        out.extend((0..d.subperiods).map(|tau| RowId::Capacity3 { tau }));
    }
    out
}

pub fn rhs(inst: &Instance, scope: Scope, extra: &ExtraDemand, row: RowId) -> f64 {
    match row {
        RowId::JumboBalance { k, m1, t } => {
            let mut v = inst.phase1.demand[k][m1][t];
            if !scope.phase2 {
                if let Some(j) = &extra.jumbos {
                    v += j[k][m1][t];
                }
            }
            v
        }
        RowId::Capacity1 { t } => inst.phase1.capacity[t],
        RowId::ReelDemand { i2, t } => {
            let mut v = inst.phase2.demand[i2][t];
            if t > 0 || !scope.phase3 {
                if let Some(r) = &extra.reels {
                    v += r[i2];
                }
            }
            v
        }
        RowId::Capacity2 { t } => inst.phase2.capacity[t],
        RowId::SheetDemand { i3, tau } => inst.phase3.demand[i3][tau],
        RowId::Capacity3 { tau } => inst.phase3.capacity[tau],
    }
}

pub fn is_capacity(row: RowId) -> bool {
    matches!(row, RowId::Capacity1 { .. } | RowId::Capacity2 { .. } | RowId::Capacity3 { .. })
}

/// Objective coefficient and row coefficients of a column over all rows;
/// callers drop rows outside their scope.
pub fn column(inst: &Instance, key: &ColumnKey) -> (f64, BTreeMap<RowId, f64>) {
    let (p1, p2, p3) = (&inst.phase1, &inst.phase2, &inst.phase3);
    let mut a: BTreeMap<RowId, f64> = BTreeMap::new();
    let mut put = |row: RowId, v: f64| *a.entry(row).or_insert(0.0) += v;
    let cost = match key {
        &ColumnKey::X1 { k, m1, t } => {
            put(RowId::JumboBalance { k, m1, t }, 1.0);
            put(RowId::Capacity1 { t }, p1.production_time[k][m1]);
            p1.jumbo_weight[k][m1] * p1.production_cost[k][m1][t]
        }
        &ColumnKey::E1 { k, m1, t } => {
            put(RowId::JumboBalance { k, m1, t }, -1.0);
            if t + 1 < inst.dims.periods {
                put(RowId::JumboBalance { k, m1, t: t + 1 }, 1.0);
            }
            p1.jumbo_weight[k][m1] * p1.stock_cost[k][t]
        }
        ColumnKey::Y2 { k, m1, m2, t, counts } => {
            let mut used = 0.0;
            for i2 in 0..inst.dims.reel_types {
                let n = counts[i2] as f64;
                if n != 0.0 {
                    put(RowId::ReelDemand { i2, t: *t }, n);
                    used += n * p2.reel_length[i2];
                }
            }
            put(RowId::JumboBalance { k: *k, m1: *m1, t: *t }, -1.0);
            put(RowId::Capacity2 { t: *t }, p2.cutting_time[*k][*m1][*m2]);
            (p1.jumbo_length[*m1] - used) * p2.waste_cost[*k][*t]
        }
        &ColumnKey::E2 { i2, t } => {
            put(RowId::ReelDemand { i2, t }, -1.0);
            if t + 1 < inst.dims.periods {
                put(RowId::ReelDemand { i2, t: t + 1 }, 1.0);
            }
            p2.reel_weight[i2] * p2.stock_cost[i2][t]
        }
        ColumnKey::Y3 { i2, m3, tau, counts } => {
            let mut used = 0.0;
            for i3 in 0..inst.dims.sheet_types {
                let n = counts[i3] as f64;
                if n != 0.0 {
                    put(RowId::SheetDemand { i3, tau: *tau }, n);
                    used += n * p3.sheet_length[i3] * p3.sheet_width[i3];
                }
            }
            put(RowId::ReelDemand { i2: *i2, t: 0 }, -1.0);
            put(RowId::Capacity3 { tau: *tau }, p3.cutting_time[*i2][*m3]);
            let k = grammage_of_reel(inst, *i2);
            (p2.reel_length[*i2] * p2.reel_width[*i2] - used) * p3.waste_cost[k][*tau]
        }
        &ColumnKey::E3 { i3, tau } => {
            put(RowId::SheetDemand { i3, tau }, -1.0);
            if tau + 1 < inst.dims.subperiods {
                put(RowId::SheetDemand { i3, tau: tau + 1 }, 1.0);
            }
            p3.sheet_weight[i3] * p3.stock_cost[i3][tau]
        }
    };
    (cost, a)
}

fn phase_of(key: &ColumnKey) -> u8 {
    match key {
        ColumnKey::X1 { .. } | ColumnKey::E1 { .. } => 1,
        ColumnKey::Y2 { .. } | ColumnKey::E2 { .. } => 2,
        ColumnKey::Y3 { .. } | ColumnKey::E3 { .. } => 3,
    }
}

fn in_scope(scope: Scope, phase: u8) -> bool {
    match phase {
        1 => scope.phase1,
        2 => scope.phase2,
        _ => scope.phase3,
    }
}

/// Total cost of a plan.
pub fn plan_cost(inst: &Instance, plan: &[(ColumnKey, f64)]) -> f64 {
    plan.iter().map(|(key, v)| column(inst, key).0 * v).sum()
}

/// Every violated constraint of an integer plan, as readable messages.
/// Checks non-negativity, integrality of every column (stock included),
/// demand equalities and capacities.
pub fn check_integer_plan(inst: &Instance, scope: Scope, extra: &ExtraDemand, plan: &[(ColumnKey, f64)]) -> Vec<String> {
    const TOL: f64 = 1e-6;
    let mut problems = Vec::new();
    let mut activity: BTreeMap<RowId, f64> = BTreeMap::new();
    for (key, v) in plan {
        if !in_scope(scope, phase_of(key)) {
            problems.push(format!("{key:?} lies outside {scope}"));
        }
        if *v < 0.0 {
            problems.push(format!("{key:?} is negative ({v})"));
        }
        if (v - v.round()).abs() > TOL {
            problems.push(format!("{key:?} is fractional ({v})"));
        }
        for (row, a) in column(inst, key).1 {
            *activity.entry(row).or_insert(0.0) += a * v;
        }
    }
    for row in rows(inst, scope) {
        let act = activity.get(&row).copied().unwrap_or(0.0);
        let b = rhs(inst, scope, extra, row);
        let slack = TOL * (1.0 + b.abs());
        if is_capacity(row) {
            if act > b + slack {
                problems.push(format!("{row:?}: {act} exceeds {b}"));
            }
        } else if (act - b).abs() > slack {
            problems.push(format!("{row:?}: {act} differs from {b}"));
        }
    }
    problems
}

/// Every column the model can have on a tiny instance: production, stock
/// and all non-empty cutting patterns on every machine.
pub fn all_columns(inst: &Instance, scope: Scope) -> Vec<ColumnKey> {
    let d = inst.dims;
    let mut keys = Vec::new();
    if scope.phase1 {
        for k in 0..d.grammages {
            for m1 in 0..d.jumbo_machines {
                for t in 0..d.periods {
                    keys.push(ColumnKey::X1 { k, m1, t });
                    keys.push(ColumnKey::E1 { k, m1, t });
                }
            }
        }
    }
    if scope.phase2 {
        for k in 0..d.grammages {
            for m1 in 0..d.jumbo_machines {
                let patterns = jumbo_patterns(inst, k, m1);
                for m2 in 0..d.rewinders {
                    for t in 0..d.periods {
                        for counts in &patterns {
                            keys.push(ColumnKey::Y2 { k, m1, m2, t, counts: counts.clone() });
                        }
                    }
                }
            }
        }
        for i2 in 0..d.reel_types {
            for t in 0..d.periods {
                keys.push(ColumnKey::E2 { i2, t });
            }
        }
    }
    if scope.phase3 {
        for i2 in 0..d.reel_types {
            let patterns = reel_patterns(inst, i2);
            for m3 in 0..d.cutters {
                for tau in 0..d.subperiods {
                    for counts in &patterns {
                        keys.push(ColumnKey::Y3 { i2, m3, tau, counts: counts.clone() });
                    }
                }
            }
        }
        for i3 in 0..d.sheet_types {
            for tau in 0..d.subperiods {
                keys.push(ColumnKey::E3 { i3, tau });
            }
        }
    }
    keys
}

/// LP optimum over every enumerable column, or `None` when infeasible.
pub fn enumeration_lp(inst: &Instance, scope: Scope, extra: &ExtraDemand) -> Option<f64> {
    let row_ids = rows(inst, scope);
    let index: BTreeMap<RowId, usize> = row_ids.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut coeffs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); row_ids.len()];
    let mut lp = LinearProgram::new();
    for key in all_columns(inst, scope) {
        let (cost, entries) = column(inst, &key);
        let j = lp.add_var(cost);
        for (row, a) in entries {
            if let Some(&i) = index.get(&row) {
                coeffs[i].push((j, a));
            }
        }
    }
    for (i, row) in row_ids.iter().enumerate() {
        let relation = if is_capacity(*row) { Relation::Le } else { Relation::Eq };
        lp.add_row(std::mem::take(&mut coeffs[i]), relation, rhs(inst, scope, extra, *row));
    }
    let sol = solve_lp(&lp).expect("well-formed enumeration LP");
    sol.is_optimal().then_some(sol.objective)
}

/// Smallest reduced cost over every enumerable column under `dual`, which
/// maps a row to its dual value. Rows outside `scope` are ignored.
pub fn min_reduced_cost(inst: &Instance, scope: Scope, dual: &dyn Fn(RowId) -> f64) -> (f64, ColumnKey) {
    let in_rows: Vec<RowId> = rows(inst, scope);
    all_columns(inst, scope)
        .into_iter()
        .map(|key| {
            let (cost, entries) = column(inst, &key);
            let priced: f64 = entries
                .iter()
                .filter(|(row, _)| in_rows.contains(row))
                .map(|(&row, &a)| a * dual(row))
                .sum();
            (cost - priced, key)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one column")
}
