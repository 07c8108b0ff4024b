use serde::{Deserialize, Serialize};

use super::layout::{RowId, RowLayout};
use crate::instances::Instance;

/// Identity of a master column. Cutting columns embed their item counts so
/// that a re-generated pattern is recognised as a duplicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ColumnKey {
    X1 { k: usize, m1: usize, t: usize },
    E1 { k: usize, m1: usize, t: usize },
    Y2 { k: usize, m1: usize, m2: usize, t: usize, counts: Vec<u32> },
    E2 { i2: usize, t: usize },
    Y3 { i2: usize, m3: usize, tau: usize, counts: Vec<u32> },
    E3 { i3: usize, tau: usize },
}

impl ColumnKey {
    pub fn phase(&self) -> u8 {
        match self {
            ColumnKey::X1 { .. } | ColumnKey::E1 { .. } => 1,
            ColumnKey::Y2 { .. } | ColumnKey::E2 { .. } => 2,
            ColumnKey::Y3 { .. } | ColumnKey::E3 { .. } => 3,
        }
    }

    pub fn is_stock(&self) -> bool {
        matches!(self, ColumnKey::E1 { .. } | ColumnKey::E2 { .. } | ColumnKey::E3 { .. })
    }

    pub fn is_cutting(&self) -> bool {
        matches!(self, ColumnKey::Y2 { .. } | ColumnKey::Y3 { .. })
    }

    /// Period for phases 1 and 2, sub-period for phase 3.
    pub fn time(&self) -> usize {
        match *self {
            ColumnKey::X1 { t, .. }
            | ColumnKey::E1 { t, .. }
            | ColumnKey::Y2 { t, .. }
            | ColumnKey::E2 { t, .. } => t,
            ColumnKey::Y3 { tau, .. } | ColumnKey::E3 { tau, .. } => tau,
        }
    }
}

/// Trim length left on a jumbo by a one-dimensional pattern, in cm.
pub fn jumbo_waste(inst: &Instance, m1: usize, counts: &[u32]) -> f64 {
    let used: f64 = counts
        .iter()
        .zip(&inst.phase2.reel_length)
        .map(|(&a, l)| a as f64 * l)
        .sum();
    inst.phase1.jumbo_length[m1] - used
}

/// Trim area left on a reel by a two-dimensional pattern, in cm².
pub fn reel_waste(inst: &Instance, i2: usize, counts: &[u32]) -> f64 {
    let p3 = &inst.phase3;
    let used: f64 = counts
        .iter()
        .enumerate()
        .map(|(i3, &a)| a as f64 * p3.sheet_length[i3] * p3.sheet_width[i3])
        .sum();
    inst.phase2.reel_length[i2] * inst.phase2.reel_width[i2] - used
}

/// Objective coefficient and row coefficients of a column, restricted to the
/// rows present in `layout`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalColumn {
    pub objective: f64,
    pub entries: Vec<(RowId, f64)>,
}

/// Builds a column from its key. This is the single source of truth for the
/// column structure; pricing and audits both go through it.
pub fn canonical_column(inst: &Instance, layout: &RowLayout, key: &ColumnKey) -> CanonicalColumn {
    let (p1, p2, p3) = (&inst.phase1, &inst.phase2, &inst.phase3);
    let periods = inst.dims.periods;
    let subperiods = inst.dims.subperiods;
    let mut entries: Vec<(RowId, f64)> = Vec::new();
    let objective;
    match key {
        &ColumnKey::X1 { k, m1, t } => {
            objective = p1.production_cost[k][m1][t] * p1.jumbo_weight[k][m1];
            entries.push((RowId::JumboBalance { k, m1, t }, 1.0));
            entries.push((RowId::Capacity1 { t }, p1.production_time[k][m1]));
        }
        &ColumnKey::E1 { k, m1, t } => {
            objective = p1.stock_cost[k][t] * p1.jumbo_weight[k][m1];
            entries.push((RowId::JumboBalance { k, m1, t }, -1.0));
            if t + 1 < periods {
                entries.push((RowId::JumboBalance { k, m1, t: t + 1 }, 1.0));
            }
        }
        ColumnKey::Y2 {
            k,
            m1,
            m2,
            t,
            counts,
        } => {
            let (k, m1, m2, t) = (*k, *m1, *m2, *t);
            objective = p2.waste_cost[k][t] * jumbo_waste(inst, m1, counts);
            entries.push((RowId::JumboBalance { k, m1, t }, -1.0));
            for (i2, &a) in counts.iter().enumerate() {
                if a > 0 {
                    entries.push((RowId::ReelDemand { i2, t }, a as f64));
                }
            }
            entries.push((RowId::Capacity2 { t }, p2.cutting_time[k][m1][m2]));
        }
        &ColumnKey::E2 { i2, t } => {
            objective = p2.stock_cost[i2][t] * p2.reel_weight[i2];
            entries.push((RowId::ReelDemand { i2, t }, -1.0));
            if t + 1 < periods {
                entries.push((RowId::ReelDemand { i2, t: t + 1 }, 1.0));
            }
        }
        ColumnKey::Y3 {
            i2,
            m3,
            tau,
            counts,
        } => {
            let (i2, m3, tau) = (*i2, *m3, *tau);
            let k = inst.grammage_of_reel(i2);
            objective = p3.waste_cost[k][tau] * reel_waste(inst, i2, counts);
            entries.push((RowId::ReelDemand { i2, t: 0 }, -1.0));
            for (i3, &a) in counts.iter().enumerate() {
                if a > 0 {
                    entries.push((RowId::SheetDemand { i3, tau }, a as f64));
                }
            }
            entries.push((RowId::Capacity3 { tau }, p3.cutting_time[i2][m3]));
        }
        &ColumnKey::E3 { i3, tau } => {
            objective = p3.stock_cost[i3][tau] * p3.sheet_weight[i3];
            entries.push((RowId::SheetDemand { i3, tau }, -1.0));
            if tau + 1 < subperiods {
                entries.push((RowId::SheetDemand { i3, tau: tau + 1 }, 1.0));
            }
        }
    }
    entries.retain(|(row, _)| layout.index(*row).is_some());
    CanonicalColumn { objective, entries }
}

/// Dual values addressed by row identity. Rows outside the layout read as 0.
/// `cost_weight` scales objective coefficients; it is 0 while searching for
/// a feasible master and 1 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Duals {
    layout: RowLayout,
    values: Vec<f64>,
    cost_weight: f64,
}

impl Duals {
    pub fn new(layout: RowLayout, values: Vec<f64>, cost_weight: f64) -> Duals {
        assert_eq!(values.len(), layout.len(), "one dual per row");
        Duals {
            layout,
            values,
            cost_weight,
        }
    }

    pub fn zero(layout: RowLayout) -> Duals {
        Duals::new(layout, vec![0.0; layout.len()], 1.0)
    }

    pub fn get(&self, row: RowId) -> f64 {
        self.layout.index(row).map_or(0.0, |i| self.values[i])
    }

    pub fn set(&mut self, row: RowId, value: f64) {
        let i = self.layout.index(row).expect("row in layout");
        self.values[i] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cost_weight(&self) -> f64 {
        self.cost_weight
    }

    pub fn layout(&self) -> &RowLayout {
        &self.layout
    }
}

/// Objective coefficient minus dual-weighted row coefficients.
pub fn column_reduced_cost(inst: &Instance, key: &ColumnKey, duals: &Duals) -> f64 {
    let col = canonical_column(inst, duals.layout(), key);
    let priced: f64 = col.entries.iter().map(|&(row, a)| duals.get(row) * a).sum();
    duals.cost_weight() * col.objective - priced
}
