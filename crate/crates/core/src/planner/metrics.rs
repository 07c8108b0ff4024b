use serde::{Deserialize, Serialize};

use super::ComponentSolution;
use crate::master::{jumbo_waste, reel_waste, ColumnKey, ColumnOrigin, RowId};

/// Rounded-solution figures of one phase.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseMetrics {
    /// Production cost for jumbos, trim cost for cutting phases.
    pub cost: f64,
    pub stock_cost: f64,
    /// Trim in cm for reel cutting, cm² for sheet cutting, 0 for jumbos.
    pub waste: f64,
    /// Units held in stock at the end of each (sub-)period.
    pub stock_units: Vec<f64>,
    /// Largest used share of capacity over the (sub-)periods.
    pub capacity_fraction: f64,
    /// Cutting columns with value at least 1, by origin.
    pub used_initial: usize,
    pub used_generated: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanMetrics {
    pub phases: [PhaseMetrics; 3],
}

impl PlanMetrics {
    /// Each phase is read from the one component whose scope contains it.
    pub fn collect(components: &[ComponentSolution<'_>]) -> PlanMetrics {
        let mut out = PlanMetrics::default();
        for comp in components {
            let master = &comp.master;
            let inst = master.instance();
            let d = inst.dims;
            let values = &comp.rounded.values;
            for phase in 1..=3u8 {
                if !master.scope().contains(phase) {
                    continue;
                }
                let slots = if phase == 3 { d.subperiods } else { d.periods };
                let m = &mut out.phases[phase as usize - 1];
                m.stock_units = vec![0.0; slots];
                for (col, &v) in master.columns().iter().zip(values) {
                    if col.key.phase() != phase || v == 0.0 {
                        continue;
                    }
                    if col.key.is_stock() {
                        m.stock_cost += col.objective * v;
                        m.stock_units[col.key.time()] += v;
                        continue;
                    }
                    m.cost += col.objective * v;
                    match &col.key {
                        ColumnKey::Y2 { m1, counts, .. } => m.waste += jumbo_waste(inst, *m1, counts) * v,
                        ColumnKey::Y3 { i2, counts, .. } => m.waste += reel_waste(inst, *i2, counts) * v,
                        _ => {}
                    }
                    if col.key.is_cutting() && v >= 1.0 {
                        match col.origin {
                            ColumnOrigin::Initial => m.used_initial += 1,
                            ColumnOrigin::Generated => m.used_generated += 1,
                        }
                    }
                }
                for (r, row) in master.layout().rows().enumerate() {
                    let capacity_row = matches!(
                        (phase, row),
                        (1, RowId::Capacity1 { .. }) | (2, RowId::Capacity2 { .. }) | (3, RowId::Capacity3 { .. })
                    );
                    if !capacity_row {
                        continue;
                    }
                    let used: f64 = master
                        .columns()
                        .iter()
                        .zip(values)
                        .flat_map(|(c, &v)| c.entries.iter().filter(|e| e.0 == r).map(move |e| e.1 * v))
                        .sum();
                    let cap = master.rhs()[r];
                    let frac = if cap > 0.0 { used / cap } else { 0.0 };
                    m.capacity_fraction = m.capacity_fraction.max(frac);
                }
            }
        }
        out
    }
}
