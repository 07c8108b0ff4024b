//! Cutting-pattern generation: homogeneous seeds, one-dimensional knapsack
//! pricing for jumbo cutting and two-stage guillotine pricing for reel
//! cutting.
//!
//! Reduced costs are always evaluated through the master's canonical column,
//! so a pattern priced here and re-evaluated by the master agree exactly.

mod knapsack;

use serde::{Deserialize, Serialize};

pub use knapsack::{solve_knapsack, KnapsackSpec};

use crate::instances::Instance;
use crate::master::{column_reduced_cost, jumbo_waste, reel_waste, ColumnKey, Duals, RowId};

/// Reduced costs below `-TOL_PRICE` mark an improving column.
pub const TOL_PRICE: f64 = 1e-6;

/// Reels cut from one jumbo. `counts` spans all reel types; entries outside
/// the jumbo's grammage are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern1D {
    pub grammage: usize,
    pub jumbo_machine: usize,
    pub counts: Vec<u32>,
    /// Unused jumbo length, cm.
    pub waste: f64,
}

impl Pattern1D {
    pub fn new(inst: &Instance, grammage: usize, jumbo_machine: usize, counts: Vec<u32>) -> Self {
        let waste = jumbo_waste(inst, jumbo_machine, &counts);
        Pattern1D {
            grammage,
            jumbo_machine,
            counts,
            waste,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&a| a == 0)
    }

    pub fn key(&self, rewinder: usize, t: usize) -> ColumnKey {
        ColumnKey::Y2 {
            k: self.grammage,
            m1: self.jumbo_machine,
            m2: rewinder,
            t,
            counts: self.counts.clone(),
        }
    }
}

/// First-stage strip spanning the reel width, as long as its reference sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripPattern {
    pub reel: usize,
    /// Sheet type whose length sets the strip length.
    pub reference: usize,
    pub length: f64,
    /// Sheets placed side by side across the strip, per sheet type.
    pub counts: Vec<u32>,
    pub value: f64,
}

/// Two-stage guillotine pattern of one reel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern2D {
    pub reel: usize,
    pub strips: Vec<StripPattern>,
    /// Copies of each strip along the reel length.
    pub strip_copies: Vec<u32>,
    /// Sheets per type, summed over strips.
    pub counts: Vec<u32>,
    /// Unused reel area, cm².
    pub waste: f64,
}

impl Pattern2D {
    pub fn assemble(inst: &Instance, reel: usize, strips: Vec<StripPattern>, strip_copies: Vec<u32>) -> Self {
        assert_eq!(strips.len(), strip_copies.len());
        let mut counts = vec![0u32; inst.dims.sheet_types];
        for (strip, &copies) in strips.iter().zip(&strip_copies) {
            for (total, &a) in counts.iter_mut().zip(&strip.counts) {
                *total += a * copies;
            }
        }
        let waste = reel_waste(inst, reel, &counts);
        Pattern2D {
            reel,
            strips,
            strip_copies,
            counts,
            waste,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&a| a == 0)
    }

    pub fn key(&self, cutter: usize, tau: usize) -> ColumnKey {
        ColumnKey::Y3 {
            i2: self.reel,
            m3: cutter,
            tau,
            counts: self.counts.clone(),
        }
    }
}

/// One homogeneous pattern per (grammage, jumbo machine, reel type) that fits.
pub fn homogeneous_1d(inst: &Instance) -> Vec<Pattern1D> {
    let mut out = Vec::new();
    for (k, reels) in inst.phase2.reels_by_grammage.iter().enumerate() {
        for m1 in 0..inst.dims.jumbo_machines {
            let length = inst.phase1.jumbo_length[m1];
            for &i2 in reels {
                let n = (length / inst.phase2.reel_length[i2]).floor() as u32;
                if n > 0 {
                    let mut counts = vec![0; inst.dims.reel_types];
                    counts[i2] = n;
                    out.push(Pattern1D::new(inst, k, m1, counts));
                }
            }
        }
    }
    out
}

/// One homogeneous pattern per compatible (reel, sheet) pair: a grid of a
/// single sheet type.
pub fn homogeneous_2d(inst: &Instance) -> Vec<Pattern2D> {
    let (p2, p3) = (&inst.phase2, &inst.phase3);
    let mut out = Vec::new();
    for (k, reels) in p2.reels_by_grammage.iter().enumerate() {
        for &i2 in reels {
            for &i3 in &p3.sheets_by_grammage[k] {
                let across = (p2.reel_width[i2] / p3.sheet_width[i3]).floor() as u32;
                let along = (p2.reel_length[i2] / p3.sheet_length[i3]).floor() as u32;
                if across == 0 || along == 0 {
                    continue;
                }
                let mut counts = vec![0; inst.dims.sheet_types];
                counts[i3] = across;
                let strip = StripPattern {
                    reel: i2,
                    reference: i3,
                    length: p3.sheet_length[i3],
                    counts,
                    value: 0.0,
                };
                out.push(Pattern2D::assemble(inst, i2, vec![strip], vec![along]));
            }
        }
    }
    out
}

/// Best jumbo pattern with the rewinder that prices it lowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Priced1D {
    pub pattern: Pattern1D,
    pub rewinder: usize,
    pub reduced_cost: f64,
}

impl Priced1D {
    pub fn key(&self, t: usize) -> ColumnKey {
        self.pattern.key(self.rewinder, t)
    }
}

/// Prices jumbo patterns of grammage `k` on jumbo machine `m1` in period `t`.
pub fn price_1d(inst: &Instance, duals: &Duals, k: usize, m1: usize, t: usize) -> Priced1D {
    let w = duals.cost_weight();
    let reels = &inst.phase2.reels_by_grammage[k];
    let c2 = inst.phase2.waste_cost[k][t];
    let spec = KnapsackSpec {
        sizes: reels.iter().map(|&i2| inst.phase2.reel_length[i2] as u64).collect(),
        values: reels
            .iter()
            .map(|&i2| w * c2 * inst.phase2.reel_length[i2] + duals.get(RowId::ReelDemand { i2, t }))
            .collect(),
        capacity: inst.phase1.jumbo_length[m1] as u64,
    };
    let (chosen, _) = solve_knapsack(&spec);
    let mut counts = vec![0u32; inst.dims.reel_types];
    for (&i2, &a) in reels.iter().zip(&chosen) {
        counts[i2] = a as u32;
    }
    let pattern = Pattern1D::new(inst, k, m1, counts);
    let (rewinder, reduced_cost) = (0..inst.dims.rewinders)
        .map(|m2| (m2, column_reduced_cost(inst, &pattern.key(m2, t), duals)))
        .fold(None, pick_lowest)
        .expect("at least one rewinder");
    Priced1D {
        pattern,
        rewinder,
        reduced_cost,
    }
}

fn pick_lowest(best: Option<(usize, f64)>, cand: (usize, f64)) -> Option<(usize, f64)> {
    match best {
        Some(b) if b.1 <= cand.1 => Some(b),
        _ => Some(cand),
    }
}

/// Sheet types allowed in a strip whose length is set by `reference`.
pub fn strip_items(inst: &Instance, reference: usize) -> Vec<usize> {
    let p3 = &inst.phase3;
    let k = inst.grammage_of_sheet(reference);
    let limit = p3.sheet_length[reference];
    p3.sheets_by_grammage[k]
        .iter()
        .copied()
        .filter(|&i3| {
            if p3.trimming_allowed {
                p3.sheet_length[i3] <= limit
            } else {
                p3.sheet_length[i3] == limit
            }
        })
        .collect()
}

/// One representative sheet per distinct sheet length of the reel's grammage,
/// lowest index first, ordered by sheet index.
pub fn strip_references(inst: &Instance, reel: usize) -> Vec<usize> {
    let p3 = &inst.phase3;
    let k = inst.grammage_of_reel(reel);
    let mut sheets = p3.sheets_by_grammage[k].clone();
    sheets.sort_unstable();
    let mut refs: Vec<usize> = Vec::new();
    for i3 in sheets {
        if !refs.iter().any(|&r| p3.sheet_length[r] == p3.sheet_length[i3]) {
            refs.push(i3);
        }
    }
    refs
}

/// Item value of a sheet in the strip and pattern knapsacks.
fn sheet_value(inst: &Instance, duals: &Duals, i3: usize, tau: usize) -> f64 {
    let p3 = &inst.phase3;
    let k = inst.grammage_of_sheet(i3);
    duals.cost_weight() * p3.waste_cost[k][tau] * p3.sheet_length[i3] * p3.sheet_width[i3]
        + duals.get(RowId::SheetDemand { i3, tau })
}

/// Most valuable strip of reel `i2` with the length of sheet `reference`.
pub fn price_strip(inst: &Instance, duals: &Duals, i2: usize, reference: usize, tau: usize) -> StripPattern {
    let p3 = &inst.phase3;
    assert_eq!(
        inst.grammage_of_reel(i2),
        inst.grammage_of_sheet(reference),
        "strip reference must share the reel's grammage"
    );
    let items = strip_items(inst, reference);
    let spec = KnapsackSpec {
        sizes: items.iter().map(|&i3| p3.sheet_width[i3] as u64).collect(),
        values: items.iter().map(|&i3| sheet_value(inst, duals, i3, tau)).collect(),
        capacity: inst.phase2.reel_width[i2] as u64,
    };
    let (chosen, value) = solve_knapsack(&spec);
    let mut counts = vec![0u32; inst.dims.sheet_types];
    for (&i3, &a) in items.iter().zip(&chosen) {
        counts[i3] = a as u32;
    }
    StripPattern {
        reel: i2,
        reference,
        length: p3.sheet_length[reference],
        counts,
        value,
    }
}

/// Best two-stage pattern with the cutter that prices it lowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Priced2D {
    pub pattern: Pattern2D,
    pub cutter: usize,
    pub reduced_cost: f64,
}

impl Priced2D {
    pub fn key(&self, tau: usize) -> ColumnKey {
        self.pattern.key(self.cutter, tau)
    }
}

/// Prices reel `i2` in sub-period `tau`: one strip per reference length, then
/// a knapsack over strip copies bounded by the reel length.
pub fn build_pattern_2d(inst: &Instance, duals: &Duals, i2: usize, tau: usize) -> Priced2D {
    let strips: Vec<StripPattern> = strip_references(inst, i2)
        .into_iter()
        .map(|r| price_strip(inst, duals, i2, r, tau))
        .collect();
    let spec = KnapsackSpec {
        sizes: strips.iter().map(|s| s.length as u64).collect(),
        values: strips.iter().map(|s| s.value).collect(),
        capacity: inst.phase2.reel_length[i2] as u64,
    };
    let (copies, _) = solve_knapsack(&spec);
    let copies: Vec<u32> = copies.into_iter().map(|c| c as u32).collect();
    let pattern = Pattern2D::assemble(inst, i2, strips, copies);
    let (cutter, reduced_cost) = (0..inst.dims.cutters)
        .map(|m3| (m3, column_reduced_cost(inst, &pattern.key(m3, tau), duals)))
        .fold(None, pick_lowest)
        .expect("at least one cutter");
    Priced2D {
        pattern,
        cutter,
        reduced_cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate_tiny_instance;
    use crate::master::{RowLayout, Scope};

    /// One grammage, one machine per phase, one period and sub-period.
    fn unit_instance(reels: &[(f64, f64)], sheets: &[(f64, f64)], jumbo: f64, trimming: bool) -> Instance {
        let mut inst = generate_tiny_instance(0, trimming);
        let d = &mut inst.dims;
        d.periods = 1;
        d.subperiods = 1;
        d.jumbo_machines = 1;
        d.rewinders = 1;
        d.cutters = 1;
        d.reel_types = reels.len();
        d.sheet_types = sheets.len();
        let (nf2, nf3) = (reels.len(), sheets.len());
        let p1 = &mut inst.phase1;
        p1.production_cost = vec![vec![vec![1.0]]];
        p1.stock_cost = vec![vec![0.1]];
        p1.jumbo_length = vec![jumbo];
        p1.jumbo_weight = vec![vec![1.0]];
        p1.demand = vec![vec![vec![0.0]]];
        p1.production_time = vec![vec![1.0]];
        p1.capacity = vec![100.0];
        let p2 = &mut inst.phase2;
        p2.waste_cost = vec![vec![0.01]];
        p2.stock_cost = vec![vec![0.1]; nf2];
        p2.reel_width = reels.iter().map(|r| r.0).collect();
        p2.reel_length = reels.iter().map(|r| r.1).collect();
        p2.reel_weight = vec![1.0; nf2];
        p2.demand = vec![vec![0.0]; nf2];
        p2.cutting_time = vec![vec![vec![2.0]]];
        p2.capacity = vec![100.0];
        p2.reels_by_grammage = vec![(0..nf2).collect()];
        let p3 = &mut inst.phase3;
        p3.waste_cost = vec![vec![0.001]];
        p3.stock_cost = vec![vec![0.1]; nf3];
        p3.sheet_width = sheets.iter().map(|s| s.0).collect();
        p3.sheet_length = sheets.iter().map(|s| s.1).collect();
        p3.sheet_weight = vec![1.0; nf3];
        p3.demand = vec![vec![0.0]; nf3];
        p3.cutting_time = vec![vec![1.0]; nf2];
        p3.capacity = vec![100.0];
        p3.sheets_by_grammage = vec![(0..nf3).collect()];
        inst
    }

    fn duals(inst: &Instance) -> Duals {
        Duals::zero(RowLayout::new(inst.dims, Scope::ALL))
    }

    #[test]
    fn homogeneous_1d_floor_and_waste() {
        let inst = unit_instance(&[(10.0, 300.0)], &[(5.0, 5.0)], 1000.0, true);
        let pats = homogeneous_1d(&inst);
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].counts, vec![3]);
        assert_eq!(pats[0].waste, 100.0);
    }

    #[test]
    fn homogeneous_1d_omits_oversize() {
        let inst = unit_instance(&[(10.0, 1200.0)], &[(5.0, 5.0)], 1000.0, true);
        assert!(homogeneous_1d(&inst).is_empty());
    }

    #[test]
    fn homogeneous_1d_one_per_type_and_machine() {
        let mut inst = unit_instance(&[(10.0, 300.0), (10.0, 400.0)], &[(5.0, 5.0)], 1000.0, true);
        inst.dims.jumbo_machines = 2;
        inst.phase1.jumbo_length = vec![1000.0, 800.0];
        let pats = homogeneous_1d(&inst);
        assert_eq!(pats.len(), 4);
        assert_eq!(pats.iter().filter(|p| p.jumbo_machine == 1).count(), 2);
    }

    #[test]
    fn homogeneous_2d_grid() {
        let inst = unit_instance(&[(100.0, 1000.0)], &[(40.0, 50.0)], 1000.0, true);
        let pats = homogeneous_2d(&inst);
        assert_eq!(pats[0].counts, vec![40]);
        assert_eq!(pats[0].waste, 100.0 * 1000.0 - 40.0 * 2000.0);
    }

    #[test]
    fn homogeneous_2d_omits_wide_sheet_and_tiles_exactly() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(120.0, 50.0), (25.0, 25.0)], 1000.0, true);
        let pats = homogeneous_2d(&inst);
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].counts, vec![0, 16]);
        assert_eq!(pats[0].waste, 0.0);
    }

    #[test]
    fn price_1d_zero_duals_not_improving() {
        let inst = unit_instance(&[(10.0, 300.0), (10.0, 450.0)], &[(5.0, 5.0)], 1000.0, true);
        let priced = price_1d(&inst, &duals(&inst), 0, 0, 0);
        // 3x300 and 2x450 both use 900 cm; the tie goes to the first item.
        assert_eq!(priced.pattern.counts, vec![3, 0]);
        assert!(priced.reduced_cost >= 0.0);
        assert_eq!(priced.reduced_cost, 0.01 * priced.pattern.waste);
        assert_eq!(priced.pattern.waste, 100.0);
    }

    #[test]
    fn price_1d_large_reel_dual() {
        let inst = unit_instance(&[(10.0, 300.0)], &[(5.0, 5.0)], 1000.0, true);
        let mut d = duals(&inst);
        d.set(RowId::ReelDemand { i2: 0, t: 0 }, 50.0);
        let priced = price_1d(&inst, &d, 0, 0, 0);
        assert_eq!(priced.pattern.counts, vec![3]);
        // waste 100 at 0.01, minus 3 reels at 50, jumbo balance and capacity duals 0
        assert!((priced.reduced_cost - (1.0 - 150.0)).abs() < 1e-12);
    }

    #[test]
    fn price_1d_negative_values_give_empty() {
        let inst = unit_instance(&[(10.0, 300.0)], &[(5.0, 5.0)], 1000.0, true);
        let mut d = duals(&inst);
        d.set(RowId::ReelDemand { i2: 0, t: 0 }, -50.0);
        let priced = price_1d(&inst, &d, 0, 0, 0);
        assert!(priced.pattern.is_empty());
        assert!(priced.reduced_cost >= 0.0);
    }

    #[test]
    fn price_strip_no_trimming_is_homogeneous() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(30.0, 20.0)], 1000.0, false);
        let strip = price_strip(&inst, &duals(&inst), 0, 0, 0);
        assert_eq!(strip.counts, vec![3]);
    }

    #[test]
    fn price_strip_two_widths() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(30.0, 20.0), (40.0, 20.0)], 1000.0, false);
        let mut d = duals(&inst);
        d.set(RowId::SheetDemand { i3: 0, tau: 0 }, 9.0 - 0.001 * 600.0);
        d.set(RowId::SheetDemand { i3: 1, tau: 0 }, 14.0 - 0.001 * 800.0);
        let strip = price_strip(&inst, &d, 0, 0, 0);
        assert_eq!(strip.counts, vec![2, 1]);
        assert!((strip.value - 32.0).abs() < 1e-9);
    }

    #[test]
    fn price_strip_negative_values() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(30.0, 20.0)], 1000.0, true);
        let mut d = duals(&inst);
        d.set(RowId::SheetDemand { i3: 0, tau: 0 }, -5.0);
        let strip = price_strip(&inst, &d, 0, 0, 0);
        assert_eq!(strip.counts, vec![0]);
        assert_eq!(strip.value, 0.0);
    }

    #[test]
    fn strip_sets_follow_trimming() {
        let sheets = [(10.0, 30.0), (10.0, 40.0), (10.0, 30.0)];
        let on = unit_instance(&[(100.0, 100.0)], &sheets, 1000.0, true);
        let off = unit_instance(&[(100.0, 100.0)], &sheets, 1000.0, false);
        assert_eq!(strip_references(&on, 0), vec![0, 1]);
        assert_eq!(strip_items(&on, 1), vec![0, 1, 2]);
        assert_eq!(strip_items(&off, 1), vec![1]);
        assert_eq!(strip_items(&off, 0), vec![0, 2]);
    }

    #[test]
    fn strip_copies_respect_reel_length() {
        // Strips of length 30 and 40 with utilities 9 and 14 on a 100 cm reel.
        let inst = unit_instance(&[(100.0, 100.0)], &[(100.0, 30.0), (100.0, 40.0)], 1000.0, false);
        let mut d = duals(&inst);
        d.set(RowId::SheetDemand { i3: 0, tau: 0 }, 9.0 - 0.001 * 3000.0);
        d.set(RowId::SheetDemand { i3: 1, tau: 0 }, 14.0 - 0.001 * 4000.0);
        let priced = build_pattern_2d(&inst, &d, 0, 0);
        assert_eq!(priced.pattern.strip_copies, vec![2, 1]);
        assert_eq!(priced.pattern.counts, vec![2, 1]);
        assert_eq!(priced.pattern.waste, 0.0);
    }

    #[test]
    fn assembly_sums_strip_counts() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(50.0, 30.0), (50.0, 40.0)], 1000.0, false);
        let strips = vec![
            StripPattern { reel: 0, reference: 0, length: 30.0, counts: vec![2, 0], value: 0.0 },
            StripPattern { reel: 0, reference: 1, length: 40.0, counts: vec![0, 2], value: 0.0 },
        ];
        let pat = Pattern2D::assemble(&inst, 0, strips, vec![2, 1]);
        assert_eq!(pat.counts, vec![4, 2]);
    }

    #[test]
    fn build_2d_zero_duals_not_improving() {
        let inst = unit_instance(&[(100.0, 100.0)], &[(30.0, 20.0), (40.0, 25.0)], 1000.0, true);
        let priced = build_pattern_2d(&inst, &duals(&inst), 0, 0);
        assert!(priced.reduced_cost >= 0.0);
        assert!((priced.reduced_cost - 0.001 * priced.pattern.waste).abs() < 1e-12);
    }
}
