//! Aggregates over report rows: per-class cost differences against the
//! integrated strategy and per-strategy medians of every metric.

use std::collections::BTreeMap;

use paperplan::planner::{percent_delta, Strategy};
use serde::{Deserialize, Serialize};

use crate::report::{split_units, ReportRow};

pub const SUMMARY_FORMAT: &str = "paperplan-summary";
pub const SUMMARY_VERSION: u32 = 1;

/// Mean and sample standard deviation (n - 1 denominator). The deviation is
/// absent below two samples, the mean below one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub n: usize,
    pub mean: Option<f64>,
    pub stdev: Option<f64>,
}

impl Stat {
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len();
        let mean = (n > 0).then(|| values.iter().sum::<f64>() / n as f64);
        let stdev = mean.filter(|_| n > 1).map(|m| {
            let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
            (ss / (n - 1) as f64).sqrt()
        });
        Stat { n, mean, stdev }
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

/// `100 (c_reference - c_other) / c_other` over seeds where both runs are ok.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub class_id: Option<u32>,
    pub strategy: String,
    pub relaxed: Stat,
    pub rounded: Stat,
}

/// Medians of each metric over the ok runs of one strategy, either within a
/// class or over all classes (`class_id` absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub class_id: Option<u32>,
    pub strategy: String,
    pub runs: usize,
    pub ok: usize,
    pub medians: BTreeMap<String, Option<f64>>,
    /// Per-(sub-)period median stock units for phases 1, 2 and 3.
    pub stock_units: [Vec<f64>; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub format: String,
    pub version: u32,
    pub rows: usize,
    pub ok: usize,
    pub failed: usize,
    pub status_counts: BTreeMap<String, usize>,
    /// Strategy the deltas are measured from; absent when it was not run.
    pub reference: Option<String>,
    pub deltas: Vec<DeltaRow>,
    pub by_class: Vec<SeriesRow>,
    pub overall: Vec<SeriesRow>,
}

type Metric = (&'static str, fn(&ReportRow) -> Option<f64>);

const METRICS: [Metric; 22] = [
    ("relaxed_cost", |r| r.relaxed_cost),
    ("rounded_cost", |r| r.rounded_cost),
    ("gap", |r| r.gap),
    ("cost1", |r| r.cost1),
    ("stock_cost1", |r| r.stock_cost1),
    ("cost2", |r| r.cost2),
    ("stock_cost2", |r| r.stock_cost2),
    ("cost3", |r| r.cost3),
    ("stock_cost3", |r| r.stock_cost3),
    ("waste2_cm", |r| r.waste2_cm),
    ("waste3_cm2", |r| r.waste3_cm2),
    ("stock_total1", |r| units_total(&r.stock_units1)),
    ("stock_total2", |r| units_total(&r.stock_units2)),
    ("stock_total3", |r| units_total(&r.stock_units3)),
    ("capacity1", |r| r.capacity1),
    ("capacity2", |r| r.capacity2),
    ("capacity3", |r| r.capacity3),
    ("columns_initial", |r| r.columns_initial.map(|v| v as f64)),
    ("columns_generated", |r| r.columns_generated.map(|v| v as f64)),
    ("columns_inserted", |r| r.columns_inserted.map(|v| v as f64)),
    ("columns_used", |r| {
        Some((r.columns_used_initial? + r.columns_used_generated?) as f64)
    }),
    ("iterations", |r| r.iterations.map(|v| v as f64)),
];

fn units_total(text: &str) -> Option<f64> {
    split_units(text).ok().map(|v| v.iter().sum())
}

fn series(class_id: Option<u32>, strategy: &str, rows: &[&ReportRow]) -> SeriesRow {
    let ok: Vec<&ReportRow> = rows.iter().copied().filter(|r| r.is_ok()).collect();
    let medians = METRICS
        .iter()
        .map(|(name, get)| {
            let values: Vec<f64> = ok.iter().filter_map(|r| get(r)).collect();
            (name.to_string(), median(&values))
        })
        .collect();
    let per_period = |pick: fn(&ReportRow) -> &str| -> Vec<f64> {
        let lists: Vec<Vec<f64>> = ok.iter().filter_map(|r| split_units(pick(r)).ok()).collect();
        let len = lists.iter().map(Vec::len).max().unwrap_or(0);
        (0..len)
            .map(|i| median(&lists.iter().filter_map(|l| l.get(i).copied()).collect::<Vec<_>>()).unwrap_or(0.0))
            .collect()
    };
    SeriesRow {
        class_id,
        strategy: strategy.to_string(),
        runs: rows.len(),
        ok: ok.len(),
        medians,
        stock_units: [
            per_period(|r| &r.stock_units1),
            per_period(|r| &r.stock_units2),
            per_period(|r| &r.stock_units3),
        ],
    }
}

fn rank(name: &str) -> usize {
    Strategy::ALL.iter().position(|s| s.name() == name).unwrap_or(usize::MAX)
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let mut status_counts = BTreeMap::new();
    for r in rows {
        *status_counts.entry(r.status.to_string()).or_insert(0) += 1;
    }
    let ok = rows.iter().filter(|r| r.is_ok()).count();

    let mut strategies: Vec<&str> = rows.iter().map(|r| r.strategy.as_str()).collect();
    strategies.sort_by_key(|s| (rank(s), s.to_string()));
    strategies.dedup();
    let mut classes: Vec<Option<u32>> = rows.iter().map(|r| r.class_id).collect();
    classes.sort_unstable();
    classes.dedup();

    let reference_name = Strategy::S123I.name();
    let reference = strategies.contains(&reference_name).then(|| reference_name.to_string());
    let mut deltas = Vec::new();
    if reference.is_some() {
        for &class in &classes {
            let refs: BTreeMap<u64, &ReportRow> = rows
                .iter()
                .filter(|r| r.class_id == class && r.strategy == reference_name && r.is_ok())
                .map(|r| (r.seed, r))
                .collect();
            for &other in strategies.iter().filter(|&&s| s != reference_name) {
                let mut relaxed = Vec::new();
                let mut rounded = Vec::new();
                for r in rows.iter().filter(|r| r.class_id == class && r.strategy == other && r.is_ok()) {
                    let Some(base) = refs.get(&r.seed) else { continue };
                    if let (Some(a), Some(b)) = (base.relaxed_cost, r.relaxed_cost) {
                        if b != 0.0 {
                            relaxed.push(percent_delta(a, b));
                        }
                    }
                    if let (Some(a), Some(b)) = (base.rounded_cost, r.rounded_cost) {
                        if b != 0.0 {
                            rounded.push(percent_delta(a, b));
                        }
                    }
                }
                deltas.push(DeltaRow {
                    class_id: class,
                    strategy: other.to_string(),
                    relaxed: Stat::of(&relaxed),
                    rounded: Stat::of(&rounded),
                });
            }
        }
    }

    let mut by_class = Vec::new();
    for &class in &classes {
        for &s in &strategies {
            let group: Vec<&ReportRow> = rows.iter().filter(|r| r.class_id == class && r.strategy == s).collect();
            if !group.is_empty() {
                by_class.push(series(class, s, &group));
            }
        }
    }
    let overall = strategies
        .iter()
        .map(|&s| series(None, s, &rows.iter().filter(|r| r.strategy == s).collect::<Vec<_>>()))
        .collect();

    Summary {
        format: SUMMARY_FORMAT.to_string(),
        version: SUMMARY_VERSION,
        rows: rows.len(),
        ok,
        failed: rows.len() - ok,
        status_counts,
        reference,
        deltas,
        by_class,
        overall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_deviation_convention() {
        let s = Stat::of(&[-5.0, -7.0]);
        assert_eq!(s.mean, Some(-6.0));
        assert!((s.stdev.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Stat::of(&[3.0]).stdev, None);
        assert_eq!(Stat::of(&[]).mean, None);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }
}
