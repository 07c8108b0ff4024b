use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    ClassConfig, Dimensions, Instance, Material, Phase1Params, Phase2Params, Phase3Params,
    StockCostLevel,
};

/// Reel widths in cm. The published parameter list gives no range for this
/// dimension; it is kept at or above the largest sheet width.
pub const REEL_WIDTH_CM: RangeInclusive<i64> = 400..=600;

const MINUTES_PER_SHIFT: f64 = 480.0;
const EXTRA_SHIFT_SURCHARGE: f64 = 0.2;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

fn uniform_int(rng: &mut ChaCha8Rng, range: RangeInclusive<i64>) -> f64 {
    rng.gen_range(range) as f64
}

/// Weight in kg of a roll `length_cm` long, wound to `diameter_cm` from paper
/// `thickness_um` thick with the given grammage (g/m²).
fn roll_weight(length_cm: f64, material: &Material, k: usize) -> f64 {
    let length_m = length_cm / 100.0;
    let diameter_m = material.diameter_cm / 100.0;
    let thickness_m = material.thickness_um * 1e-6;
    let grams = length_m * PI / thickness_m * diameter_m * diameter_m / 4.0 * material.grammage[k];
    grams / 1000.0
}

/// Weight in kg of a `length_cm` x `width_cm` sheet.
fn sheet_weight(length_cm: f64, width_cm: f64, grammage: f64) -> f64 {
    length_cm / 100.0 * width_cm / 100.0 * grammage / 1000.0
}

/// Draws a random instance of the given class. The result depends only on the
/// arguments; the trimming flag does not influence any drawn value, so two
/// classes that differ only in trimming yield paired instances per seed.
pub fn generate_instance(
    config: &ClassConfig,
    seed: u64,
    periods: usize,
    subperiods: usize,
) -> Instance {
    assert!(periods >= 1 && subperiods >= 1, "need at least one period and sub-period");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = Dimensions {
        grammages: 1,
        periods,
        subperiods,
        jumbo_machines: config.jumbo_machines,
        rewinders: config.rewinders,
        cutters: config.cutters,
        reel_types: config.n_items,
        sheet_types: config.n_items,
    };
    let (kk, tt, th) = (dims.grammages, periods, subperiods);
    let (m1, m2, m3) = (dims.jumbo_machines, dims.rewinders, dims.cutters);
    let (nf2, nf3) = (dims.reel_types, dims.sheet_types);
    let shifts = config.work_shifts as f64;
    let surcharge = 1.0 + EXTRA_SHIFT_SURCHARGE * (shifts - 1.0);

    let material = Material {
        grammage: (0..kk).map(|_| uniform(&mut rng, 35.0, 300.0)).collect(),
        diameter_cm: uniform(&mut rng, 300.0, 500.0),
        thickness_um: uniform(&mut rng, 190.0, 250.0),
    };

    // Phase 1
    let production_cost: Vec<Vec<Vec<f64>>> = (0..kk)
        .map(|_| {
            (0..m1)
                .map(|_| (0..tt).map(|_| uniform(&mut rng, 0.015, 0.025) * surcharge).collect())
                .collect()
        })
        .collect();
    let (h_lo, h_hi) = match config.stock_cost {
        StockCostLevel::Normal => (0.0075, 0.0125),
        StockCostLevel::High => (0.009, 0.015),
    };
    let stock_cost1: Vec<Vec<f64>> = (0..kk)
        .map(|_| (0..tt).map(|_| uniform(&mut rng, h_lo, h_hi)).collect())
        .collect();
    let jumbo_length: Vec<f64> = (0..m1).map(|_| uniform_int(&mut rng, 1000..=2000)).collect();
    let jumbo_weight: Vec<Vec<f64>> = (0..kk)
        .map(|k| jumbo_length.iter().map(|&l| roll_weight(l, &material, k)).collect())
        .collect();
    let production_time: Vec<Vec<f64>> = (0..kk)
        .map(|_| (0..m1).map(|_| uniform(&mut rng, 30.0, 60.0)).collect())
        .collect();
    let phase1 = Phase1Params {
        stock_cost: stock_cost1.clone(),
        jumbo_length,
        jumbo_weight,
        demand: vec![vec![vec![0.0; tt]; m1]; kk],
        production_time,
        capacity: vec![MINUTES_PER_SHIFT * shifts * m1 as f64 * th as f64; tt],
        production_cost: production_cost.clone(),
    };

    // Phase 2
    let reels_by_grammage = vec![(0..nf2).collect::<Vec<_>>()];
    let waste_cost2: Vec<Vec<f64>> = (0..kk)
        .map(|k| {
            (0..tt)
                .map(|t| {
                    let sum: f64 = (0..m1).map(|m| production_cost[k][m][t]).sum();
                    sum / (50_000.0 * m1 as f64)
                })
                .collect()
        })
        .collect();
    let reel_grammage = |i2: usize| {
        reels_by_grammage
            .iter()
            .position(|s| s.contains(&i2))
            .expect("partition")
    };
    let stock_cost2: Vec<Vec<f64>> = (0..nf2)
        .map(|i2| (0..tt).map(|t| 0.5 * stock_cost1[reel_grammage(i2)][t]).collect())
        .collect();
    let reel_length: Vec<f64> = (0..nf2).map(|_| uniform_int(&mut rng, 300..=900)).collect();
    let reel_width: Vec<f64> = (0..nf2).map(|_| uniform_int(&mut rng, REEL_WIDTH_CM)).collect();
    let reel_weight: Vec<f64> = (0..nf2)
        .map(|i2| roll_weight(reel_length[i2], &material, reel_grammage(i2)))
        .collect();
    let demand2: Vec<Vec<f64>> = (0..nf2)
        .map(|_| (0..tt).map(|_| uniform_int(&mut rng, 0..=100)).collect())
        .collect();
    let cutting_time2: Vec<Vec<Vec<f64>>> = (0..kk)
        .map(|_| {
            (0..m1)
                .map(|_| (0..m2).map(|_| uniform(&mut rng, 30.0, 60.0)).collect())
                .collect()
        })
        .collect();
    let phase2 = Phase2Params {
        waste_cost: waste_cost2,
        stock_cost: stock_cost2,
        reel_length,
        reel_width,
        reel_weight,
        demand: demand2,
        cutting_time: cutting_time2,
        capacity: vec![MINUTES_PER_SHIFT * shifts * m2 as f64 * th as f64; tt],
        reels_by_grammage: reels_by_grammage.clone(),
    };

    // Phase 3
    let sheets_by_grammage = vec![(0..nf3).collect::<Vec<_>>()];
    let waste_cost3: Vec<Vec<f64>> = (0..kk)
        .map(|k| {
            let sum: f64 = production_cost[k].iter().flatten().sum();
            vec![1.5 * sum / (10_000.0 * m1 as f64 * tt as f64); th]
        })
        .collect();
    let mean_h1 = stock_cost1.iter().flatten().sum::<f64>() / (kk * tt) as f64;
    let sheet_length: Vec<f64> = (0..nf3).map(|_| uniform_int(&mut rng, 30..=100)).collect();
    let sheet_width: Vec<f64> = (0..nf3).map(|_| uniform_int(&mut rng, 30..=100)).collect();
    let sheet_grammage = |i3: usize| {
        sheets_by_grammage
            .iter()
            .position(|s| s.contains(&i3))
            .expect("partition")
    };
    let sheet_weight: Vec<f64> = (0..nf3)
        .map(|i3| {
            sheet_weight(
                sheet_length[i3],
                sheet_width[i3],
                material.grammage[sheet_grammage(i3)],
            )
        })
        .collect();
    let demand3: Vec<Vec<f64>> = (0..nf3)
        .map(|_| (0..th).map(|_| uniform_int(&mut rng, 0..=500)).collect())
        .collect();
    let cutting_time3: Vec<Vec<f64>> = (0..nf2)
        .map(|_| (0..m3).map(|_| uniform(&mut rng, 20.0, 40.0)).collect())
        .collect();
    let phase3 = Phase3Params {
        waste_cost: waste_cost3,
        stock_cost: vec![vec![0.5 * mean_h1; th]; nf3],
        sheet_length,
        sheet_width,
        sheet_weight,
        demand: demand3,
        cutting_time: cutting_time3,
        capacity: vec![MINUTES_PER_SHIFT * shifts * m3 as f64; th],
        sheets_by_grammage,
        trimming_allowed: config.trimming,
    };

    Instance {
        dims,
        phase1,
        phase2,
        phase3,
        seed,
        class_id: None,
        material: Some(material),
    }
}

/// Small instances whose cutting patterns can be enumerated exhaustively:
/// at most 2 machines per phase, 3 reel and 3 sheet types, 2 periods and
/// 2 sub-periods, and dimensions of a few dozen cm.
pub fn generate_tiny_instance(seed: u64, trimming: bool) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469_6e79);
    let dims = Dimensions {
        grammages: 1,
        periods: rng.gen_range(1..=2),
        subperiods: rng.gen_range(1..=2),
        jumbo_machines: rng.gen_range(1..=2),
        rewinders: rng.gen_range(1..=2),
        cutters: rng.gen_range(1..=2),
        reel_types: rng.gen_range(1..=3),
        sheet_types: rng.gen_range(1..=3),
    };
    let (tt, th) = (dims.periods, dims.subperiods);
    let (m1, m2, m3) = (dims.jumbo_machines, dims.rewinders, dims.cutters);
    let (nf2, nf3) = (dims.reel_types, dims.sheet_types);

    let jumbo_length: Vec<f64> = (0..m1).map(|_| uniform_int(&mut rng, 20..=40)).collect();
    let phase1 = Phase1Params {
        production_cost: vec![(0..m1)
            .map(|_| (0..tt).map(|_| uniform(&mut rng, 1.0, 2.0)).collect())
            .collect()],
        stock_cost: vec![(0..tt).map(|_| uniform(&mut rng, 0.2, 0.5)).collect()],
        jumbo_weight: vec![jumbo_length.clone()],
        jumbo_length,
        demand: vec![(0..m1)
            .map(|_| (0..tt).map(|_| uniform_int(&mut rng, 0..=1)).collect())
            .collect()],
        production_time: vec![(0..m1).map(|_| uniform(&mut rng, 1.0, 3.0)).collect()],
        capacity: vec![200.0; tt],
    };
    let reel_length: Vec<f64> = (0..nf2).map(|_| uniform_int(&mut rng, 9..=16)).collect();
    let phase2 = Phase2Params {
        waste_cost: vec![(0..tt).map(|_| uniform(&mut rng, 0.1, 0.3)).collect()],
        stock_cost: (0..nf2)
            .map(|_| (0..tt).map(|_| uniform(&mut rng, 0.05, 0.1)).collect())
            .collect(),
        reel_width: (0..nf2).map(|_| uniform_int(&mut rng, 9..=14)).collect(),
        reel_weight: reel_length.iter().map(|l| l * 0.5).collect(),
        reel_length,
        demand: (0..nf2)
            .map(|_| (0..tt).map(|_| uniform_int(&mut rng, 0..=4)).collect())
            .collect(),
        cutting_time: vec![(0..m1)
            .map(|_| (0..m2).map(|_| uniform(&mut rng, 1.0, 3.0)).collect())
            .collect()],
        capacity: vec![200.0; tt],
        reels_by_grammage: vec![(0..nf2).collect()],
    };
    let sheet_length: Vec<f64> = (0..nf3).map(|_| uniform_int(&mut rng, 4..=9)).collect();
    let sheet_width: Vec<f64> = (0..nf3).map(|_| uniform_int(&mut rng, 4..=9)).collect();
    let phase3 = Phase3Params {
        waste_cost: vec![(0..th).map(|_| uniform(&mut rng, 0.01, 0.03)).collect()],
        stock_cost: (0..nf3)
            .map(|_| (0..th).map(|_| uniform(&mut rng, 0.05, 0.1)).collect())
            .collect(),
        sheet_weight: sheet_length
            .iter()
            .zip(&sheet_width)
            .map(|(l, w)| l * w / 100.0)
            .collect(),
        sheet_length,
        sheet_width,
        demand: (0..nf3)
            .map(|_| (0..th).map(|_| uniform_int(&mut rng, 0..=6)).collect())
            .collect(),
        cutting_time: (0..nf2)
            .map(|_| (0..m3).map(|_| uniform(&mut rng, 1.0, 3.0)).collect())
            .collect(),
        capacity: vec![100.0; th],
        sheets_by_grammage: vec![(0..nf3).collect()],
        trimming_allowed: trimming,
    };
    Instance {
        dims,
        phase1,
        phase2,
        phase3,
        seed,
        class_id: None,
        material: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{class_config, validate};

    #[test]
    fn class_one_capacity() {
        let inst = generate_instance(&class_config(1).unwrap(), 1, 4, 5);
        assert_eq!(inst.phase1.capacity, vec![7200.0; 4]);
        assert_eq!(inst.phase2.capacity, vec![7200.0; 4]);
        assert_eq!(inst.phase3.capacity, vec![960.0; 5]);
    }

    #[test]
    fn sheet_weight_example() {
        assert!((sheet_weight(50.0, 40.0, 100.0) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = class_config(13).unwrap();
        assert_eq!(generate_instance(&cfg, 9, 3, 2), generate_instance(&cfg, 9, 3, 2));
        assert_ne!(generate_instance(&cfg, 9, 3, 2), generate_instance(&cfg, 10, 3, 2));
    }

    #[test]
    fn extra_shifts_raise_costs_by_a_fifth_each() {
        let base = generate_instance(&class_config(1).unwrap(), 4, 2, 2);
        let three = generate_instance(&class_config(5).unwrap(), 4, 2, 2);
        let ratio = three.phase1.production_cost[0][0][0] / base.phase1.production_cost[0][0][0];
        assert!((ratio - 1.4).abs() < 1e-12);
        let ratio3 = three.phase3.waste_cost[0][0] / base.phase3.waste_cost[0][0];
        assert!((ratio3 - 1.4).abs() < 1e-12);
        assert_eq!(three.phase3.capacity[0], 480.0 * 3.0 * 2.0);
    }

    #[test]
    fn tiny_instances_validate() {
        for seed in 0..50 {
            let inst = generate_tiny_instance(seed, seed % 2 == 0);
            assert!(validate(&inst).is_empty(), "seed {seed}: {:?}", validate(&inst));
        }
    }
}
