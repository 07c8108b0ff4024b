//! Exhaustive enumeration of cutting patterns for tiny instances.

use std::collections::BTreeSet;

use paperplan::instances::Instance;

/// Every count vector with `sum(sizes[i] * counts[i]) <= capacity`, the zero
/// vector included.
pub fn count_vectors(sizes: &[u64], capacity: u64) -> Vec<Vec<u32>> {
    fn rec(sizes: &[u64], left: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == sizes.len() {
            out.push(prefix.clone());
            return;
        }
        let size = sizes[prefix.len()];
        assert!(size > 0, "item sizes must be positive");
        let mut n = 0u64;
        while n * size <= left {
            prefix.push(n as u32);
            rec(sizes, left - n * size, prefix, out);
            prefix.pop();
            n += 1;
        }
    }
    let mut out = Vec::new();
    rec(sizes, capacity, &mut Vec::new(), &mut out);
    out
}

/// Best value over all count vectors, by enumeration.
pub fn best_fill(sizes: &[u64], values: &[f64], capacity: u64) -> f64 {
    count_vectors(sizes, capacity)
        .iter()
        .map(|c| c.iter().zip(values).map(|(&a, v)| a as f64 * v).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// All non-empty jumbo patterns of grammage `k` on machine `m1`, as counts
/// over every reel type.
pub fn jumbo_patterns(inst: &Instance, k: usize, m1: usize) -> Vec<Vec<u32>> {
    let reels = &inst.phase2.reels_by_grammage[k];
    let sizes: Vec<u64> = reels.iter().map(|&r| inst.phase2.reel_length[r] as u64).collect();
    count_vectors(&sizes, inst.phase1.jumbo_length[m1] as u64)
        .into_iter()
        .filter(|c| c.iter().any(|&a| a > 0))
        .map(|c| {
            let mut full = vec![0u32; inst.dims.reel_types];
            for (&r, a) in reels.iter().zip(c) {
                full[r] = a;
            }
            full
        })
        .collect()
}

/// Sheet types a strip of the given length may hold on reels of grammage `k`.
pub fn strip_sheets(inst: &Instance, k: usize, strip_length: f64) -> Vec<usize> {
    let p3 = &inst.phase3;
    p3.sheets_by_grammage[k]
        .iter()
        .copied()
        .filter(|&s| {
            let l = p3.sheet_length[s];
            if p3.trimming_allowed {
                l <= strip_length
            } else {
                l == strip_length
            }
        })
        .collect()
}

/// Non-empty fillings of one strip across the reel width, as counts over
/// every sheet type.
pub fn strip_fillings(inst: &Instance, reel: usize, strip_length: f64) -> Vec<Vec<u32>> {
    let k = grammage_of_reel(inst, reel);
    let sheets = strip_sheets(inst, k, strip_length);
    let sizes: Vec<u64> = sheets.iter().map(|&s| inst.phase3.sheet_width[s] as u64).collect();
    count_vectors(&sizes, inst.phase2.reel_width[reel] as u64)
        .into_iter()
        .filter(|c| c.iter().any(|&a| a > 0))
        .map(|c| {
            let mut full = vec![0u32; inst.dims.sheet_types];
            for (&s, a) in sheets.iter().zip(c) {
                full[s] = a;
            }
            full
        })
        .collect()
}

/// Distinct sheet lengths of grammage `k`, ascending.
pub fn strip_lengths(inst: &Instance, k: usize) -> Vec<f64> {
    let mut lengths: Vec<f64> = inst.phase3.sheets_by_grammage[k]
        .iter()
        .map(|&s| inst.phase3.sheet_length[s])
        .collect();
    lengths.sort_by(f64::total_cmp);
    lengths.dedup();
    lengths
}

/// All distinct non-empty sheet-count vectors producible from reel `reel`
/// by a two-stage guillotine cut: strips across the full width, stacked
/// along the reel length.
pub fn reel_patterns(inst: &Instance, reel: usize) -> Vec<Vec<u32>> {
    let k = grammage_of_reel(inst, reel);
    let mut strips: Vec<(u64, Vec<u32>)> = Vec::new();
    for length in strip_lengths(inst, k) {
        for filling in strip_fillings(inst, reel, length) {
            strips.push((length as u64, filling));
        }
    }
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut acc = vec![0u32; inst.dims.sheet_types];
    stack(&strips, 0, inst.phase2.reel_length[reel] as u64, &mut acc, &mut found);
    found.into_iter().filter(|c| c.iter().any(|&a| a > 0)).collect()
}

fn stack(strips: &[(u64, Vec<u32>)], from: usize, left: u64, acc: &mut Vec<u32>, found: &mut BTreeSet<Vec<u32>>) {
    found.insert(acc.clone());
    for s in from..strips.len() {
        let (len, ref counts) = strips[s];
        if len > left {
            continue;
        }
        for (a, c) in acc.iter_mut().zip(counts) {
            *a += c;
        }
        stack(strips, s, left - len, acc, found);
        for (a, c) in acc.iter_mut().zip(counts) {
            *a -= c;
        }
    }
}

pub(crate) fn grammage_of_reel(inst: &Instance, reel: usize) -> usize {
    (0..inst.dims.grammages)
        .find(|&k| inst.phase2.reels_by_grammage[k].contains(&reel))
        .expect("reel has a grammage")
}
