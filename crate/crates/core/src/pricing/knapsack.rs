/// Unbounded integer knapsack over integer sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSpec {
    pub sizes: Vec<u64>,
    pub values: Vec<f64>,
    pub capacity: u64,
}

/// Exact optimum by dynamic programming. Items with non-positive value are
/// never taken. Among optimal count vectors the lexicographically largest one
/// (by item index) is returned. The value is recomputed from the counts.
pub fn solve_knapsack(spec: &KnapsackSpec) -> (Vec<u64>, f64) {
    let n = spec.sizes.len();
    assert_eq!(n, spec.values.len(), "sizes and values differ in length");
    assert!(spec.sizes.iter().all(|&s| s > 0), "item sizes must be positive");
    let cap = spec.capacity as usize;
    let usable: Vec<bool> = (0..n)
        .map(|i| spec.values[i] > 0.0 && spec.sizes[i] as usize <= cap)
        .collect();

    // best[i][c]: optimum over items i.. with capacity c.
    let mut best = vec![vec![0.0f64; cap + 1]; n + 1];
    for i in (0..n).rev() {
        let (lower, upper) = best.split_at_mut(i + 1);
        let (row, next) = (&mut lower[i], &upper[0]);
        row.copy_from_slice(next);
        if !usable[i] {
            continue;
        }
        let s = spec.sizes[i] as usize;
        let v = spec.values[i];
        for c in s..=cap {
            let take = row[c - s] + v;
            if take > row[c] {
                row[c] = take;
            }
        }
    }

    let mut counts = vec![0u64; n];
    let mut c = cap;
    for i in 0..n {
        if !usable[i] {
            continue;
        }
        let s = spec.sizes[i] as usize;
        let v = spec.values[i];
        while c >= s && best[i][c - s] + v >= best[i][c] - tie_tol(best[i][c]) {
            counts[i] += 1;
            c -= s;
        }
    }
    let value = counts
        .iter()
        .zip(&spec.values)
        .map(|(&k, &v)| k as f64 * v)
        .sum();
    (counts, value)
}

fn tie_tol(v: f64) -> f64 {
    1e-12 * (1.0 + v.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ks(sizes: &[u64], values: &[f64], capacity: u64) -> (Vec<u64>, f64) {
        solve_knapsack(&KnapsackSpec {
            sizes: sizes.to_vec(),
            values: values.to_vec(),
            capacity,
        })
    }

    #[test]
    fn two_items() {
        assert_eq!(ks(&[3, 4], &[5.0, 7.0], 10), (vec![2, 1], 17.0));
    }

    #[test]
    fn single_item_floor() {
        assert_eq!(ks(&[3], &[1.0], 10), (vec![3], 3.0));
    }

    #[test]
    fn non_positive_values_give_empty() {
        assert_eq!(ks(&[3, 4], &[0.0, -2.0], 10), (vec![0, 0], 0.0));
    }

    #[test]
    fn ties_prefer_lexicographically_largest() {
        // (2,0) and (0,1) and (1,..) all worth 2.
        assert_eq!(ks(&[2, 4], &[1.0, 2.0], 4), (vec![2, 0], 2.0));
        assert_eq!(ks(&[4, 2], &[2.0, 1.0], 4), (vec![1, 0], 2.0));
    }

    #[test]
    fn oversize_items_ignored() {
        assert_eq!(ks(&[11, 5], &[100.0, 1.0], 10), (vec![0, 2], 2.0));
        assert_eq!(ks(&[5], &[1.0], 0), (vec![0], 0.0));
    }
}
