//! Seeded generators of tiny test problems.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use solvekit::{LinearProgram, Relation};

/// An LP with at most 4 variables and 4 rows, integer data, finite boxes.
pub fn small_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let mut lp = LinearProgram::new();
    for _ in 0..n {
        let j = lp.add_var(rng.gen_range(-5..=5) as f64);
        lp.set_bounds(j, 0.0, rng.gen_range(1..=10) as f64);
    }
    for _ in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.8) {
                coeffs.push((j, rng.gen_range(-5..=5) as f64));
            }
        }
        let relation = if rng.gen_bool(0.2) { Relation::Eq } else { Relation::Le };
        lp.add_row(coeffs, relation, rng.gen_range(-5..=12) as f64);
    }
    lp
}

/// An integer program with at most 3 variables on domains no wider than 0..=20.
pub fn small_ip(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let mut lp = LinearProgram::new();
    for _ in 0..n {
        let j = lp.add_integer_var(rng.gen_range(-9..=9) as f64);
        lp.set_bounds(j, 0.0, rng.gen_range(1..=20) as f64);
    }
    for _ in 0..m {
        let coeffs = (0..n).map(|j| (j, rng.gen_range(-6..=9) as f64)).collect();
        let relation = if rng.gen_bool(0.15) { Relation::Eq } else { Relation::Le };
        lp.add_row(coeffs, relation, rng.gen_range(-4..=40) as f64);
    }
    lp
}
