//! Brute-force LP and IP references for tiny problems.

use solvekit::{LinearProgram, Relation};

/// Optimum of a bounded LP found by enumerating every basic solution.
/// Returns `None` when no vertex is feasible. Every variable must have a
/// finite upper bound.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<(f64, Vec<f64>)> {
    let n = lp.num_vars();
    // Each hyperplane as (coefficients, rhs, must_hold_with_equality).
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] += v;
        }
        planes.push((a, row.rhs));
    }
    for j in 0..n {
        assert!(lp.upper[j].is_finite(), "oracle needs finite bounds");
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), lp.lower[j]));
        planes.push((e, lp.upper[j]));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset: Vec<usize> = Vec::with_capacity(n);
    combinations(planes.len(), n, 0, &mut subset, &mut |chosen| {
        let mut mat: Vec<Vec<f64>> = chosen
            .iter()
            .map(|&p| {
                let mut r = planes[p].0.clone();
                r.push(planes[p].1);
                r
            })
            .collect();
        let Some(x) = gauss_solve(&mut mat, n) else {
            return;
        };
        if !feasible(lp, &x) {
            return;
        }
        let obj: f64 = lp.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, x));
        }
    });
    best
}

/// Minimum over every integer point in the box `[lower, upper]`.
pub fn exhaustive_integer(lp: &LinearProgram) -> Option<(f64, Vec<f64>)> {
    let n = lp.num_vars();
    let lo: Vec<i64> = lp.lower.iter().map(|v| v.ceil() as i64).collect();
    let hi: Vec<i64> = lp.upper.iter().map(|v| v.floor() as i64).collect();
    let mut x: Vec<i64> = lo.clone();
    let mut best: Option<(f64, Vec<f64>)> = None;
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return None;
    }
    loop {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        if feasible(lp, &xf) {
            let obj: f64 = lp.costs.iter().zip(&xf).map(|(c, v)| c * v).sum();
            if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                best = Some((obj, xf));
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

fn feasible(lp: &LinearProgram, x: &[f64]) -> bool {
    const TOL: f64 = 1e-9;
    for (j, &v) in x.iter().enumerate() {
        if v < lp.lower[j] - TOL || v > lp.upper[j] + TOL {
            return false;
        }
    }
    lp.rows.iter().all(|row| {
        let act: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        match row.relation {
            Relation::Le => act <= row.rhs + TOL,
            Relation::Eq => (act - row.rhs).abs() <= TOL,
        }
    })
}

fn combinations(
    total: usize,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in start..total {
        chosen.push(i);
        combinations(total, k, i + 1, chosen, visit);
        chosen.pop();
    }
}

/// Solves the square system held as an augmented matrix; `None` if singular.
fn gauss_solve(mat: &mut [Vec<f64>], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| mat[a][col].abs().total_cmp(&mat[b][col].abs()))?;
        if mat[piv][col].abs() < 1e-10 {
            return None;
        }
        mat.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = mat[r][col] / mat[col][col];
                for c in col..=n {
                    mat[r][c] -= f * mat[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| mat[i][n] / mat[i][i]).collect())
}
