use std::fmt;

use crate::SolveError;

/// Row sense. Only `=` and `<=` are needed; `>=` rows are negated by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Eq => f.write_str("="),
            Relation::Le => f.write_str("<="),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Sparse coefficients as `(variable, value)`. Duplicate indices are summed.
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A minimisation problem `min c.x` subject to rows and variable bounds.
///
/// Lower bounds must be finite; upper bounds may be `f64::INFINITY`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub costs: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds a continuous variable with bounds `[0, inf)` and returns its index.
    pub fn add_var(&mut self, cost: f64) -> usize {
        self.costs.push(cost);
        self.lower.push(0.0);
        self.upper.push(f64::INFINITY);
        self.integer.push(false);
        self.costs.len() - 1
    }

    pub fn add_integer_var(&mut self, cost: f64) -> usize {
        let j = self.add_var(cost);
        self.integer[j] = true;
        j
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_integer(&mut self, var: usize, integer: bool) {
        self.integer[var] = integer;
    }

    pub fn has_integers(&self) -> bool {
        self.integer.iter().any(|&b| b)
    }

    /// Objective value of `x`.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.costs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Row activity `a_i . x`.
    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Largest violation of any row or bound by `x`, in absolute units.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for (i, row) in self.rows.iter().enumerate() {
            let act = self.row_activity(i, x);
            let v = match row.relation {
                Relation::Eq => (act - row.rhs).abs(),
                Relation::Le => (act - row.rhs).max(0.0),
            };
            worst = worst.max(v);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let n = self.costs.len();
        if self.lower.len() != n || self.upper.len() != n || self.integer.len() != n {
            return Err(SolveError::Malformed(format!(
                "bound/integrality vectors do not match {n} variables"
            )));
        }
        for (j, (&c, (&lo, &hi))) in self
            .costs
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .enumerate()
        {
            if !c.is_finite() {
                return Err(SolveError::Malformed(format!("cost of x{j} is not finite")));
            }
            if !lo.is_finite() || hi.is_nan() || hi < lo {
                return Err(SolveError::Malformed(format!(
                    "bounds of x{j} are invalid: [{lo}, {hi}]"
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(SolveError::Malformed(format!("rhs of row {i} is not finite")));
            }
            for &(j, a) in &row.coeffs {
                if j >= n {
                    return Err(SolveError::Malformed(format!(
                        "row {i} references x{j} but only {n} variables exist"
                    )));
                }
                if !a.is_finite() {
                    return Err(SolveError::Malformed(format!(
                        "row {i} has a non-finite coefficient on x{j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Renders the problem in CPLEX LP text format, for cross-checking with other solvers.
    pub fn to_lp_format(&self) -> String {
        use std::fmt::Write;

        let mut out = String::from("\\ generated by solvekit\nMinimize\n obj:");
        write_terms(&mut out, self.costs.iter().copied().enumerate());
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " r{i}:");
            write_terms(&mut out, row.coeffs.iter().copied());
            let _ = writeln!(out, " {} {}", row.relation, row.rhs);
        }
        out.push_str("Bounds\n");
        for j in 0..self.num_vars() {
            if self.upper[j].is_finite() {
                let _ = writeln!(out, " {} <= x{j} <= {}", self.lower[j], self.upper[j]);
            } else {
                let _ = writeln!(out, " x{j} >= {}", self.lower[j]);
            }
        }
        let ints: Vec<usize> = (0..self.num_vars()).filter(|&j| self.integer[j]).collect();
        if !ints.is_empty() {
            out.push_str("General\n");
            for j in ints {
                let _ = writeln!(out, " x{j}");
            }
        }
        out.push_str("End\n");
        out
    }
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (usize, f64)>) {
    use std::fmt::Write;
    let mut any = false;
    for (j, a) in terms {
        if a == 0.0 {
            continue;
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} x{j}", a.abs());
        any = true;
    }
    if !any {
        out.push_str(" 0 x0");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_bad_index() {
        let mut lp = LinearProgram::new();
        lp.add_var(1.0);
        lp.add_row(vec![(3, 1.0)], Relation::Le, 1.0);
        assert!(matches!(lp.validate(), Err(SolveError::Malformed(_))));
    }

    #[test]
    fn lp_format_mentions_every_row() {
        let mut lp = LinearProgram::new();
        let x = lp.add_integer_var(-1.0);
        lp.add_row(vec![(x, 2.0)], Relation::Le, 3.0);
        let text = lp.to_lp_format();
        assert!(text.contains("r0: + 2 x0 <= 3"));
        assert!(text.contains("General"));
    }
}
