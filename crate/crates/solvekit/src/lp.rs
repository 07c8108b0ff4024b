use crate::model::LinearProgram;
use crate::simplex::{Outcome, Simplex};
use crate::SolveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The kernel lost numerical control (singular basis, failed verification).
    NumericalFailure,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values; meaningful only when optimal.
    pub x: Vec<f64>,
    /// One dual per row, signed so that `reduced_cost = c - y.A`.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    fn without_values(status: LpStatus, lp: &LinearProgram, iterations: usize) -> Self {
        LpSolution {
            status,
            x: vec![0.0; lp.num_vars()],
            duals: vec![0.0; lp.num_rows()],
            reduced_costs: vec![0.0; lp.num_vars()],
            objective: f64::NAN,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `lp` ignoring its integrality mask.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, SolveError> {
    lp.validate()?;
    let mut engine = Simplex::new(lp);
    let outcome = engine.solve_cold();
    Ok(finish(lp, &mut engine, outcome))
}

pub(crate) fn finish(lp: &LinearProgram, engine: &mut Simplex, outcome: Outcome) -> LpSolution {
    let status = match outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::Unbounded => LpStatus::Unbounded,
        Outcome::IterationLimit => LpStatus::IterationLimit,
        Outcome::Numerical => LpStatus::NumericalFailure,
    };
    if status != LpStatus::Optimal {
        return LpSolution::without_values(status, lp, engine.iterations);
    }
    if engine.polish().is_err() {
        return LpSolution::without_values(LpStatus::NumericalFailure, lp, engine.iterations);
    }
    let x = engine.primal();
    let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
    if lp.max_violation(&x) > 1e-6 * scale {
        return LpSolution::without_values(LpStatus::NumericalFailure, lp, engine.iterations);
    }
    let duals = engine.duals();
    let reduced_costs = engine.reduced_costs(&duals);
    LpSolution {
        status,
        objective: lp.objective_value(&x),
        x,
        duals,
        reduced_costs,
        iterations: engine.iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Relation;

    #[test]
    fn single_variable_lower_bound_via_row() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(1.0);
        lp.add_row(vec![(x, -1.0)], Relation::Le, -3.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_triangle_dual() {
        // Vertices (0,0), (1,0), (0,1) give objectives 0, -1, -1.
        let mut lp = LinearProgram::new();
        let x = lp.add_var(-1.0);
        let y = lp.add_var(-1.0);
        lp.add_row(vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 1.0).abs() < 1e-9);
        assert!((sol.duals[0] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(0.0);
        lp.add_row(vec![(x, -1.0)], Relation::Le, -1.0);
        lp.add_row(vec![(x, 1.0)], Relation::Le, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction_detected() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(-1.0);
        let y = lp.add_var(0.0);
        lp.add_row(vec![(x, 1.0), (y, -1.0)], Relation::Le, 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_rows_and_upper_bounds() {
        // min x + 2y  s.t. x + y = 4, x <= 3  -> x = 3, y = 1
        let mut lp = LinearProgram::new();
        let x = lp.add_var(1.0);
        let y = lp.add_var(2.0);
        lp.set_bounds(x, 0.0, 3.0);
        lp.add_row(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 4.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
        assert!((sol.duals[0] - 2.0).abs() < 1e-9);
        assert!(sol.reduced_costs[0] <= 1e-9);
    }

    #[test]
    fn no_rows() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(-2.0);
        lp.set_bounds(x, 1.0, 5.0);
        lp.add_var(3.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.x, vec![5.0, 0.0]);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example (Beale), converted to minimisation.
        let mut lp = LinearProgram::new();
        let v: Vec<usize> = [-0.75, 150.0, -0.02, 6.0]
            .iter()
            .map(|&c| lp.add_var(c))
            .collect();
        lp.add_row(
            vec![(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)],
            Relation::Le,
            0.0,
        );
        lp.add_row(
            vec![(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)],
            Relation::Le,
            0.0,
        );
        lp.add_row(vec![(v[2], 1.0)], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-9);
    }
}
