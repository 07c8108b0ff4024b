use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{CostMode, Duals, MasterError, MasterProblem, MasterSolution};
use crate::pricing::{build_pattern_2d, price_1d, TOL_PRICE};
use solvekit::LpStatus;

#[derive(Debug, Clone, PartialEq)]
pub struct ColgenOptions {
    pub max_iter: usize,
    pub tol_price: f64,
    /// Writes the master LP of every iteration here when set.
    pub dump_dir: Option<PathBuf>,
}

impl Default for ColgenOptions {
    fn default() -> Self {
        ColgenOptions {
            max_iter: 500,
            tol_price: TOL_PRICE,
            dump_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColumnStats {
    /// Cutting columns present before pricing.
    pub initial: usize,
    /// Improving columns returned by pricing, duplicates included.
    pub generated: usize,
    /// Generated columns that were new to the pool.
    pub inserted: usize,
}

/// Final state of a column-generation run. The master it came from holds
/// the column pool the values refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub objective: f64,
    pub values: Vec<f64>,
    pub duals: Duals,
    /// Master objective after each priced iteration with true costs.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iter` stopped the loop; the objective is then only an
    /// upper bound on the relaxation.
    pub converged: bool,
    pub stats: ColumnStats,
}

const SHORTFALL_TOL: f64 = 1e-6;

/// Alternates master solves and pricing until no improving column exists.
/// When the initial pool cannot meet demand, pricing first minimizes the
/// total shortfall; a positive minimum means the scope is infeasible.
pub fn run_colgen(
    master: &mut MasterProblem<'_>,
    options: &ColgenOptions,
) -> Result<RelaxedSolution, MasterError> {
    let inst = master.instance();
    let scope = master.scope();
    let d = inst.dims;
    let mut stats = ColumnStats {
        initial: master.columns().iter().filter(|c| c.key.is_cutting()).count(),
        ..ColumnStats::default()
    };
    let mut history = Vec::new();
    let mut mode = CostMode::Cost;
    let mut iterations = 0;
    let mut converged = false;
    let mut feasibility_done = false;

    let last: MasterSolution = loop {
        if let Some(dir) = &options.dump_dir {
            let lp = master.to_linear_program(mode);
            let path = dir.join(format!("master_{iterations:04}.lp"));
            fs::write(&path, lp.to_lp_format())
                .map_err(|e| MasterError::Solver(format!("dump {}: {e}", path.display())))?;
        }
        let sol = master.solve_mode(mode)?;
        match (mode, sol.status) {
            (CostMode::Cost, LpStatus::Optimal) => history.push(sol.objective),
            (CostMode::Cost, LpStatus::Infeasible) if !feasibility_done => {
                mode = CostMode::Feasibility;
                continue;
            }
            (CostMode::Feasibility, LpStatus::Optimal) => {
                if sol.objective <= SHORTFALL_TOL {
                    mode = CostMode::Cost;
                    feasibility_done = true;
                    continue;
                }
            }
            (_, status) => return Err(MasterError::Solver(format!("{status:?}"))),
        }
        if iterations >= options.max_iter {
            break sol;
        }
        iterations += 1;

        let mut found = Vec::new();
        if scope.phase2 {
            for k in 0..d.grammages {
                for m1 in 0..d.jumbo_machines {
                    for t in 0..d.periods {
                        let priced = price_1d(inst, &sol.duals, k, m1, t);
                        if priced.reduced_cost < -options.tol_price && !priced.pattern.is_empty() {
                            found.push(priced.key(t));
                        }
                    }
                }
            }
        }
        if scope.phase3 {
            for i2 in 0..d.reel_types {
                for tau in 0..d.subperiods {
                    let priced = build_pattern_2d(inst, &sol.duals, i2, tau);
                    if priced.reduced_cost < -options.tol_price && !priced.pattern.is_empty() {
                        found.push(priced.key(tau));
                    }
                }
            }
        }
        stats.generated += found.len();
        let mut inserted = 0;
        for key in found {
            if master.add_column(key)? {
                inserted += 1;
            }
        }
        stats.inserted += inserted;
        if inserted == 0 {
            converged = true;
            if mode == CostMode::Feasibility {
                return Err(MasterError::Infeasible(master.diagnose(&sol)));
            }
            break sol;
        }
    };

    if mode == CostMode::Feasibility {
        // Iteration budget ran out before demand could be met.
        return Err(MasterError::Infeasible(master.diagnose(&last)));
    }
    Ok(RelaxedSolution {
        objective: last.objective,
        values: last.values,
        duals: last.duals,
        history,
        iterations,
        converged,
        stats,
    })
}
