use std::time::Duration;

use solvekit::{solve_mip, MipOptions, MipStatus};

use super::PlanError;
use crate::master::{ColumnKey, CostMode, MasterProblem, RelaxedSolution};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingOptions {
    pub time_limit_per_block: Duration,
    /// Branch-and-bound node budget per block; keeps runs reproducible when
    /// the time limit is generous.
    pub node_limit: Option<usize>,
    /// Relative optimality gap per block, measured on the objective share of
    /// the columns that are still free.
    pub rel_gap: f64,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        RoundingOptions {
            time_limit_per_block: Duration::from_secs(60),
            node_limit: Some(20_000),
            rel_gap: 1e-4,
        }
    }
}

/// Integer values for every pooled column, plus a trace of the block solves.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Objective share of the fixed columns after each block was fixed.
    pub fixed_objective: Vec<f64>,
    pub blocks: usize,
    pub backtracked: bool,
    pub nodes: usize,
    /// True when some block stopped on a limit with an unproven incumbent.
    pub truncated: bool,
}

/// Column blocks in fixing order: sheet cutting by sub-period, then reel
/// cutting by period, then jumbo production by period.
pub fn rounding_blocks(master: &MasterProblem<'_>) -> Vec<(String, Vec<usize>)> {
    let d = master.instance().dims;
    let scope = master.scope();
    let mut blocks = Vec::new();
    let collect = |phase: u8, time: usize| -> Vec<usize> {
        master
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.key.phase() == phase && c.key.time() == time)
            .map(|(j, _)| j)
            .collect()
    };
    if scope.phase3 {
        for tau in 0..d.subperiods {
            blocks.push((format!("phase 3, sub-period {}", tau + 1), collect(3, tau)));
        }
    }
    if scope.phase2 {
        for t in 0..d.periods {
            blocks.push((format!("phase 2, period {}", t + 1), collect(2, t)));
        }
    }
    if scope.phase1 {
        for t in 0..d.periods {
            blocks.push((format!("phase 1, period {}", t + 1), collect(1, t)));
        }
    }
    blocks
}

/// Relax-and-fix over the pool of a solved master. Earlier blocks are fixed
/// at their integer values, the current block is integer, later blocks stay
/// continuous. An infeasible block is retried once merged with the block
/// before it.
pub fn relax_and_fix(
    master: &MasterProblem<'_>,
    relaxed: &RelaxedSolution,
    options: &RoundingOptions,
) -> Result<RoundedSolution, PlanError> {
    let mut lp = master.to_linear_program(CostMode::Cost);
    let n = lp.num_vars();
    assert_eq!(relaxed.values.len(), n, "relaxation belongs to another pool");
    let blocks = rounding_blocks(master);
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    let mut fixed_objective = Vec::with_capacity(blocks.len());
    let mut backtracked = false;
    let mut nodes = 0;
    let mut truncated = false;
    let objective = |x: &dyn Fn(usize) -> f64| -> f64 {
        (0..n).map(|j| master.columns()[j].objective * x(j)).sum()
    };

    let mut b = 0;
    while b < blocks.len() {
        let mut active: Vec<usize> = blocks[b].1.clone();
        let mut merged = false;
        loop {
            for j in 0..n {
                match fixed[j] {
                    Some(v) => lp.set_bounds(j, v, v),
                    None => lp.set_bounds(j, 0.0, f64::INFINITY),
                }
                lp.set_integer(j, false);
            }
            // Stock follows from integer cutting and production through the
            // balance rows, so only those columns are branched on.
            for &j in &active {
                lp.set_integer(j, !master.columns()[j].key.is_stock());
            }
            let fixed_part: f64 = objective(&|j| fixed[j].unwrap_or(0.0));
            let free_part = (relaxed.objective - fixed_part).abs();
            let mip_options = MipOptions {
                time_limit: Some(options.time_limit_per_block),
                node_limit: options.node_limit,
                rel_gap: 0.0,
                abs_gap: (options.rel_gap * free_part).max(1e-9),
                ..MipOptions::default()
            };
            let result = solve_mip(&lp, &mip_options).map_err(|e| PlanError::Solver(e.to_string()))?;
            nodes += result.nodes;
            match result.status {
                MipStatus::Optimal | MipStatus::Feasible => {
                    truncated |= result.status == MipStatus::Feasible;
                    for &j in &active {
                        fixed[j] = Some(result.x[j].round());
                    }
                    break;
                }
                MipStatus::Infeasible if b > 0 && !merged => {
                    backtracked = true;
                    merged = true;
                    for &j in &blocks[b - 1].1 {
                        fixed[j] = None;
                    }
                    fixed_objective.pop();
                    active.extend(blocks[b - 1].1.iter().copied());
                    active.sort_unstable();
                }
                MipStatus::Infeasible => {
                    return Err(PlanError::RoundingInfeasible {
                        block: blocks[b].0.clone(),
                    })
                }
                MipStatus::NoIncumbent => {
                    return Err(PlanError::RoundingTimeout {
                        block: blocks[b].0.clone(),
                    })
                }
                other => return Err(PlanError::Solver(format!("{other:?}"))),
            }
        }
        if merged {
            fixed_objective.push(objective(&|j| fixed[j].unwrap_or(0.0)));
        }
        fixed_objective.push(objective(&|j| fixed[j].unwrap_or(0.0)));
        b += 1;
    }

    let values: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
    Ok(RoundedSolution {
        objective: master.objective_at(&values),
        values,
        fixed_objective,
        blocks: blocks.len(),
        backtracked,
        nodes,
        truncated,
    })
}

/// Integer value per pooled column key, skipping zeros.
pub fn nonzero_keys<'m>(master: &'m MasterProblem<'_>, values: &[f64]) -> Vec<(&'m ColumnKey, f64)> {
    master
        .columns()
        .iter()
        .zip(values)
        .filter(|(_, &v)| v != 0.0)
        .map(|(c, &v)| (&c.key, v))
        .collect()
}
