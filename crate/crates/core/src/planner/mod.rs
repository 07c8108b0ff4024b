//! Solution strategies: which phases share a master, how demand passes
//! between separately solved phases, and relax-and-fix rounding.

mod metrics;
mod rounding;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use metrics::{PhaseMetrics, PlanMetrics};
pub use rounding::{nonzero_keys, relax_and_fix, rounding_blocks, RoundedSolution, RoundingOptions};

use crate::instances::Instance;
use crate::master::{
    run_colgen, ColgenOptions, ColumnKey, ColumnStats, ExtraDemand, MasterError, MasterProblem,
    RelaxedSolution, Scope,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlanError {
    #[error("{component}: {source}")]
    Master {
        component: String,
        #[source]
        source: MasterError,
    },
    #[error("rounding block {block} is infeasible")]
    RoundingInfeasible { block: String },
    #[error("rounding block {block} found no integer point within its limits")]
    RoundingTimeout { block: String },
    #[error("solver failure: {0}")]
    Solver(String),
}

impl PlanError {
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            PlanError::Master { source: MasterError::Infeasible(_) | MasterError::Unsupplied(_), .. }
                | PlanError::RoundingInfeasible { .. }
        )
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self, PlanError::RoundingTimeout { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// Each phase on its own: sheets, then reels, then jumbos.
    S123,
    /// Jumbos alone after a joint reel and sheet master.
    S1_23,
    /// Sheets alone, then a joint jumbo and reel master.
    S12_3,
    /// One master over all three phases.
    S123I,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::S123, Strategy::S1_23, Strategy::S12_3, Strategy::S123I];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::S123 => "S123",
            Strategy::S1_23 => "S1_23",
            Strategy::S12_3 => "S12_3",
            Strategy::S123I => "S123I",
        }
    }

    /// Masters solved in order, as scopes.
    pub fn components(&self) -> &'static [Scope] {
        match self {
            Strategy::S123 => &[Scope::PHASE3, Scope::PHASE2, Scope::PHASE1],
            Strategy::S1_23 => &[Scope::PHASES_23, Scope::PHASE1],
            Strategy::S12_3 => &[Scope::PHASE3, Scope::PHASES_12],
            Strategy::S123I => &[Scope::ALL],
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy {s:?} (expected S123, S1_23, S12_3 or S123I)"))
    }
}

/// Demand passed between separately solved phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandLink {
    /// Reels consumed by sheet cutting, `[i2]`.
    pub delta2: Vec<f64>,
    /// Jumbos consumed by reel cutting, `[k][m1][t]`.
    pub delta1: Vec<Vec<Vec<f64>>>,
    /// Relative reel-demand increase; `None` where first-period demand is 0.
    pub alpha: Vec<Option<f64>>,
}

/// Reels consumed by a sheet-cutting solution, per reel type.
pub fn compute_delta2(master: &MasterProblem<'_>, values: &[f64]) -> Vec<f64> {
    let mut delta = vec![0.0; master.instance().dims.reel_types];
    for (col, &v) in master.columns().iter().zip(values) {
        if let ColumnKey::Y3 { i2, .. } = col.key {
            delta[i2] += v;
        }
    }
    delta
}

/// Jumbos consumed by a reel-cutting solution, per grammage, machine and
/// period.
pub fn compute_delta1(master: &MasterProblem<'_>, values: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let d = master.instance().dims;
    let mut delta = vec![vec![vec![0.0; d.periods]; d.jumbo_machines]; d.grammages];
    for (col, &v) in master.columns().iter().zip(values) {
        if let ColumnKey::Y2 { k, m1, t, .. } = col.key {
            delta[k][m1][t] += v;
        }
    }
    delta
}

/// `(d2 + delta2) / d2 - 1` per reel type, undefined when `d2` is 0.
pub fn compute_alpha(first_period_demand: &[f64], delta2: &[f64]) -> Vec<Option<f64>> {
    first_period_demand
        .iter()
        .zip(delta2)
        .map(|(&d, &delta)| (d > 0.0).then(|| (d + delta) / d - 1.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyOptions {
    pub colgen: ColgenOptions,
    pub rounding: RoundingOptions,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        StrategyOptions {
            colgen: ColgenOptions::default(),
            rounding: RoundingOptions::default(),
        }
    }
}

/// One master solved to a relaxation and rounded.
#[derive(Debug, Clone)]
pub struct ComponentSolution<'a> {
    pub master: MasterProblem<'a>,
    pub relaxed: RelaxedSolution,
    pub rounded: RoundedSolution,
    pub relax_time: Duration,
    pub round_time: Duration,
}

/// Column generation followed by relax-and-fix on one scope.
pub fn solve_component<'a>(
    inst: &'a Instance,
    scope: Scope,
    extra: &ExtraDemand,
    options: &StrategyOptions,
) -> Result<ComponentSolution<'a>, PlanError> {
    let wrap = |source| PlanError::Master {
        component: scope.to_string(),
        source,
    };
    let start = Instant::now();
    let mut master = MasterProblem::build_initial(inst, scope, extra).map_err(wrap)?;
    let relaxed = run_colgen(&mut master, &options.colgen).map_err(wrap)?;
    let relax_time = start.elapsed();
    let start = Instant::now();
    let rounded = relax_and_fix(&master, &relaxed, &options.rounding).map_err(|e| match e {
        PlanError::RoundingInfeasible { block } => PlanError::RoundingInfeasible {
            block: format!("{scope}: {block}"),
        },
        PlanError::RoundingTimeout { block } => PlanError::RoundingTimeout {
            block: format!("{scope}: {block}"),
        },
        other => other,
    })?;
    let round_time = start.elapsed();
    Ok(ComponentSolution {
        master,
        relaxed,
        rounded,
        relax_time,
        round_time,
    })
}

/// The standalone sheet-cutting solve whose reel consumption inflates reel
/// demand for every strategy.
pub fn preliminary_phase3<'a>(
    inst: &'a Instance,
    options: &StrategyOptions,
) -> Result<ComponentSolution<'a>, PlanError> {
    solve_component(inst, Scope::PHASE3, &ExtraDemand::default(), options)
}

/// Full result of one strategy on one instance.
#[derive(Debug, Clone)]
pub struct StrategyReport<'a> {
    pub strategy: Strategy,
    pub link: DemandLink,
    pub components: Vec<ComponentSolution<'a>>,
    pub relaxed_cost: f64,
    pub rounded_cost: f64,
    pub metrics: PlanMetrics,
    pub relax_time: Duration,
    pub round_time: Duration,
}

impl StrategyReport<'_> {
    /// `(rounded - relaxed) / relaxed`, 0 when both are 0.
    pub fn rounding_gap(&self) -> f64 {
        if self.relaxed_cost == 0.0 {
            0.0
        } else {
            (self.rounded_cost - self.relaxed_cost) / self.relaxed_cost
        }
    }

    pub fn stats(&self) -> ColumnStats {
        let mut s = ColumnStats::default();
        for c in &self.components {
            s.initial += c.relaxed.stats.initial;
            s.generated += c.relaxed.stats.generated;
            s.inserted += c.relaxed.stats.inserted;
        }
        s
    }

    pub fn iterations(&self) -> usize {
        self.components.iter().map(|c| c.relaxed.iterations).sum()
    }
}

/// Runs one strategy. `phase3` is the shared preliminary sheet solve; it is
/// computed here when not supplied.
pub fn solve_strategy<'a>(
    inst: &'a Instance,
    strategy: Strategy,
    options: &StrategyOptions,
    phase3: Option<&ComponentSolution<'a>>,
) -> Result<StrategyReport<'a>, PlanError> {
    let owned;
    let phase3 = match phase3 {
        Some(p) => p,
        None => {
            owned = preliminary_phase3(inst, options)?;
            &owned
        }
    };
    let delta2 = compute_delta2(&phase3.master, &phase3.rounded.values);
    let first_demand: Vec<f64> = inst.phase2.demand.iter().map(|d| d[0]).collect();
    let mut link = DemandLink {
        alpha: compute_alpha(&first_demand, &delta2),
        delta2,
        delta1: vec![vec![vec![0.0; inst.dims.periods]; inst.dims.jumbo_machines]; inst.dims.grammages],
    };

    let mut components: Vec<ComponentSolution<'a>> = Vec::new();
    for &scope in strategy.components() {
        if scope == Scope::PHASE3 {
            components.push(phase3.clone());
            continue;
        }
        let extra = ExtraDemand {
            jumbos: (!scope.phase2).then(|| link.delta1.clone()),
            reels: scope.phase2.then(|| link.delta2.clone()),
        };
        let comp = solve_component(inst, scope, &extra, options)?;
        if scope.phase2 && !scope.phase1 {
            link.delta1 = compute_delta1(&comp.master, &comp.rounded.values);
        }
        components.push(comp);
    }

    let relaxed_cost = components.iter().map(|c| c.relaxed.objective).sum();
    let rounded_cost = components.iter().map(|c| c.rounded.objective).sum();
    let metrics = PlanMetrics::collect(&components);
    Ok(StrategyReport {
        strategy,
        link,
        relax_time: components.iter().map(|c| c.relax_time).sum(),
        round_time: components.iter().map(|c| c.round_time).sum(),
        components,
        relaxed_cost,
        rounded_cost,
        metrics,
    })
}

/// Percentage difference `100 (a - b) / b`.
pub fn percent_delta(a: f64, b: f64) -> f64 {
    100.0 * (a - b) / b
}
