use std::time::Duration;

use paperplan::instances::{class_config, generate_instance, Instance};
use paperplan::planner::{preliminary_phase3, solve_strategy, Strategy, StrategyOptions, StrategyReport};
use rayon::prelude::*;

use crate::report::{ReportRow, TimingRow};
use crate::spec::RunSpec;

pub struct InstanceJob {
    pub class_id: Option<u32>,
    pub seed: u64,
    pub instance: Instance,
}

/// Runs `strategies` on one instance in order, handing each successful
/// report to `inspect` before it is flattened into a row. All strategies
/// share one preliminary sheet-cutting solve; when that fails every
/// strategy is reported with its error.
pub fn run_instance(
    job: &InstanceJob,
    strategies: &[Strategy],
    options: &StrategyOptions,
    inspect: &mut dyn FnMut(&StrategyReport<'_>),
) -> Vec<(ReportRow, TimingRow)> {
    let (class_id, seed) = (job.class_id, job.seed);
    let prelim = match preliminary_phase3(&job.instance, options) {
        Ok(p) => p,
        Err(e) => return strategies.iter().map(|&s| ReportRow::failed(class_id, seed, s, &e)).collect(),
    };
    strategies
        .iter()
        .map(|&s| match solve_strategy(&job.instance, s, options, Some(&prelim)) {
            Ok(report) => {
                inspect(&report);
                ReportRow::from_report(class_id, seed, &report)
            }
            Err(e) => ReportRow::failed(class_id, seed, s, &e),
        })
        .collect()
}

pub struct BenchOutput {
    pub rows: Vec<ReportRow>,
    pub timings: Vec<TimingRow>,
}

/// The instances of a sweep in (class, seed) order.
pub fn jobs_of(spec: &RunSpec) -> Vec<InstanceJob> {
    let mut jobs = Vec::new();
    for &class in &spec.classes {
        let config = class_config(class).expect("validated class id");
        for seed in 0..spec.seeds {
            let mut instance = generate_instance(&config, seed, spec.periods, spec.subperiods);
            instance.class_id = Some(class);
            jobs.push(InstanceJob {
                class_id: Some(class),
                seed,
                instance,
            });
        }
    }
    jobs
}

pub fn strategy_options(time_limit_per_block: Duration) -> StrategyOptions {
    let mut options = StrategyOptions::default();
    options.rounding.time_limit_per_block = time_limit_per_block;
    options
}

/// Runs the whole sweep on `spec.jobs` worker threads. Rows come back in
/// (class, seed, strategy) order whatever the thread count.
pub fn run_bench(spec: &RunSpec) -> Result<BenchOutput, rayon::ThreadPoolBuildError> {
    let jobs = jobs_of(spec);
    let options = strategy_options(spec.time_limit);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(spec.jobs.max(1)).build()?;
    let results: Vec<Vec<(ReportRow, TimingRow)>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_instance(job, &spec.strategies, &options, &mut |_| {}))
            .collect()
    });
    let mut pairs: Vec<(ReportRow, TimingRow)> = results.into_iter().flatten().collect();
    pairs.sort_by_key(|(r, _)| (r.class_id, r.seed, strategy_rank(&r.strategy)));
    let (rows, timings) = pairs.into_iter().unzip();
    Ok(BenchOutput { rows, timings })
}

fn strategy_rank(name: &str) -> usize {
    Strategy::ALL.iter().position(|s| s.name() == name).unwrap_or(usize::MAX)
}
