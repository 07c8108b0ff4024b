//! End-to-end acceptance checks. Each check prints one PASS or FAIL line;
//! the test fails if any check does.

use std::time::{Duration, Instant};

use paperplan::instances::{class_config, generate_instance, generate_tiny_instance, Instance};
use paperplan::master::{run_colgen, ColgenOptions, ColumnKey, Duals, ExtraDemand, MasterProblem, RowId, RowLayout, Scope};
use paperplan::planner::{preliminary_phase3, PlanMetrics, Strategy, StrategyReport};
use paperplan::pricing::{build_pattern_2d, price_1d, price_strip, strip_references};
use paperplan_bench::{render_report, run_bench, run_instance, strategy_options, InstanceJob, ReportRow, RunSpec};
use paperplan_oracles::patterns::{best_fill, count_vectors, reel_patterns, strip_sheets};
use paperplan_oracles::plan::{check_integer_plan, column, enumeration_lp, min_reduced_cost};
use paperplan_oracles::{random, solver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solvekit::{solve_lp, solve_mip, LpStatus, MipOptions, MipStatus};

type Outcome = Result<String, String>;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn random_duals(inst: &Instance, rng: &mut ChaCha8Rng) -> Duals {
    let layout = RowLayout::new(inst.dims, Scope::ALL);
    let values = layout
        .rows()
        .map(|row| match row {
            RowId::Capacity1 { .. } | RowId::Capacity2 { .. } | RowId::Capacity3 { .. } => {
                if rng.gen_bool(0.5) {
                    0.0
                } else {
                    rng.gen_range(-1.0..0.0)
                }
            }
            RowId::JumboBalance { .. } => rng.gen_range(-3.0..3.0),
            _ => rng.gen_range(-2.0..6.0),
        })
        .collect();
    Duals::new(layout, values, 1.0)
}

fn reduced_cost(inst: &Instance, duals: &Duals, key: &ColumnKey) -> f64 {
    let (cost, entries) = column(inst, key);
    cost - entries.iter().map(|(&row, &a)| a * duals.get(row)).sum::<f64>()
}

fn pricing_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut compared = 0;
    for case in 0..200u64 {
        let inst = generate_tiny_instance(1000 + case, case % 2 == 0);
        let duals = random_duals(&inst, &mut rng);
        let d = inst.dims;
        let t = rng.gen_range(0..d.periods);
        let tau = rng.gen_range(0..d.subperiods);
        for m1 in 0..d.jumbo_machines {
            let priced = price_1d(&inst, &duals, 0, m1, t);
            let sizes: Vec<u64> = inst.phase2.reel_length.iter().map(|&l| l as u64).collect();
            let mut best = f64::INFINITY;
            for counts in count_vectors(&sizes, inst.phase1.jumbo_length[m1] as u64) {
                for m2 in 0..d.rewinders {
                    best = best.min(reduced_cost(&inst, &duals, &ColumnKey::Y2 { k: 0, m1, m2, t, counts: counts.clone() }));
                }
            }
            if !close(priced.reduced_cost, best, 1e-9) {
                return Err(format!("case {case}: 1d {} vs {best}", priced.reduced_cost));
            }
            compared += 1;
        }
        for i2 in 0..d.reel_types {
            for reference in strip_references(&inst, i2) {
                let strip = price_strip(&inst, &duals, i2, reference, tau);
                let sheets = strip_sheets(&inst, 0, inst.phase3.sheet_length[reference]);
                let sizes: Vec<u64> = sheets.iter().map(|&s| inst.phase3.sheet_width[s] as u64).collect();
                let values: Vec<f64> = sheets
                    .iter()
                    .map(|&s| {
                        let p3 = &inst.phase3;
                        p3.waste_cost[0][tau] * p3.sheet_length[s] * p3.sheet_width[s]
                            + duals.get(RowId::SheetDemand { i3: s, tau })
                    })
                    .collect();
                let best = best_fill(&sizes, &values, inst.phase2.reel_width[i2] as u64);
                if !close(strip.value, best, 1e-9) {
                    return Err(format!("case {case}: strip {} vs {best}", strip.value));
                }
                compared += 1;
            }
            let priced = build_pattern_2d(&inst, &duals, i2, tau);
            let mut patterns = reel_patterns(&inst, i2);
            patterns.push(vec![0; d.sheet_types]);
            let mut best = f64::INFINITY;
            for counts in patterns {
                for m3 in 0..d.cutters {
                    best = best.min(reduced_cost(&inst, &duals, &ColumnKey::Y3 { i2, m3, tau, counts: counts.clone() }));
                }
            }
            if !close(priced.reduced_cost, best, 1e-9) {
                return Err(format!("case {case}: 2d {} vs {best}", priced.reduced_cost));
            }
            compared += 1;
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(5) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{compared} pricing problems matched in {:.2}s", elapsed.as_secs_f64()))
}

fn colgen_certificate() -> Outcome {
    let mut checked = 0;
    for seed in 0..20u64 {
        let inst = generate_tiny_instance(500 + seed, seed % 2 == 1);
        let extra = ExtraDemand::default();
        let oracle = enumeration_lp(&inst, Scope::ALL, &extra);
        let relaxed = MasterProblem::build_initial(&inst, Scope::ALL, &extra)
            .map_err(|e| e.to_string())
            .and_then(|mut m| run_colgen(&mut m, &ColgenOptions::default()).map_err(|e| e.to_string()));
        match (relaxed, oracle) {
            (Ok(r), Some(best)) => {
                if (r.objective - best).abs() > 1e-6 * (1.0 + best.abs()) {
                    return Err(format!("seed {seed}: colgen {} vs enumeration {best}", r.objective));
                }
                let (rc, key) = min_reduced_cost(&inst, Scope::ALL, &|row| r.duals.get(row));
                if rc < -1e-6 {
                    return Err(format!("seed {seed}: {key:?} prices out at {rc}"));
                }
                checked += 1;
            }
            (Err(_), None) => {}
            (Ok(_), None) => return Err(format!("seed {seed}: colgen feasible, enumeration infeasible")),
            (Err(e), Some(_)) => return Err(format!("seed {seed}: {e} on a feasible instance")),
        }
    }
    if checked < 10 {
        return Err(format!("only {checked} feasible tiny instances"));
    }
    Ok(format!("{checked}/20 feasible instances certified optimal"))
}

/// Per-run invariants collected while the sweep runs.
#[derive(Default)]
struct SweepChecks {
    runs: usize,
    monotone_failures: Vec<String>,
    feasibility_failures: Vec<String>,
}

impl SweepChecks {
    fn inspect(&mut self, seed: u64, report: &StrategyReport<'_>) {
        self.runs += 1;
        for comp in &report.components {
            for w in comp.relaxed.history.windows(2) {
                if w[1] > w[0] + 1e-9 * w[0].abs().max(1.0) {
                    self.monotone_failures.push(format!("seed {seed} {}: {} then {}", report.strategy, w[0], w[1]));
                }
            }
            let master = &comp.master;
            let plan: Vec<(ColumnKey, f64)> =
                master.columns().iter().zip(&comp.rounded.values).map(|(c, &v)| (c.key.clone(), v)).collect();
            let problems = check_integer_plan(report.components[0].master.instance(), master.scope(), master.extra(), &plan);
            if !problems.is_empty() {
                self.feasibility_failures.push(format!("seed {seed} {}: {}", report.strategy, problems[0]));
            }
        }
    }
}

struct Sweep {
    rows: Vec<ReportRow>,
    checks: SweepChecks,
    elapsed: Duration,
}

fn class1_sweep() -> Sweep {
    let started = Instant::now();
    let options = strategy_options(Duration::from_secs(60));
    let config = class_config(1).unwrap();
    let mut rows = Vec::new();
    let mut checks = SweepChecks::default();
    for seed in 0..20u64 {
        let mut instance = generate_instance(&config, seed, 4, 5);
        instance.class_id = Some(1);
        let job = InstanceJob { class_id: Some(1), seed, instance };
        let out = run_instance(&job, &Strategy::ALL, &options, &mut |r| checks.inspect(seed, r));
        rows.extend(out.into_iter().map(|(row, _)| row));
    }
    Sweep { rows, checks, elapsed: started.elapsed() }
}

fn monotonicity(sweep: &Sweep) -> Outcome {
    match sweep.checks.monotone_failures.first() {
        Some(f) => Err(format!("{} increases, first {f}", sweep.checks.monotone_failures.len())),
        None => Ok(format!("{} runs non-increasing", sweep.checks.runs)),
    }
}

fn integer_feasibility(sweep: &Sweep) -> Outcome {
    if sweep.checks.runs == 0 {
        return Err("no run completed".into());
    }
    match sweep.checks.feasibility_failures.first() {
        Some(f) => Err(format!("{} violations, first {f}", sweep.checks.feasibility_failures.len())),
        None => Ok(format!("{} rounded runs feasible", sweep.checks.runs)),
    }
}

fn dominance(sweep: &Sweep) -> Outcome {
    let mut feasible = 0;
    let mut dominated = 0;
    let mut losses = Vec::new();
    for base in sweep.rows.iter().filter(|r| r.strategy == "S123I" && r.is_ok()) {
        feasible += 1;
        let b = base.relaxed_cost.unwrap();
        let wins = sweep
            .rows
            .iter()
            .filter(|r| r.seed == base.seed && r.strategy != "S123I" && r.is_ok())
            .all(|r| b <= r.relaxed_cost.unwrap() + 1e-6 * (1.0 + b.abs()));
        if wins {
            dominated += 1;
        } else {
            losses.push(base.seed);
        }
    }
    let detail = format!("{dominated}/{feasible} feasible instances, losses at seeds {losses:?}");
    if feasible > 0 && dominated * 100 >= feasible * 95 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

fn rounding_gap(sweep: &Sweep) -> Outcome {
    let gaps = |filter: &dyn Fn(&ReportRow) -> bool| -> Vec<f64> {
        sweep.rows.iter().filter(|r| r.is_ok() && filter(r)).filter_map(|r| r.gap).collect()
    };
    let all = median(gaps(&|_| true));
    let integrated = median(gaps(&|r| r.strategy == "S123I"));
    let (Some(all), Some(integrated)) = (all, integrated) else {
        return Err("no feasible run".into());
    };
    let minutes = sweep.elapsed.as_secs_f64() / 60.0;
    let detail = format!(
        "median gap {:.3}% over all runs, {:.3}% for S123I, sweep {minutes:.1} min",
        100.0 * all,
        100.0 * integrated
    );
    if all <= 0.02 && integrated <= 0.02 && minutes < 30.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn phase3_waste(inst: &Instance) -> Option<f64> {
    let options = strategy_options(Duration::from_secs(60));
    let prelim = preliminary_phase3(inst, &options).ok()?;
    Some(PlanMetrics::collect(std::slice::from_ref(&prelim)).phases[2].waste)
}

fn trimming_direction() -> Outcome {
    let (with, without) = (class_config(1).unwrap(), class_config(2).unwrap());
    let mut pairs = Vec::new();
    for seed in 0..40u64 {
        if pairs.len() == 10 {
            break;
        }
        let a = phase3_waste(&generate_instance(&with, seed, 4, 5));
        let b = phase3_waste(&generate_instance(&without, seed, 4, 5));
        if let (Some(a), Some(b)) = (a, b) {
            pairs.push((seed, a, b));
        }
    }
    let better = pairs.iter().filter(|(_, a, b)| *a <= *b + 1e-9 * b.abs()).count();
    let detail = format!("trimming wastes no more in {better}/{} pairs", pairs.len());
    if pairs.len() == 10 && better >= 8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solver_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..200 {
        let lp = random::small_lp(&mut rng);
        let sol = solve_lp(&lp).map_err(|e| format!("lp {case}: {e}"))?;
        match solver::vertex_enumeration(&lp) {
            Some((obj, _)) if sol.status == LpStatus::Optimal && (sol.objective - obj).abs() <= 1e-6 => {}
            None if sol.status == LpStatus::Infeasible => {}
            other => return Err(format!("lp {case}: {:?} {} vs {other:?}", sol.status, sol.objective)),
        }
    }
    for case in 0..100 {
        let lp = random::small_ip(&mut rng);
        let res = solve_mip(&lp, &MipOptions::default()).map_err(|e| format!("ip {case}: {e}"))?;
        match solver::exhaustive_integer(&lp) {
            Some((obj, _)) if res.status == MipStatus::Optimal && (res.objective - obj).abs() <= 1e-9 => {}
            None if res.status == MipStatus::Infeasible => {}
            other => return Err(format!("ip {case}: {:?} {} vs {other:?}", res.status, res.objective)),
        }
    }
    Ok("200 LPs and 100 IPs match".into())
}

fn determinism() -> Outcome {
    let spec = |jobs| RunSpec {
        classes: vec![1, 2, 5],
        seeds: 2,
        periods: 2,
        subperiods: 3,
        strategies: Strategy::ALL.to_vec(),
        time_limit: Duration::from_secs(60),
        out_dir: std::env::temp_dir(),
        jobs,
    };
    let render = |jobs| -> Result<String, String> {
        let out = run_bench(&spec(jobs)).map_err(|e| e.to_string())?;
        render_report(&out.rows).map_err(|e| e.to_string())
    };
    let first = render(1)?;
    let repeat = render(1)?;
    let parallel = render(3)?;
    if first != repeat {
        return Err("repeated serial runs differ".into());
    }
    if first != parallel {
        return Err("serial and parallel runs differ".into());
    }
    Ok(format!("{} identical bytes across 3 runs", first.len()))
}

#[test]
fn acceptance_suite() {
    let sweep = class1_sweep();
    let checks: Vec<(&str, Outcome)> = vec![
        ("pricing matches exhaustive enumeration", pricing_oracle()),
        ("column generation reaches the enumeration optimum", colgen_certificate()),
        ("master objective is non-increasing", monotonicity(&sweep)),
        ("rounded plans are integer feasible", integer_feasibility(&sweep)),
        ("integrated relaxation dominates", dominance(&sweep)),
        ("median rounding gap at most 2%", rounding_gap(&sweep)),
        ("trimming reduces sheet-cutting waste", trimming_direction()),
        ("solver kernel matches brute force", solver_oracles()),
        ("reports are deterministic", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in checks.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance checks failed");
}
