use paperplan::instances::{class_config, generate_instance, generate_tiny_instance};
use paperplan::master::{canonical_column, run_colgen, ColgenOptions, ExtraDemand, MasterProblem, Scope};
use paperplan_oracles::plan::{column, enumeration_lp, min_reduced_cost};

const SCOPES: [Scope; 6] = [
    Scope::PHASE1,
    Scope::PHASE2,
    Scope::PHASE3,
    Scope::PHASES_12,
    Scope::PHASES_23,
    Scope::ALL,
];

#[test]
fn stored_coefficients_match_an_independent_rebuild() {
    for seed in 0..50u64 {
        let class = 1 + (seed % 24) as u32;
        let inst = generate_instance(&class_config(class).unwrap(), seed, 3, 2);
        for scope in [Scope::ALL, Scope::PHASES_23, Scope::PHASE3] {
            let Ok(mut master) = MasterProblem::build_initial(&inst, scope, &ExtraDemand::default()) else {
                continue;
            };
            if seed % 5 == 0 {
                let _ = run_colgen(&mut master, &ColgenOptions { max_iter: 3, ..ColgenOptions::default() });
            }
            let layout = *master.layout();
            for col in master.columns() {
                let (cost, entries) = column(&inst, &col.key);
                assert_eq!(col.objective, cost, "{:?}", col.key);
                let expected: Vec<(usize, f64)> = entries
                    .iter()
                    .filter_map(|(row, &a)| layout.index(*row).map(|i| (i, a)))
                    .collect();
                let mut stored = col.entries.clone();
                stored.sort_by_key(|e| e.0);
                let mut expected = expected;
                expected.sort_by_key(|e| e.0);
                assert_eq!(stored, expected, "{:?}", col.key);
                let canon = canonical_column(&inst, &layout, &col.key);
                assert_eq!(canon.objective, col.objective);
            }
        }
    }
}

#[test]
fn colgen_reaches_the_full_enumeration_optimum_on_tiny_instances() {
    let mut checked = 0;
    for seed in 0..20u64 {
        let inst = generate_tiny_instance(seed, seed % 2 == 0);
        for scope in SCOPES {
            let extra = ExtraDemand::default();
            let oracle = enumeration_lp(&inst, scope, &extra);
            let Ok(mut master) = MasterProblem::build_initial(&inst, scope, &extra) else {
                assert!(oracle.is_none(), "seed {seed} {scope}: master rejected a feasible instance");
                continue;
            };
            match run_colgen(&mut master, &ColgenOptions::default()) {
                Ok(relaxed) => {
                    let best = oracle.unwrap_or_else(|| panic!("seed {seed} {scope}: oracle infeasible"));
                    assert!(relaxed.converged);
                    assert!(
                        (relaxed.objective - best).abs() <= 1e-6,
                        "seed {seed} {scope}: colgen {} vs enumeration {best}",
                        relaxed.objective
                    );
                    let duals = relaxed.duals.clone();
                    let (rc, key) = min_reduced_cost(&inst, scope, &|row| duals.get(row));
                    assert!(rc >= -1e-6, "seed {seed} {scope}: {key:?} prices out at {rc}");
                    checked += 1;
                }
                Err(e) => assert!(oracle.is_none(), "seed {seed} {scope}: {e} but enumeration is feasible"),
            }
        }
    }
    assert!(checked >= 60, "too few feasible tiny runs: {checked}");
}

#[test]
fn objective_never_increases_across_iterations() {
    let runs: Vec<_> = (0..6u64)
        .map(|seed| (generate_instance(&class_config(1 + seed as u32 * 4).unwrap(), seed, 2, 2), Scope::ALL))
        .chain((0..20u64).map(|seed| (generate_tiny_instance(seed, true), Scope::ALL)))
        .collect();
    for (inst, scope) in &runs {
        let Ok(mut master) = MasterProblem::build_initial(inst, *scope, &ExtraDemand::default()) else {
            continue;
        };
        let Ok(relaxed) = run_colgen(&mut master, &ColgenOptions::default()) else {
            continue;
        };
        for w in relaxed.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0), "{} then {}", w[0], w[1]);
        }
    }
}

#[test]
fn zero_demand_gives_zero_cost_in_every_scope() {
    let inst = generate_instance(&class_config(3).unwrap(), 11, 2, 2).without_demand();
    for scope in SCOPES {
        let mut master = MasterProblem::build_initial(&inst, scope, &ExtraDemand::default()).unwrap();
        let relaxed = run_colgen(&mut master, &ColgenOptions::default()).unwrap();
        assert_eq!(relaxed.objective, 0.0, "{scope}");
        assert!(relaxed.values.iter().all(|&v| v == 0.0));
    }
}
