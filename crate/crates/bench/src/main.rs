use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use paperplan::instances::{class_config, generate_instance, load, save};
use paperplan::planner::Strategy;
use paperplan_bench::{
    parse_id_list, read_report, render_report, run_bench, run_instance, strategy_options, summarize, write_report, write_timings,
    InstanceJob, RunSpec,
};

/// Plans jumbo production, reel cutting and sheet cutting, and benchmarks
/// the four integration strategies.
#[derive(Parser)]
#[command(name = "paperplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one instance file per (class, seed).
    Gen {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance file with one strategy and write a one-row report.
    Solve {
        /// Instance file written by `gen`.
        instance: PathBuf,
        #[arg(long, default_value = "S123I")]
        strategy: Strategy,
        /// Per-block rounding time limit in seconds.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        /// Report file to write; defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run strategies over generated instances and write report.csv,
    /// timings.csv and summary.json.
    Bench {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value = "S123,S1_23,S12_3,S123I", value_delimiter = ',')]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute summary.json from an existing report.csv.
    Report {
        input: PathBuf,
        /// Summary file to write; defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Class ids, e.g. `1-24` or `1,3,5`.
    #[arg(long, default_value = "1")]
    classes: String,
    /// Seeds 0..N per class.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = 4)]
    periods: usize,
    #[arg(long, default_value_t = 5)]
    subperiods: usize,
}

const EXIT_USAGE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn seconds(limit: f64) -> Result<Duration, String> {
    Duration::try_from_secs_f64(limit).map_err(|e| format!("time limit {limit}: {e}"))
}

fn ensure_dir(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))
}

fn execute(command: Command) -> Result<u8, String> {
    match command {
        Command::Gen { sweep, out } => {
            let classes = parse_id_list(&sweep.classes).map_err(|e| e.to_string())?;
            ensure_dir(&out)?;
            let mut written = 0;
            for class in classes {
                let config = class_config(class).map_err(|e| e.to_string())?;
                for seed in 0..sweep.seeds {
                    let mut inst = generate_instance(&config, seed, sweep.periods, sweep.subperiods);
                    inst.class_id = Some(class);
                    let path = out.join(format!("class{class:02}_seed{seed:03}.json"));
                    save(&inst, &path).map_err(|e| e.to_string())?;
                    written += 1;
                }
            }
            println!("wrote {written} instance files to {}", out.display());
            Ok(0)
        }
        Command::Solve {
            instance,
            strategy,
            time_limit,
            out,
        } => {
            let inst = load(&instance).map_err(|e| e.to_string())?;
            let options = strategy_options(seconds(time_limit)?);
            let job = InstanceJob {
                class_id: inst.class_id,
                seed: inst.seed,
                instance: inst,
            };
            let (row, _) = run_instance(&job, &[strategy], &options, &mut |_| {})
                .pop()
                .expect("one strategy, one row");
            let code = row.status.exit_code() as u8;
            match &out {
                Some(path) => write_report(path, std::slice::from_ref(&row)).map_err(|e| e.to_string())?,
                None => print!("{}", render_report(std::slice::from_ref(&row)).map_err(|e| e.to_string())?),
            }
            if !row.is_ok() {
                eprintln!("{}: {}", row.status, row.message);
            }
            Ok(code)
        }
        Command::Bench {
            sweep,
            strategies,
            time_limit,
            jobs,
            out,
        } => {
            let spec = RunSpec {
                classes: parse_id_list(&sweep.classes).map_err(|e| e.to_string())?,
                seeds: sweep.seeds,
                periods: sweep.periods,
                subperiods: sweep.subperiods,
                strategies,
                time_limit: seconds(time_limit)?,
                out_dir: out,
                jobs,
            };
            spec.validate().map_err(|e| e.to_string())?;
            ensure_dir(&spec.out_dir)?;
            let output = run_bench(&spec).map_err(|e| e.to_string())?;
            write_report(&spec.out_dir.join("report.csv"), &output.rows).map_err(|e| e.to_string())?;
            write_timings(&spec.out_dir.join("timings.csv"), &output.timings).map_err(|e| e.to_string())?;
            let summary = summarize(&output.rows);
            write_json(Some(&spec.out_dir.join("summary.json")), &summary)?;
            println!(
                "{} runs, {} ok, {} failed; reports in {}",
                summary.rows,
                summary.ok,
                summary.failed,
                spec.out_dir.display()
            );
            Ok(0)
        }
        Command::Report { input, out } => {
            let rows = read_report(&input).map_err(|e| e.to_string())?;
            write_json(out.as_deref(), &summarize(&rows))?;
            Ok(0)
        }
    }
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
