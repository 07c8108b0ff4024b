//! Experiment harness: runs strategies over generated instances and writes
//! flat-file reports.

pub mod report;
pub mod run;
pub mod spec;
pub mod summary;

pub use report::{read_report, render_report, write_report, write_timings, ReportRow, RunStatus, TimingRow, REPORT_HEADER};
pub use run::{jobs_of, run_bench, run_instance, strategy_options, BenchOutput, InstanceJob};
pub use spec::{parse_id_list, RunSpec, SpecError};
pub use summary::{summarize, Stat, Summary, SUMMARY_FORMAT, SUMMARY_VERSION};
