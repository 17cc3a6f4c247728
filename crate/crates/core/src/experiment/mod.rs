//! Repeated seeded runs, Monte-Carlo robustness of incumbents, aggregation
//! and reporting.

mod config;
mod report;
mod run;

pub use config::{run_seed, ExperimentConfig, Method, Scenario};
pub use report::{
    load_experiments, report, run_bench, BenchSuite, LoadedExperiment, ReportFormat,
    REPORT_TRACE_FILE,
};
pub use run::{
    execute_experiment, monte_carlo_eval, run_experiment, trace_csv, trace_header, write_outputs,
    AggregateStats, ExperimentResult, FailedRun, IterationStats, Robustness, RunOutcome,
};
