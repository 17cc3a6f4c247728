use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::config::{ExperimentConfig, Method, Scenario};
use super::run::{
    run_experiment, trace_header, write_file, AggregateStats, ExperimentResult, Robustness,
    CONFIG_FILE, RUNS_FILE, TRACE_FILE,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(Error::invalid(format!("unknown report format '{other}'"))),
        }
    }
}

/// One experiment directory as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedExperiment {
    pub label: String,
    pub config: ExperimentConfig,
    pub aggregate: AggregateStats,
    pub failed_runs: usize,
}

fn experiment_dirs(input: &Path) -> Result<Vec<PathBuf>> {
    if input.join(CONFIG_FILE).is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let entries = fs::read_dir(input).map_err(|e| Error::io(input, e))?;
    let mut dirs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(input, e))?.path();
        if path.join(CONFIG_FILE).is_file() {
            dirs.push(path);
        }
    }
    dirs.sort();
    if dirs.is_empty() {
        return Err(Error::Input(vec![(
            input.to_path_buf(),
            "no experiment outputs found".into(),
        )]));
    }
    Ok(dirs)
}

type Problem = (PathBuf, String);

fn read(path: &Path) -> std::result::Result<String, Problem> {
    fs::read_to_string(path).map_err(|e| (path.to_path_buf(), e.to_string()))
}

fn parse_trace(path: &Path, config: &ExperimentConfig) -> std::result::Result<AggregateStats, Problem> {
    let text = read(path)?;
    let bad = |line: usize, why: &str| (path.to_path_buf(), format!("line {line}: {why}"));
    let mut lines = text.lines();
    let d = config.dimension();
    if lines.next() != Some(trace_header(d).as_str()) {
        return Err(bad(1, "unexpected header"));
    }
    let width = 2 * d + 8;
    let mut runs: BTreeMap<usize, Vec<Robustness>> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != width {
            return Err(bad(lineno, "wrong number of columns"));
        }
        let run_id: usize = cols[0].parse().map_err(|_| bad(lineno, "bad run_id"))?;
        let iter: usize = cols[1].parse().map_err(|_| bad(lineno, "bad iter"))?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(lineno, "bad number"));
        let r = Robustness {
            mean: num(cols[width - 2])?,
            std: num(cols[width - 1])?,
        };
        let trace = runs.entry(run_id).or_default();
        if iter != trace.len() + 1 {
            return Err(bad(lineno, "iterations out of order"));
        }
        trace.push(r);
    }
    if runs.values().any(|t| t.len() != config.budget) {
        return Err((path.to_path_buf(), format!("runs do not all have {} iterations", config.budget)));
    }
    let traces: Vec<&[Robustness]> = runs.values().map(Vec::as_slice).collect();
    AggregateStats::from_traces(&traces).map_err(|e| (path.to_path_buf(), e.to_string()))
}

fn count_failed(path: &Path) -> std::result::Result<usize, Problem> {
    if !path.exists() {
        return Ok(0);
    }
    Ok(read(path)?.lines().skip(1).filter(|l| l.contains(",failed,")).count())
}

fn load_one(dir: &Path) -> std::result::Result<LoadedExperiment, Vec<Problem>> {
    let cfg_path = dir.join(CONFIG_FILE);
    let config = read(&cfg_path)
        .and_then(|t| ExperimentConfig::parse(&t).map_err(|e| (cfg_path.clone(), e.to_string())))
        .map_err(|p| vec![p])?;
    let aggregate = parse_trace(&dir.join(TRACE_FILE), &config);
    let failed = count_failed(&dir.join(RUNS_FILE));
    match (aggregate, failed) {
        (Ok(aggregate), Ok(failed_runs)) => Ok(LoadedExperiment {
            label: dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| config.label()),
            config,
            aggregate,
            failed_runs,
        }),
        (a, f) => Err(a.err().into_iter().chain(f.err()).collect()),
    }
}

/// Reads every experiment under `input` (the directory itself or its
/// immediate subdirectories), reporting all unreadable files at once.
pub fn load_experiments(input: &Path) -> Result<Vec<LoadedExperiment>> {
    let dirs = experiment_dirs(input)?;
    let mut loaded = Vec::new();
    let mut problems = Vec::new();
    for d in dirs {
        match load_one(&d) {
            Ok(e) => loaded.push(e),
            Err(p) => problems.extend(p),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Input(problems));
    }
    Ok(loaded)
}

fn trace_report(experiments: &[LoadedExperiment]) -> String {
    let mut s = String::from(
        "experiment,scenario,method,cp,iter,ymc_mean,ymc_mean_ci95,ymc_std_mean,ymc_std_ci95\n",
    );
    for e in experiments {
        for i in &e.aggregate.iterations {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                e.label,
                e.config.scenario,
                e.config.method,
                e.config.cp,
                i.iteration,
                i.ymc_mean,
                i.ymc_mean_ci95,
                i.ymc_std_mean,
                i.ymc_std_ci95
            )
            .expect("writing to a String");
        }
    }
    s
}

fn summary_csv(experiments: &[LoadedExperiment]) -> String {
    let mut s = String::from(
        "experiment,scenario,method,cp,runs,failed,iter,ymc_mean,ymc_mean_ci95,ymc_std,ymc_std_ci95\n",
    );
    for e in experiments {
        let Some(f) = e.aggregate.final_row() else {
            continue;
        };
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            e.label,
            e.config.scenario,
            e.config.method,
            e.config.cp,
            e.aggregate.runs,
            e.failed_runs,
            f.iteration,
            f.ymc_mean,
            f.ymc_mean_ci95,
            f.ymc_std_mean,
            f.ymc_std_ci95
        )
        .expect("writing to a String");
    }
    s
}

fn summary_markdown(experiments: &[LoadedExperiment]) -> String {
    let mut s = String::from(
        "| Experiment | Scenario | Method | CP | Runs | n | ȳ_mc(x_opt) | std(y_mc(x_opt)) |\n\
         |---|---|---|---|---|---|---|---|\n",
    );
    for e in experiments {
        let Some(f) = e.aggregate.final_row() else {
            continue;
        };
        writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {:.4} ± {:.4} | {:.4} ± {:.4} |",
            e.label,
            e.config.scenario,
            e.config.method,
            if e.config.cp { "yes" } else { "no" },
            e.aggregate.runs,
            f.iteration,
            f.ymc_mean,
            f.ymc_mean_ci95,
            f.ymc_std_mean,
            f.ymc_std_ci95
        )
        .expect("writing to a String");
    }
    s
}

pub const REPORT_TRACE_FILE: &str = "report_trace.csv";

/// Writes the per-iteration trace of every experiment under `input` and a
/// final-iteration summary table; returns the written paths.
pub fn report(input: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let experiments = load_experiments(input)?;
    let trace_path = input.join(REPORT_TRACE_FILE);
    write_file(&trace_path, &trace_report(&experiments))?;
    let (name, body) = match format {
        ReportFormat::Csv => ("summary.csv", summary_csv(&experiments)),
        ReportFormat::Markdown => ("summary.md", summary_markdown(&experiments)),
    };
    let summary_path = input.join(name);
    write_file(&summary_path, &body)?;
    Ok(vec![trace_path, summary_path])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchSuite {
    /// BO and UBO on the 1-D safe/risky benchmark.
    SafeSynthetic,
    /// BO and UBO with the collision penalty on every grasp scenario, plus
    /// UBO without it.
    PlanarGrasp,
}

impl FromStr for BenchSuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "safe-synthetic" => Ok(BenchSuite::SafeSynthetic),
            "planar-grasp" => Ok(BenchSuite::PlanarGrasp),
            other => Err(Error::invalid(format!("unknown bench suite '{other}'"))),
        }
    }
}

impl BenchSuite {
    /// Experiments of the suite under the default protocol, each writing to
    /// its own subdirectory of `out`.
    pub fn experiments(self, out: &Path, seed: u64, workers: usize) -> Vec<ExperimentConfig> {
        let mut plan = Vec::new();
        match self {
            BenchSuite::SafeSynthetic => {
                for m in [Method::Bo, Method::Ubo] {
                    plan.push((Scenario::Synthetic1d, m, true));
                }
            }
            BenchSuite::PlanarGrasp => {
                for s in &Scenario::ALL[2..] {
                    plan.push((*s, Method::Bo, true));
                    plan.push((*s, Method::Ubo, true));
                    plan.push((*s, Method::Ubo, false));
                }
            }
        }
        plan.into_iter()
            .map(|(s, m, cp)| {
                let mut c = ExperimentConfig::new(s, m);
                c.cp = cp;
                c.seed = seed;
                c.workers = workers;
                c.output_dir = out.join(c.label());
                c
            })
            .collect()
    }
}

/// Runs every experiment of `suite` into `out` and writes a CSV report.
pub fn run_bench(
    suite: BenchSuite,
    out: &Path,
    seed: u64,
    workers: usize,
) -> Result<Vec<ExperimentResult>> {
    let results = suite
        .experiments(out, seed, workers)
        .iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    report(out, ReportFormat::Csv)?;
    Ok(results)
}
