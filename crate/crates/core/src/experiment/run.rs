use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::config::{run_seed, ExperimentConfig};
use crate::error::{Error, Result};
use crate::optimizer::{run_optimization, Objective, RunRecord};
use crate::unscented::InputNoise;

/// Monte-Carlo robustness of one incumbent: sample mean and standard
/// deviation of the raw outcome under input noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Robustness {
    pub mean: f64,
    pub std: f64,
}

/// Evaluates the raw objective at `mc_samples` perturbations of `x_opt`
/// (Gaussian with standard deviation `σx` per axis, clamped to the unit cube).
pub fn monte_carlo_eval<O: Objective + ?Sized, R: Rng + ?Sized>(
    objective: &O,
    x_opt: &[f64],
    mc_samples: usize,
    noise: &InputNoise,
    rng: &mut R,
) -> Result<Robustness> {
    if mc_samples == 0 {
        return Err(Error::invalid("mc_samples must be at least 1"));
    }
    let normal = Normal::new(0.0, noise.sigma_x())
        .map_err(|e| Error::invalid(format!("input noise: {e}")))?;
    let mut values = Vec::with_capacity(mc_samples);
    let mut x = vec![0.0; x_opt.len()];
    for _ in 0..mc_samples {
        for (xi, c) in x.iter_mut().zip(x_opt) {
            *xi = (c + normal.sample(rng)).clamp(0.0, 1.0);
        }
        values.push(objective.evaluate(&x)?.quality);
    }
    let (mean, std) = mean_and_std(&values);
    Ok(Robustness { mean, std })
}

/// Sample mean and standard deviation (denominator `n − 1`, 0 for one value).
pub(crate) fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run_id: usize,
    pub record: RunRecord,
    /// Robustness of the incumbent after each evaluation.
    pub robustness: Vec<Robustness>,
}

impl RunOutcome {
    pub fn final_robustness(&self) -> Robustness {
        *self.robustness.last().expect("non-empty run")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedRun {
    pub run_id: usize,
    pub seed: u64,
    pub message: String,
    pub numerical: bool,
}

/// Per-iteration statistics across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    pub ymc_mean: f64,
    pub ymc_mean_std: f64,
    pub ymc_mean_ci95: f64,
    pub ymc_std_mean: f64,
    pub ymc_std_std: f64,
    pub ymc_std_ci95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub runs: usize,
    pub iterations: Vec<IterationStats>,
}

/// Mean, standard deviation and 95% half-width `1.96·s/√n`. Values are
/// summed in sorted order so the result does not depend on run order.
fn summarize(values: &mut [f64]) -> (f64, f64, f64) {
    values.sort_by(f64::total_cmp);
    let (mean, std) = mean_and_std(values);
    (mean, std, 1.96 * std / (values.len() as f64).sqrt())
}

impl AggregateStats {
    /// Aggregates robustness traces of equal length.
    pub fn from_traces(traces: &[&[Robustness]]) -> Result<Self> {
        let len = traces.first().map_or(0, |t| t.len());
        if traces.iter().any(|t| t.len() != len) {
            return Err(Error::invalid("robustness traces differ in length"));
        }
        let iterations = (0..len)
            .map(|i| {
                let mut means: Vec<f64> = traces.iter().map(|t| t[i].mean).collect();
                let mut stds: Vec<f64> = traces.iter().map(|t| t[i].std).collect();
                let (m, s, ci) = summarize(&mut means);
                let (sm, ss, sci) = summarize(&mut stds);
                IterationStats {
                    iteration: i + 1,
                    ymc_mean: m,
                    ymc_mean_std: s,
                    ymc_mean_ci95: ci,
                    ymc_std_mean: sm,
                    ymc_std_std: ss,
                    ymc_std_ci95: sci,
                }
            })
            .collect();
        Ok(Self {
            runs: traces.len(),
            iterations,
        })
    }

    pub fn final_row(&self) -> Option<&IterationStats> {
        self.iterations.last()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub completed: Vec<RunOutcome>,
    pub failed: Vec<FailedRun>,
    pub aggregate: AggregateStats,
}

impl ExperimentResult {
    pub fn numerical_failures(&self) -> usize {
        self.failed.iter().filter(|f| f.numerical).count()
    }
}

fn robustness_trace<O: Objective + ?Sized>(
    objective: &O,
    record: &RunRecord,
    config: &ExperimentConfig,
) -> Result<Vec<Robustness>> {
    let mut rng = ChaCha8Rng::seed_from_u64(record.seed);
    rng.set_stream(1);
    let noise = &record.config.noise;
    let mut out: Vec<Robustness> = Vec::with_capacity(record.entries.len());
    let mut previous: Option<&[f64]> = None;
    for e in &record.entries {
        let fresh = config.mc_every_iteration || previous != Some(e.incumbent_x.as_slice());
        let r = match out.last() {
            Some(&last) if !fresh => last,
            _ => monte_carlo_eval(objective, &e.incumbent_x, config.mc_samples, noise, &mut rng)?,
        };
        out.push(r);
        previous = Some(&e.incumbent_x);
    }
    Ok(out)
}

fn execute_run<O: Objective + ?Sized>(
    objective: &O,
    config: &ExperimentConfig,
    run_id: usize,
) -> Result<RunOutcome> {
    let oc = config.optimizer_config(run_id)?;
    let record = run_optimization(objective, &oc)?;
    let robustness = robustness_trace(objective, &record, config)?;
    Ok(RunOutcome {
        run_id,
        record,
        robustness,
    })
}

/// Executes all runs of an experiment (in parallel up to `config.workers`)
/// without touching the filesystem. The result does not depend on the
/// number of workers.
pub fn execute_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let objective = config.scenario.objective();
    let objective: &(dyn Objective + Send) = &*objective;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?;
    let results: Vec<(usize, Result<RunOutcome>)> = pool.install(|| {
        (0..config.runs)
            .into_par_iter()
            .map(|id| (id, execute_run(objective, config, id)))
            .collect()
    });
    let mut completed = Vec::new();
    let mut failed = Vec::new();
    for (run_id, r) in results {
        match r {
            Ok(o) => completed.push(o),
            Err(e) if e.is_numerical() => failed.push(FailedRun {
                run_id,
                seed: run_seed(config.seed, run_id),
                message: e.to_string(),
                numerical: true,
            }),
            Err(e) => return Err(e),
        }
    }
    let traces: Vec<&[Robustness]> = completed.iter().map(|o| o.robustness.as_slice()).collect();
    let aggregate = AggregateStats::from_traces(&traces)?;
    Ok(ExperimentResult {
        config: config.clone(),
        completed,
        failed,
        aggregate,
    })
}

/// Executes the experiment and writes its artifacts to `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let result = execute_experiment(config)?;
    write_outputs(&result, &config.output_dir)?;
    Ok(result)
}

pub(crate) const TRACE_FILE: &str = "trace.csv";
pub(crate) const AGGREGATE_FILE: &str = "aggregate.csv";
pub(crate) const RUNS_FILE: &str = "runs.csv";
pub(crate) const CONFIG_FILE: &str = "config.txt";

/// Header of the per-iteration trace for a `d`-dimensional search space.
pub fn trace_header(d: usize) -> String {
    let xs: Vec<String> = (1..=d).map(|i| format!("x_{i}")).collect();
    let opts: Vec<String> = (1..=d).map(|i| format!("opt_x_{i}")).collect();
    format!(
        "run_id,iter,{},f,f_prime,n_j,{},opt_value,ymc_mean,ymc_std",
        xs.join(","),
        opts.join(",")
    )
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub fn trace_csv(result: &ExperimentResult) -> String {
    let mut s = trace_header(result.config.dimension());
    s.push('\n');
    for run in &result.completed {
        for (e, r) in run.record.entries.iter().zip(&run.robustness) {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                run.run_id,
                e.iteration,
                join(&e.x),
                e.f,
                e.f_prime,
                e.n_j,
                join(&e.incumbent_x),
                e.incumbent_value,
                r.mean,
                r.std
            )
            .expect("writing to a String");
        }
    }
    s
}

pub(crate) fn aggregate_csv(stats: &AggregateStats) -> String {
    let mut s = String::from(
        "iter,ymc_mean,ymc_mean_std,ymc_mean_ci95,ymc_std_mean,ymc_std_std,ymc_std_ci95\n",
    );
    for i in &stats.iterations {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            i.iteration,
            i.ymc_mean,
            i.ymc_mean_std,
            i.ymc_mean_ci95,
            i.ymc_std_mean,
            i.ymc_std_std,
            i.ymc_std_ci95
        )
        .expect("writing to a String");
    }
    s
}

fn runs_csv(result: &ExperimentResult) -> String {
    let mut rows: Vec<(usize, String)> = result
        .completed
        .iter()
        .map(|r| (r.run_id, format!("{},{},completed,", r.run_id, r.record.seed)))
        .chain(result.failed.iter().map(|f| {
            let msg = f.message.replace([',', '\n'], ";");
            (f.run_id, format!("{},{},failed,{msg}", f.run_id, f.seed))
        }))
        .collect();
    rows.sort();
    let mut s = String::from("run_id,seed,status,message\n");
    for (_, r) in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `config.txt`, `trace.csv`, `aggregate.csv` and `runs.csv`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(&dir.join(CONFIG_FILE), &result.config.to_config_string())?;
    write_file(&dir.join(TRACE_FILE), &trace_csv(result))?;
    write_file(&dir.join(AGGREGATE_FILE), &aggregate_csv(&result.aggregate))?;
    write_file(&dir.join(RUNS_FILE), &runs_csv(result))
}
