use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grasp::{GraspScene, SearchMode};
use crate::optimizer::{make_synthetic_objective, Objective, OptimizerConfig, SyntheticKind};
use crate::unscented::InputNoise;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Synthetic1d,
    Synthetic2d,
    Glass2d,
    Glass3d,
    Bottle2d,
    Bottle3d,
    Mug2d,
    Mug3d,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Synthetic1d,
        Scenario::Synthetic2d,
        Scenario::Glass2d,
        Scenario::Glass3d,
        Scenario::Bottle2d,
        Scenario::Bottle3d,
        Scenario::Mug2d,
        Scenario::Mug3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Synthetic1d => "synthetic-1d",
            Scenario::Synthetic2d => "synthetic-2d",
            Scenario::Glass2d => "glass-2d",
            Scenario::Glass3d => "glass-3d",
            Scenario::Bottle2d => "bottle-2d",
            Scenario::Bottle3d => "bottle-3d",
            Scenario::Mug2d => "mug-2d",
            Scenario::Mug3d => "mug-3d",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Scenario::Synthetic1d => 1,
            Scenario::Synthetic2d | Scenario::Glass2d | Scenario::Bottle2d | Scenario::Mug2d => 2,
            Scenario::Glass3d | Scenario::Bottle3d | Scenario::Mug3d => 3,
        }
    }

    /// The target function of this scenario.
    pub fn objective(self) -> Box<dyn Objective + Send> {
        let grasp = |object: &str, mode| {
            Box::new(GraspScene::bundled(object, mode).expect("bundled scene")) as Box<_>
        };
        use SearchMode::{Translation as T2, TranslationRotation as T3};
        match self {
            Scenario::Synthetic1d => Box::new(make_synthetic_objective(SyntheticKind::SafeRisky1d)),
            Scenario::Synthetic2d => Box::new(make_synthetic_objective(SyntheticKind::SafeRisky2d)),
            Scenario::Glass2d => grasp("glass", T2),
            Scenario::Glass3d => grasp("glass", T3),
            Scenario::Bottle2d => grasp("bottle", T2),
            Scenario::Bottle3d => grasp("bottle", T3),
            Scenario::Mug2d => grasp("mug", T2),
            Scenario::Mug3d => grasp("mug", T3),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Bo,
    Ubo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bo => "BO",
            Method::Ubo => "UBO",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BO" => Ok(Method::Bo),
            "UBO" => Ok(Method::Ubo),
            _ => Err(Error::Config(format!("unknown method '{s}' (expected BO or UBO)"))),
        }
    }
}

/// Everything needed to reproduce one experiment: a scenario, a method and
/// the optimizer protocol, repeated over `runs` seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub method: Method,
    pub cp: bool,
    pub runs: usize,
    pub mc_samples: usize,
    /// Re-run the robustness evaluation at every iteration instead of only
    /// when the incumbent moves.
    pub mc_every_iteration: bool,
    pub init_points: usize,
    pub budget: usize,
    pub sigma_x: f64,
    pub k_scale: f64,
    pub noise_variance: f64,
    pub hyper_samples: usize,
    pub lambda: f64,
    pub seed: u64,
    pub acquisition_budget: usize,
    pub slice_burn_in: usize,
    pub slice_thinning: usize,
    pub workers: usize,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Default protocol: 20 runs of 20 LHS points plus 140 optimization
    /// steps, 10 Monte-Carlo samples per new incumbent.
    pub fn new(scenario: Scenario, method: Method) -> Self {
        let base = OptimizerConfig::bo(scenario.dimension());
        Self {
            scenario,
            method,
            cp: true,
            runs: 20,
            mc_samples: 10,
            mc_every_iteration: false,
            init_points: base.init_points,
            budget: base.budget,
            sigma_x: base.noise.sigma_x(),
            k_scale: base.noise.k_scale(),
            noise_variance: base.noise_variance,
            hyper_samples: base.hyper_samples,
            lambda: base.lambda,
            seed: 0,
            acquisition_budget: base.acquisition_budget,
            slice_burn_in: base.slice.burn_in,
            slice_thinning: base.slice.thinning,
            workers: 1,
            output_dir: PathBuf::from("results"),
        }
    }

    pub fn dimension(&self) -> usize {
        self.scenario.dimension()
    }

    /// Short name used for output directories and report rows.
    pub fn label(&self) -> String {
        format!(
            "{}-{}-{}",
            self.scenario,
            self.method.name().to_ascii_lowercase(),
            if self.cp { "cp" } else { "nocp" }
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.optimizer_config(0)
            .and_then(|c| c.validate())
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// Optimizer settings for run `run_index` (seeded `seed + 1000·run_index`).
    pub fn optimizer_config(&self, run_index: usize) -> Result<OptimizerConfig> {
        let d = self.dimension();
        let mut c = match self.method {
            Method::Bo => OptimizerConfig::bo(d),
            Method::Ubo => OptimizerConfig::ubo(d),
        };
        c.init_points = self.init_points;
        c.budget = self.budget;
        c.noise = InputNoise::new(self.sigma_x, self.k_scale)?;
        c.noise_variance = self.noise_variance;
        c.hyper_samples = self.hyper_samples;
        c.collision_penalty_enabled = self.cp;
        c.lambda = self.lambda;
        c.seed = run_seed(self.seed, run_index);
        c.acquisition_budget = self.acquisition_budget;
        c.slice.burn_in = self.slice_burn_in;
        c.slice.thinning = self.slice_thinning;
        Ok(c)
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys missing from
    /// the text keep their defaults; `scenario` and `method` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if pairs.iter().any(|(seen, _, _)| *seen == k) {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", lineno + 1)));
            }
            pairs.push((k, v, lineno + 1));
        }
        let find = |key: &str| pairs.iter().find(|(k, _, _)| *k == key).map(|(_, v, _)| *v);
        let scenario: Scenario = find("scenario")
            .ok_or_else(|| Error::Config("missing required key 'scenario'".into()))?
            .parse()?;
        let method: Method = find("method")
            .ok_or_else(|| Error::Config("missing required key 'method'".into()))?
            .parse()?;
        let mut c = Self::new(scenario, method);
        for (key, value, lineno) in pairs {
            let bad = |what: &str| Error::Config(format!("line {lineno}: {key}: {what}"));
            let uint = || value.parse::<usize>().map_err(|_| bad("expected a non-negative integer"));
            let real = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad("expected a finite number"))
            };
            let flag = || match value {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                _ => Err(bad("expected true or false")),
            };
            match key {
                "scenario" | "method" => {}
                "cp" => c.cp = flag()?,
                "runs" => c.runs = uint()?,
                "mc_samples" => c.mc_samples = uint()?,
                "mc_every_iteration" => c.mc_every_iteration = flag()?,
                "dimension" => {
                    if uint()? != scenario.dimension() {
                        return Err(bad(&format!(
                            "scenario {scenario} is {}-dimensional",
                            scenario.dimension()
                        )));
                    }
                }
                "init_points" => c.init_points = uint()?,
                "budget" => c.budget = uint()?,
                "sigma_x" => c.sigma_x = real()?,
                "k_scale" => c.k_scale = real()?,
                "noise_variance" => c.noise_variance = real()?,
                "hyper_samples" => c.hyper_samples = uint()?,
                "lambda" => c.lambda = real()?,
                "seed" => c.seed = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "acquisition_budget" => c.acquisition_budget = uint()?,
                "slice_burn_in" => c.slice_burn_in = uint()?,
                "slice_thinning" => c.slice_thinning = uint()?,
                "workers" => c.workers = uint()?,
                "output_dir" => c.output_dir = PathBuf::from(value),
                _ => return Err(Error::Config(format!("line {lineno}: unknown key '{key}'"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Serializes every field so that `parse(to_config_string())` round-trips.
    pub fn to_config_string(&self) -> String {
        format!(
            "scenario = {}\nmethod = {}\ncp = {}\nruns = {}\nmc_samples = {}\n\
             mc_every_iteration = {}\ninit_points = {}\nbudget = {}\nsigma_x = {:?}\n\
             k_scale = {:?}\nnoise_variance = {:?}\nhyper_samples = {}\nlambda = {:?}\n\
             seed = {}\nacquisition_budget = {}\nslice_burn_in = {}\nslice_thinning = {}\n\
             workers = {}\noutput_dir = {}\n",
            self.scenario,
            self.method,
            self.cp,
            self.runs,
            self.mc_samples,
            self.mc_every_iteration,
            self.init_points,
            self.budget,
            self.sigma_x,
            self.k_scale,
            self.noise_variance,
            self.hyper_samples,
            self.lambda,
            self.seed,
            self.acquisition_budget,
            self.slice_burn_in,
            self.slice_thinning,
            self.workers,
            self.output_dir.display()
        )
    }
}

pub fn run_seed(master: u64, run_index: usize) -> u64 {
    master.wrapping_add(1000u64.wrapping_mul(run_index as u64))
}
