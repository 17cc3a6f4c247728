use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::objective::Objective;
use crate::acquisition::{
    best_observed_incumbent, expected_improvement_with, latin_hypercube, maximize_acquisition,
    Incumbent, IncumbentKind,
};
use crate::error::{Error, Result};
use crate::gp::{GpModel, HyperparameterSampler, ObservationSet, SliceSettings};
use crate::unscented::{unscented_expected_improvement_with, unscented_incumbent, InputNoise};

/// Acquisition-maximizer evaluations per input dimension.
pub const DEFAULT_ACQUISITION_BUDGET_PER_DIM: usize = 250;
/// Slice sweeps between retained hyperparameter samples in the optimizer.
pub const DEFAULT_SLICE_THINNING: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AcquisitionKind {
    ExpectedImprovement,
    UnscentedExpectedImprovement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub dimension: usize,
    /// Latin-hypercube points evaluated before the model takes over.
    pub init_points: usize,
    /// Total evaluations, including the initial design.
    pub budget: usize,
    pub noise: InputNoise,
    pub noise_variance: f64,
    /// Hyperparameter samples `m` kept per refit.
    pub hyper_samples: usize,
    pub acquisition: AcquisitionKind,
    pub incumbent: IncumbentKind,
    pub collision_penalty_enabled: bool,
    pub lambda: f64,
    pub seed: u64,
    /// Evaluation budget of the acquisition maximizer per step.
    pub acquisition_budget: usize,
    pub slice: SliceSettings,
}

impl OptimizerConfig {
    /// Plain Bayesian optimization: EI with the best-observed incumbent.
    pub fn bo(dimension: usize) -> Self {
        Self {
            dimension,
            init_points: 20,
            budget: 160,
            noise: InputNoise::default(),
            noise_variance: 1e-8,
            hyper_samples: 10,
            acquisition: AcquisitionKind::ExpectedImprovement,
            incumbent: IncumbentKind::BestObserved,
            collision_penalty_enabled: true,
            lambda: 0.1,
            seed: 0,
            acquisition_budget: DEFAULT_ACQUISITION_BUDGET_PER_DIM * dimension,
            slice: SliceSettings {
                thinning: DEFAULT_SLICE_THINNING,
                ..SliceSettings::default()
            },
        }
    }

    /// Unscented Bayesian optimization: UEI with the unscented incumbent.
    pub fn ubo(dimension: usize) -> Self {
        Self {
            acquisition: AcquisitionKind::UnscentedExpectedImprovement,
            incumbent: IncumbentKind::Unscented,
            ..Self::bo(dimension)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::invalid(m.to_string()));
        if self.dimension == 0 {
            return fail("dimension must be at least 1");
        }
        if self.init_points == 0 || self.budget < self.init_points {
            return fail("need budget >= init_points >= 1");
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return fail("lambda must be positive");
        }
        if !(self.noise_variance >= 0.0) || !self.noise_variance.is_finite() {
            return fail("noise variance must be finite and non-negative");
        }
        if self.hyper_samples == 0 {
            return fail("at least one hyperparameter sample is required");
        }
        let coupled = matches!(
            (self.acquisition, self.incumbent),
            (AcquisitionKind::ExpectedImprovement, IncumbentKind::BestObserved)
                | (AcquisitionKind::UnscentedExpectedImprovement, IncumbentKind::Unscented)
        );
        if !coupled {
            return fail("UEI must be paired with the unscented incumbent and EI with the best observed one");
        }
        if self.dimension < usize::BITS as usize
            && self.acquisition_budget < (1usize << self.dimension) + 1
        {
            return fail("acquisition budget must be at least 2^d + 1");
        }
        Ok(())
    }
}

/// `CP(n_j) = 1 − exp(−λ n_j)`.
pub fn collision_penalty(n_j: i64, lambda: f64) -> Result<f64> {
    if n_j < 0 {
        return Err(Error::invalid("joint count must be non-negative"));
    }
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda must be positive"));
    }
    Ok(-(-lambda * n_j as f64).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenalizedOutcome {
    /// Raw quality; 0 whenever the hand collides.
    pub f: f64,
    /// Value the surrogate is trained on.
    pub f_prime: f64,
    pub n_j: usize,
}

pub fn penalized_objective<O: Objective + ?Sized>(
    objective: &O,
    u: &[f64],
    config: &OptimizerConfig,
) -> Result<PenalizedOutcome> {
    let e = objective.evaluate(u)?;
    if e.colliding_joints == 0 {
        return Ok(PenalizedOutcome {
            f: e.quality,
            f_prime: e.quality,
            n_j: 0,
        });
    }
    let f_prime = if config.collision_penalty_enabled {
        -collision_penalty(e.colliding_joints as i64, config.lambda)?
    } else {
        0.0
    };
    Ok(PenalizedOutcome {
        f: 0.0,
        f_prime,
        n_j: e.colliding_joints,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based evaluation counter.
    pub iteration: usize,
    pub x: Vec<f64>,
    pub f: f64,
    pub f_prime: f64,
    pub n_j: usize,
    /// Dataset row (0-based) of the incumbent after this evaluation.
    pub incumbent_index: usize,
    pub incumbent_x: Vec<f64>,
    pub incumbent_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: OptimizerConfig,
    pub seed: u64,
    pub entries: Vec<IterationRecord>,
}

impl RunRecord {
    pub fn final_entry(&self) -> &IterationRecord {
        self.entries.last().expect("runs evaluate at least one point")
    }

    pub fn colliding_queries(&self) -> usize {
        self.entries.iter().filter(|e| e.n_j > 0).count()
    }
}

struct Loop<'a, O: ?Sized> {
    objective: &'a O,
    config: &'a OptimizerConfig,
    sampler: HyperparameterSampler,
    rng: ChaCha8Rng,
    data: ObservationSet,
}

impl<O: Objective + ?Sized> Loop<'_, O> {
    fn fit(&mut self) -> Result<GpModel> {
        let thetas = self.sampler.draw(
            &self.data,
            self.config.noise_variance,
            self.config.hyper_samples,
            &mut self.rng,
        )?;
        GpModel::fit(self.data.clone(), &thetas, self.config.noise_variance)
    }

    fn propose(&self, model: &GpModel) -> Result<Vec<f64>> {
        let y_best = self
            .data
            .ys()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut scratch = Vec::with_capacity(self.data.len());
        let cfg = self.config;
        let best = match cfg.acquisition {
            AcquisitionKind::ExpectedImprovement => maximize_acquisition(
                |x| expected_improvement_with(model, x, y_best, &mut scratch),
                cfg.dimension,
                cfg.acquisition_budget,
            )?,
            AcquisitionKind::UnscentedExpectedImprovement => maximize_acquisition(
                |x| unscented_expected_improvement_with(model, x, y_best, &cfg.noise, &mut scratch),
                cfg.dimension,
                cfg.acquisition_budget,
            )?,
        };
        Ok(best.x)
    }
}

/// Runs one seeded optimization of `objective` and records every step.
pub fn run_optimization<O: Objective + ?Sized>(
    objective: &O,
    config: &OptimizerConfig,
) -> Result<RunRecord> {
    config.validate()?;
    if objective.dimension() != config.dimension {
        return Err(Error::invalid(format!(
            "objective is {}-dimensional but the optimizer is configured for {}",
            objective.dimension(),
            config.dimension
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let design = latin_hypercube(config.init_points, config.dimension, &mut rng)?;
    let mut state = Loop {
        objective,
        config,
        sampler: HyperparameterSampler::new(config.slice),
        rng,
        data: ObservationSet::new(config.dimension)?,
    };
    let mut entries = Vec::with_capacity(config.budget);
    let mut model: Option<GpModel> = None;

    for iteration in 1..=config.budget {
        let surrogate = |e: Error| match e {
            Error::NotPositiveDefinite { .. } => Error::Surrogate {
                iteration,
                source: Box::new(e),
            },
            other => other,
        };
        let x = if iteration <= config.init_points {
            design[iteration - 1].clone()
        } else {
            let m = model.as_ref().expect("model fitted after the initial design");
            state.propose(m).map_err(surrogate)?
        };
        let out = penalized_objective(state.objective, &x, config)?;
        state.data.push(&x, out.f_prime)?;

        let needs_model = iteration >= config.init_points && iteration < config.budget;
        let incumbent: Incumbent = match config.incumbent {
            IncumbentKind::BestObserved => {
                if needs_model {
                    model = Some(state.fit().map_err(surrogate)?);
                }
                best_observed_incumbent(&state.data)?
            }
            IncumbentKind::Unscented => {
                let m = state.fit().map_err(surrogate)?;
                let inc = unscented_incumbent(&m, &state.data, &config.noise)?;
                model = Some(m);
                inc
            }
        };
        entries.push(IterationRecord {
            iteration,
            x,
            f: out.f,
            f_prime: out.f_prime,
            n_j: out.n_j,
            incumbent_index: incumbent.index,
            incumbent_x: incumbent.x_opt,
            incumbent_value: incumbent.y_opt,
        });
    }
    Ok(RunRecord {
        config: config.clone(),
        seed: config.seed,
        entries,
    })
}
