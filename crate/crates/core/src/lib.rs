//! Bayesian optimization of grasp poses that favours regions robust to
//! input noise: GP surrogate with sampled hyperparameters, expected and
//! unscented expected improvement, a planar grasp simulator with a collision
//! penalty, and an experiment harness.

pub mod acquisition;
pub mod error;
pub mod experiment;
pub mod gp;
pub mod grasp;
pub mod linalg;
pub mod normal;
pub mod optimizer;
pub mod unscented;

pub use acquisition::{Incumbent, IncumbentKind};
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, Method, Scenario};
pub use gp::{GpModel, KernelHyperparams, ObservationSet, Prediction};
pub use grasp::{GraspOutcome, GraspScene, SearchMode};
pub use optimizer::{Objective, OptimizerConfig, RunRecord};
pub use unscented::InputNoise;
