//! Gaussian-process surrogate: Matérn-5/2 kernel, sampled hyperparameters,
//! and mixture-of-Gaussians predictions.

mod data;
mod kernel;
mod model;
mod slice;

pub use data::ObservationSet;
pub use kernel::{matern52, KernelHyperparams};
pub use model::{
    log_hyperprior, log_marginal_likelihood, GpModel, Prediction, JITTER_MAX, JITTER_START,
    PRIOR_LOG_LENGTHSCALE_MEAN, PRIOR_LOG_LENGTHSCALE_SD, PRIOR_LOG_SIGNAL_MEAN,
    PRIOR_LOG_SIGNAL_SD,
};
pub use slice::{sample_hyperparams, HyperparameterSampler, SliceSettings};
