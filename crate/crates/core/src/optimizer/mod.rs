//! The BO / UBO outer loop and the collision-penalized objective.

mod objective;
mod run;

pub use objective::{
    make_synthetic_objective, Evaluation, FnObjective, Objective, Peak, SyntheticKind,
    SyntheticObjective,
};
pub use run::{
    collision_penalty, penalized_objective, run_optimization, AcquisitionKind, IterationRecord,
    OptimizerConfig, PenalizedOutcome, RunRecord, DEFAULT_ACQUISITION_BUDGET_PER_DIM,
    DEFAULT_SLICE_THINNING,
};
