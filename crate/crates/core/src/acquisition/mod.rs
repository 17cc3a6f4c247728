//! Expected improvement, incumbents, acquisition maximization and the
//! initial Latin-hypercube design.

mod direct;
mod ei;
mod lhs;

pub use direct::{maximize_acquisition, Maximum};
pub use ei::{
    best_observed_incumbent, expected_improvement, expected_improvement_component, Incumbent,
    IncumbentKind,
};
pub(crate) use ei::{argmax_first, expected_improvement_with};
pub use lhs::latin_hypercube;
