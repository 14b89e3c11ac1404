//! Input data model: normal-form, coalition and community games, plus
//! population vectors.

mod coalition;
mod community;
mod diagnostics;
mod normal_form;
mod population;

pub use coalition::{Coalition, CoalitionGame, MAX_TYPES};
pub use community::{Community, CommunityGame, Profile};
pub use diagnostics::Diagnostic;
pub use normal_form::{profile_from_index, profile_index, NormalFormGame};
pub use population::PopulationVector;

/// Payoff vector (imputation, supergradient, ...).
pub type PayoffVector<T = crate::Rational> = Vec<T>;
