//! Shapley values, cores, equal-treatment cores and their comparisons with
//! the superdifferential of the gains function.

mod core;
mod shapley;

pub use self::core::{
    core, core_equivalence, equal_treatment_core, is_balanced, is_totally_balanced, nesting_check,
    shapley_gradient_comparison, restricted_game, CorePolytope, Nesting, ShapleyGradientComparison,
    EQUAL_TREATMENT_LIMIT,
};
pub use shapley::{
    shapley_euler_identities, shapley_subgame, shapley_value, ShapleyEulerReport, ShapleyResult,
    SubgameIdentity,
};
