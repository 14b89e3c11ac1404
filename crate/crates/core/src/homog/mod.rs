//! Positively homogeneous gains `F(x)` and the saddle machinery around it.
//!
//! `F(x)` is the value of the gains LP at population `x`. Its dual optimal
//! face is the superdifferential `∂F(x)` and its primal optimal face is the
//! set of optimal assignments, so the saddle identities reduce to LP duality.

mod euler;
mod model;
mod saddle;
mod subdiff;

pub use euler::{
    discrete_difference, discrete_euler_gap, discrete_marginals, euler_report, first_valid_scale,
    infinitesimal_euler_gap, is_differentiable, one_sided_euler_test, stabilization_index,
    Differentiability, EulerReport, STABILIZATION_LIMIT,
};
pub use model::{f_value, GainsModel, GainsProgram};
pub(crate) use model::f_at;
pub use saddle::{
    h_value, saddle_equality_check, saddle_point, saddle_point_with, SaddlePoint, SaddleSelection,
};
pub(crate) use saddle::select;
pub use subdiff::{assignment_face, directional_derivative_f, subdifferential_f, Subdifferential};
