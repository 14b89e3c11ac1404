//! Exact linear programming.
//!
//! [`solve`] is a two-phase primal simplex using Bland's rule, so it terminates
//! on every input. Dual values are read from the final basis inverse and every
//! optimal answer is checked against its own duality certificate before it is
//! returned. [`face`] and [`polytope`] build optimal-face probing and
//! H-polytope comparisons on top of it.

pub mod face;
pub mod polytope;
mod program;
mod simplex;
mod solution;

use thiserror::Error;

pub use face::{
    optimal_face_program,
    functional_range_over_optimal_face, lexicographic_min_point, lexicographic_optimum,
    optimize_over_optimal_face,
};
pub use polytope::{Extremum, Polytope};
pub use program::{Constraint, LinearProgram, Relation, Sense, VarBound};
pub use solution::{solve, LpSolution, LpStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(usize),
    #[error("optimality certificate failed: {0}")]
    CertificateViolation(String),
    #[error("expected an optimal program, solver reported {0}")]
    NotOptimal(LpStatus),
    #[error("functional is unbounded over the feasible set")]
    UnboundedFunctional,
}
