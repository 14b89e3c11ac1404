//! Probing the optimal face of a program.

use crate::scalar::Scalar;

use super::program::{LinearProgram, Relation, Sense};
use super::{solve, LpError, LpSolution, LpStatus};

/// `lp` with the extra row `objective · x = value`, where `value` is the
/// optimum of `lp`. The returned program keeps the original objective.
pub fn optimal_face_program<T: Scalar>(lp: &LinearProgram<T>) -> Result<LinearProgram<T>, LpError> {
    let value = solve(lp)?.optimal()?.objective_value;
    let mut face = lp.clone();
    face.add_constraint(lp.objective().to_vec(), Relation::Eq, value)?;
    Ok(face)
}

/// Optimize `secondary` over the optimal face of `lp`.
pub fn optimize_over_optimal_face<T: Scalar>(
    lp: &LinearProgram<T>,
    secondary: Vec<T>,
    sense: Sense,
) -> Result<LpSolution<T>, LpError> {
    let face = optimal_face_program(lp)?;
    solve(&face.with_objective(sense, secondary)?)
}

/// Exact `(min, max)` of `functional` over the optimal face of `lp`.
pub fn functional_range_over_optimal_face<T: Scalar>(
    lp: &LinearProgram<T>,
    functional: &[T],
) -> Result<(T, T), LpError> {
    let face = optimal_face_program(lp)?;
    range_over(&face, functional)
}

pub(crate) fn range_over<T: Scalar>(
    feasible: &LinearProgram<T>,
    functional: &[T],
) -> Result<(T, T), LpError> {
    let extreme = |sense| -> Result<T, LpError> {
        let s = solve(&feasible.with_objective(sense, functional.to_vec())?)?;
        match s.status {
            LpStatus::Optimal => Ok(s.objective_value),
            LpStatus::Unbounded => Err(LpError::UnboundedFunctional),
            status => Err(LpError::NotOptimal(status)),
        }
    };
    Ok((extreme(Sense::Minimize)?, extreme(Sense::Maximize)?))
}

/// Lexicographically smallest feasible point of `lp` in the listed
/// coordinates (the objective of `lp` is ignored). Returns `None` for an
/// empty feasible set.
pub fn lexicographic_min_point<T: Scalar>(
    lp: &LinearProgram<T>,
    coords: &[usize],
) -> Result<Option<Vec<T>>, LpError> {
    let n = lp.num_vars();
    let mut current = lp.clone();
    let mut last = None;
    for &c in coords {
        if c >= n {
            return Err(LpError::Malformed(format!("coordinate {c} out of range")));
        }
        let mut e = vec![T::zero(); n];
        e[c] = T::one();
        let s = solve(&current.with_objective(Sense::Minimize, e.clone())?)?;
        match s.status {
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => return Err(LpError::UnboundedFunctional),
            LpStatus::Optimal => {}
        }
        current.add_constraint(e, Relation::Eq, s.objective_value.clone())?;
        last = Some(s.primal);
    }
    match last {
        Some(p) => Ok(Some(p)),
        None => {
            let s = solve(&current.with_objective(Sense::Maximize, vec![T::zero(); n])?)?;
            Ok(s.is_optimal().then_some(s.primal))
        }
    }
}

/// Lexicographically smallest optimal solution of `lp` over all coordinates.
pub fn lexicographic_optimum<T: Scalar>(lp: &LinearProgram<T>) -> Result<Vec<T>, LpError> {
    let face = optimal_face_program(lp)?;
    let coords: Vec<usize> = (0..lp.num_vars()).collect();
    lexicographic_min_point(&face, &coords)?.ok_or(LpError::NotOptimal(LpStatus::Infeasible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn simplex_face() -> LinearProgram {
        LinearProgram::new(Sense::Maximize, vec![q(1), q(1)])
            .unwrap()
            .with_constraint(vec![q(1), q(1)], Relation::Le, q(1))
            .unwrap()
    }

    #[test]
    fn secondary_objective_on_face() {
        let lp = simplex_face();
        let hi = optimize_over_optimal_face(&lp, vec![q(1), q(0)], Sense::Maximize).unwrap();
        let lo = optimize_over_optimal_face(&lp, vec![q(1), q(0)], Sense::Minimize).unwrap();
        assert_eq!(hi.objective_value, q(1));
        assert_eq!(lo.objective_value, q(0));
        assert_eq!(
            functional_range_over_optimal_face(&lp, &[q(1), q(0)]).unwrap(),
            (q(0), q(1))
        );
    }

    #[test]
    fn singleton_face() {
        let lp = LinearProgram::new(Sense::Maximize, vec![q(2), q(1)])
            .unwrap()
            .with_constraint(vec![q(1), q(1)], Relation::Le, q(1))
            .unwrap();
        let (lo, hi) = functional_range_over_optimal_face(&lp, &[q(1), q(0)]).unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn lexicographic_choice() {
        let lp = simplex_face();
        assert_eq!(lexicographic_optimum(&lp).unwrap(), vec![q(0), q(1)]);
        let empty = simplex_face()
            .with_constraint(vec![q(1), q(0)], Relation::Ge, q(2))
            .unwrap();
        assert_eq!(lexicographic_min_point(&empty, &[0, 1]).unwrap(), None);
    }
}
