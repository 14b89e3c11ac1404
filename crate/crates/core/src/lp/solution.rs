use std::fmt;

use crate::scalar::{dot, Scalar};
use crate::Rational;

use super::program::{LinearProgram, Relation, Sense, VarBound};
use super::simplex::solve_tableau;
use super::LpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

/// Result of [`solve`].
///
/// Dual signs follow the shadow-price convention: `dual[k]` is the rate of
/// change of the optimal value in `rhs_k`. For a maximization that means
/// `y >= 0` on `<=` rows and `y <= 0` on `>=` rows; minimization mirrors it.
/// In both cases `b · y` equals the optimal value.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T = Rational> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    pub objective_value: T,
    /// Basic columns of the tableau that produced the answer.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

impl<T: Scalar> LpSolution<T> {
    pub(crate) fn with_status(status: LpStatus, pivots: usize) -> Self {
        Self {
            status,
            primal: Vec::new(),
            dual: Vec::new(),
            objective_value: T::zero(),
            basis: Vec::new(),
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// The solution, or [`LpError::NotOptimal`].
    pub fn optimal(self) -> Result<Self, LpError> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(LpError::NotOptimal(self.status))
        }
    }
}

/// Solve `lp` exactly.
///
/// Infeasible and unbounded programs are reported through
/// [`LpSolution::status`]. An `Err` means the pivot ceiling was hit or the
/// optimality certificate failed, both of which indicate a solver bug.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    let m = lp.num_constraints();
    let split_cols = lp.num_vars()
        + lp.bounds().iter().filter(|b| **b == VarBound::Free).count();

    let solution = if m > 2 * split_cols + 4 {
        match solve_through_dual(lp)? {
            Some(s) => s,
            None => solve_tableau(lp)?,
        }
    } else {
        solve_tableau(lp)?
    };
    if solution.is_optimal() {
        check_certificate(lp, &solution)?;
    }
    Ok(solution)
}

/// Tall programs are solved through their dual, whose tableau has one row
/// per primal variable. Returns `None` when the dual is infeasible, because
/// the primal may then be either infeasible or unbounded.
fn solve_through_dual<T: Scalar>(lp: &LinearProgram<T>) -> Result<Option<LpSolution<T>>, LpError> {
    let (dual_lp, negated) = lp.dual_program();
    let d = solve_tableau(&dual_lp)?;
    match d.status {
        LpStatus::Unbounded => Ok(Some(LpSolution::with_status(LpStatus::Infeasible, d.pivots))),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Optimal => {
            let primal = d.dual.clone();
            let dual = d
                .primal
                .iter()
                .zip(&negated)
                .map(|(v, neg)| if *neg { -v.clone() } else { v.clone() })
                .collect();
            let objective_value = lp.objective_at(&primal);
            Ok(Some(LpSolution {
                status: LpStatus::Optimal,
                primal,
                dual,
                objective_value,
                basis: d.basis,
                pivots: d.pivots,
            }))
        }
    }
}

fn check_certificate<T: Scalar>(lp: &LinearProgram<T>, s: &LpSolution<T>) -> Result<(), LpError> {
    let fail = |msg: String| Err(LpError::CertificateViolation(msg));
    if s.primal.len() != lp.num_vars() || s.dual.len() != lp.num_constraints() {
        return fail("certificate has the wrong shape".into());
    }
    if !lp.is_feasible(&s.primal) {
        return fail("primal point is infeasible".into());
    }
    let maximize = lp.sense() == Sense::Maximize;
    for (k, (c, y)) in lp.constraints().iter().zip(&s.dual).enumerate() {
        let sign_ok = match (c.relation, maximize) {
            (Relation::Eq, _) => true,
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_neg(),
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_pos(),
        };
        if !sign_ok {
            return fail(format!("dual {k} has the wrong sign"));
        }
        if !y.is_negligible() && !c.violation(&s.primal).is_negligible() {
            return fail(format!("row {k} is slack but priced"));
        }
    }
    for (j, bound) in lp.bounds().iter().enumerate() {
        let column: T = lp
            .constraints()
            .iter()
            .zip(&s.dual)
            .fold(T::zero(), |acc, (c, y)| acc + c.coeffs[j].clone() * y.clone());
        let reduced = lp.objective()[j].clone() - column;
        let ok = match (bound, maximize) {
            (VarBound::Free, _) => reduced.is_negligible(),
            (VarBound::NonNegative, true) => !reduced.is_pos(),
            (VarBound::NonNegative, false) => !reduced.is_neg(),
        };
        if !ok {
            return fail(format!("reduced cost of variable {j} has the wrong sign"));
        }
        if !s.primal[j].is_negligible() && !reduced.is_negligible() {
            return fail(format!("variable {j} is positive with a nonzero reduced cost"));
        }
    }
    let rhs: Vec<T> = lp.constraints().iter().map(|c| c.rhs.clone()).collect();
    if !dot(&rhs, &s.dual).approx_eq(&s.objective_value) {
        return fail("primal and dual objectives differ".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn unit_simplex() {
        let lp = LinearProgram::new(Sense::Maximize, vec![q(1), q(1)])
            .unwrap()
            .with_constraint(vec![q(1), q(1)], Relation::Le, q(1))
            .unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, q(1));
        assert_eq!(s.dual, vec![q(1)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(Sense::Maximize, vec![q(1)])
            .unwrap()
            .with_constraint(vec![q(1)], Relation::Le, q(-1))
            .unwrap();
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);

        let lp = LinearProgram::new(Sense::Maximize, vec![q(1)]).unwrap();
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn minimize_with_free_variable() {
        // min x - y  s.t.  x - y >= -2, x <= 3, y <= 4, y free
        let mut lp = LinearProgram::new(Sense::Minimize, vec![q(1), q(-1)])
            .unwrap()
            .with_constraint(vec![q(1), q(-1)], Relation::Ge, q(-2))
            .unwrap()
            .with_constraint(vec![q(1), q(0)], Relation::Le, q(3))
            .unwrap()
            .with_constraint(vec![q(0), q(1)], Relation::Le, q(4))
            .unwrap();
        lp.set_free(1).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.objective_value, q(-2));
        assert_eq!(s.dual[0], q(1));
    }

    #[test]
    fn tall_program_uses_dual_route() {
        // max x + y over a polygon described by many redundant cuts
        let mut lp = LinearProgram::new(Sense::Maximize, vec![q(1), q(1)]).unwrap();
        for k in 1..=12 {
            lp.add_constraint(vec![q(k), q(1)], Relation::Le, q(k + 1)).unwrap();
        }
        lp.add_constraint(vec![q(1), q(0)], Relation::Ge, q(0)).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.objective_value, q(2));

        let mut infeasible = LinearProgram::new(Sense::Maximize, vec![q(1), q(1)]).unwrap();
        for k in 1..=12 {
            infeasible.add_constraint(vec![q(1), q(k)], Relation::Ge, q(5)).unwrap();
        }
        infeasible.add_constraint(vec![q(1), q(1)], Relation::Le, q(1)).unwrap();
        assert_eq!(solve(&infeasible).unwrap().status, LpStatus::Infeasible);

        let mut unbounded = LinearProgram::new(Sense::Maximize, vec![q(1), q(0)]).unwrap();
        for k in 1..=12 {
            unbounded.add_constraint(vec![q(-1), q(k)], Relation::Le, q(k)).unwrap();
        }
        assert_eq!(solve(&unbounded).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Beale-style cycling example; Bland's rule must finish.
        let c = [q(3) / q(4), q(-150), q(1) / q(50), q(-6)];
        let lp = LinearProgram::new(Sense::Maximize, c.to_vec())
            .unwrap()
            .with_constraint(
                vec![q(1) / q(4), q(-60), q(-1) / q(25), q(9)],
                Relation::Le,
                q(0),
            )
            .unwrap()
            .with_constraint(
                vec![q(1) / q(2), q(-90), q(-1) / q(50), q(3)],
                Relation::Le,
                q(0),
            )
            .unwrap()
            .with_constraint(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1))
            .unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.objective_value, q(1) / q(20));
    }

    #[test]
    fn float_instantiation() {
        let lp = LinearProgram::new(Sense::Maximize, vec![3.0_f64, 2.0])
            .unwrap()
            .with_constraint(vec![1.0, 1.0], Relation::Le, 4.0)
            .unwrap()
            .with_constraint(vec![1.0, 3.0], Relation::Le, 6.0)
            .unwrap();
        let s = solve(&lp).unwrap();
        assert!((s.objective_value - 12.0).abs() < 1e-9);
    }
}
