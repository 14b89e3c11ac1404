use std::fmt;

use crate::scalar::Scalar;
use crate::Rational;

use super::LpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    pub fn flipped(self) -> Self {
        match self {
            Sense::Maximize => Sense::Minimize,
            Sense::Minimize => Sense::Maximize,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub(crate) fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Lower bound of a decision variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T = Rational> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    /// Signed violation: positive when `point` breaks the constraint.
    pub fn violation(&self, point: &[T]) -> T {
        let lhs = crate::scalar::dot(&self.coeffs, point);
        match self.relation {
            Relation::Le => lhs - self.rhs.clone(),
            Relation::Ge => self.rhs.clone() - lhs,
            Relation::Eq => (lhs - self.rhs.clone()).abs(),
        }
    }

    pub fn is_satisfied_by(&self, point: &[T]) -> bool {
        !self.violation(point).is_pos()
    }
}

/// A dense linear program
///
/// ```text
///   max | min   objective · x
///   s.t.        row_k · x  (<= | = | >=)  rhs_k
///               x_j >= 0  or  x_j free
/// ```
///
/// Widths are checked when rows are added, so every value of this type is
/// well formed.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T = Rational> {
    sense: Sense,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    bounds: Vec<VarBound>,
}

impl<T: Scalar> LinearProgram<T> {
    /// New program over `objective.len()` nonnegative variables.
    pub fn new(sense: Sense, objective: Vec<T>) -> Result<Self, LpError> {
        if objective.is_empty() {
            return Err(LpError::Malformed("a program needs at least one variable".into()));
        }
        let bounds = vec![VarBound::NonNegative; objective.len()];
        Ok(Self {
            sense,
            objective,
            constraints: Vec::new(),
            bounds,
        })
    }

    /// Feasibility program: zero objective over `vars` variables.
    pub fn feasibility(vars: usize) -> Result<Self, LpError> {
        Self::new(Sense::Maximize, vec![T::zero(); vars])
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<T>,
        relation: Relation,
        rhs: T,
    ) -> Result<usize, LpError> {
        if coeffs.len() != self.objective.len() {
            return Err(LpError::Malformed(format!(
                "constraint {} has width {}, expected {}",
                self.constraints.len(),
                coeffs.len(),
                self.objective.len()
            )));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    pub fn with_constraint(mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Result<Self, LpError> {
        self.add_constraint(coeffs, relation, rhs)?;
        Ok(self)
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) -> Result<(), LpError> {
        let slot = self
            .bounds
            .get_mut(var)
            .ok_or_else(|| LpError::Malformed(format!("variable {var} out of range")))?;
        *slot = bound;
        Ok(())
    }

    pub fn set_free(&mut self, var: usize) -> Result<(), LpError> {
        self.set_bound(var, VarBound::Free)
    }

    /// Replace the objective, keeping the feasible set.
    pub fn with_objective(&self, sense: Sense, objective: Vec<T>) -> Result<Self, LpError> {
        if objective.len() != self.objective.len() {
            return Err(LpError::Malformed(format!(
                "objective has width {}, expected {}",
                objective.len(),
                self.objective.len()
            )));
        }
        Ok(Self {
            sense,
            objective,
            constraints: self.constraints.clone(),
            bounds: self.bounds.clone(),
        })
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_at(&self, point: &[T]) -> T {
        crate::scalar::dot(&self.objective, point)
    }

    /// `true` when `point` satisfies every row and bound.
    pub fn is_feasible(&self, point: &[T]) -> bool {
        point.len() == self.num_vars()
            && self
                .bounds
                .iter()
                .zip(point)
                .all(|(b, v)| *b == VarBound::Free || !v.is_neg())
            && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    /// Dual program used by the solver's row-heavy route.
    ///
    /// For `max c·x, A x (rel) b` the dual is `min b·y` with `y_k >= 0` on
    /// `<=` rows, `y_k <= 0` on `>=` rows, `y_k` free on `=` rows, and
    /// `A^T y >= c` on nonnegative columns (`= c` on free columns); the `min`
    /// case mirrors it. Nonpositive multipliers are stored negated, so the
    /// returned flags say which dual columns hold `-y_k`.
    pub(crate) fn dual_program(&self) -> (Self, Vec<bool>) {
        let m = self.constraints.len();
        let mut negated = vec![false; m];
        let mut bounds = vec![VarBound::Free; m];
        for (k, c) in self.constraints.iter().enumerate() {
            match (self.sense, c.relation) {
                (_, Relation::Eq) => {}
                (Sense::Maximize, Relation::Le) | (Sense::Minimize, Relation::Ge) => {
                    bounds[k] = VarBound::NonNegative;
                }
                _ => {
                    bounds[k] = VarBound::NonNegative;
                    negated[k] = true;
                }
            }
        }
        let sign = |k: usize, v: &T| if negated[k] { -v.clone() } else { v.clone() };
        let objective = self
            .constraints
            .iter()
            .enumerate()
            .map(|(k, c)| sign(k, &c.rhs))
            .collect();
        let constraints = self
            .bounds
            .iter()
            .enumerate()
            .map(|(j, bound)| Constraint {
                coeffs: self
                    .constraints
                    .iter()
                    .enumerate()
                    .map(|(k, c)| sign(k, &c.coeffs[j]))
                    .collect(),
                relation: match (bound, self.sense) {
                    (VarBound::Free, _) => Relation::Eq,
                    (VarBound::NonNegative, Sense::Maximize) => Relation::Ge,
                    (VarBound::NonNegative, Sense::Minimize) => Relation::Le,
                },
                rhs: self.objective[j].clone(),
            })
            .collect();
        (
            Self {
                sense: self.sense.flipped(),
                objective,
                constraints,
                bounds,
            },
            negated,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rejects_ragged_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![q(1), q(1)]).unwrap();
        assert!(lp.add_constraint(vec![q(1)], Relation::Le, q(1)).is_err());
        assert!(LinearProgram::<Rational>::new(Sense::Maximize, vec![]).is_err());
        assert!(lp.set_free(5).is_err());
    }

    #[test]
    fn feasibility_check() {
        let lp = LinearProgram::new(Sense::Maximize, vec![q(1), q(1)])
            .unwrap()
            .with_constraint(vec![q(1), q(1)], Relation::Le, q(1))
            .unwrap();
        assert!(lp.is_feasible(&[q(0), q(1)]));
        assert!(!lp.is_feasible(&[q(1), q(1)]));
        assert!(!lp.is_feasible(&[q(-1), q(0)]));
    }
}
