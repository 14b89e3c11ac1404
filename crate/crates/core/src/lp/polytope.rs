use rayon::prelude::*;

use crate::scalar::Scalar;
use crate::Rational;

use super::face::lexicographic_min_point;
use super::program::{Constraint, LinearProgram, Relation, Sense};
use super::{solve, LpError, LpStatus};

/// Outcome of optimizing a linear functional over a polytope.
#[derive(Clone, Debug, PartialEq)]
pub enum Extremum<T = Rational> {
    Empty,
    Unbounded,
    Value(T),
}

/// A polyhedron in H-representation, possibly projected.
///
/// Rows range over `dim + hidden` free coordinates; the set described is the
/// projection onto the first `dim`. Probes and membership handle the hidden
/// part exactly. Inclusion *into* a projected polytope is not an LP question
/// and is rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<T = Rational> {
    dim: usize,
    hidden: usize,
    rows: Vec<Constraint<T>>,
}

impl<T: Scalar> Polytope<T> {
    pub fn new(dim: usize) -> Self {
        Self::with_hidden(dim, 0)
    }

    pub fn with_hidden(dim: usize, hidden: usize) -> Self {
        Self {
            dim,
            hidden,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn width(&self) -> usize {
        self.dim + self.hidden
    }

    fn pad(&self, functional: &[T]) -> Vec<T> {
        let mut v = functional.to_vec();
        v.resize(self.width(), T::zero());
        v
    }

    pub fn rows(&self) -> &[Constraint<T>] {
        &self.rows
    }

    pub fn add(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Result<(), LpError> {
        if coeffs.len() != self.width() {
            return Err(LpError::Malformed(format!(
                "row has width {}, expected {}",
                coeffs.len(),
                self.width()
            )));
        }
        self.rows.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    fn program(&self, sense: Sense, objective: Vec<T>) -> Result<LinearProgram<T>, LpError> {
        let mut lp = LinearProgram::new(sense, objective)?;
        for j in 0..self.width() {
            lp.set_free(j)?;
        }
        for row in &self.rows {
            lp.add_constraint(row.coeffs.clone(), row.relation, row.rhs.clone())?;
        }
        Ok(lp)
    }

    pub fn contains(&self, point: &[T]) -> Result<bool, LpError> {
        if point.len() != self.dim {
            return Ok(false);
        }
        if self.hidden == 0 {
            return Ok(self.rows.iter().all(|r| r.is_satisfied_by(point)));
        }
        let mut fixed = self.clone();
        for (j, v) in point.iter().enumerate() {
            fixed.add(unit(self.width(), j), Relation::Eq, v.clone())?;
        }
        Ok(!fixed.is_empty()?)
    }

    pub fn is_empty(&self) -> Result<bool, LpError> {
        if self.width() == 0 {
            return Ok(!self.rows.iter().all(|r| r.is_satisfied_by(&[])));
        }
        let s = solve(&self.program(Sense::Maximize, vec![T::zero(); self.width()])?)?;
        Ok(s.status == LpStatus::Infeasible)
    }

    pub fn optimize(&self, sense: Sense, functional: &[T]) -> Result<Extremum<T>, LpError> {
        if functional.len() != self.dim {
            return Err(LpError::Malformed("functional has the wrong width".into()));
        }
        if self.width() == 0 {
            return Ok(if self.is_empty()? { Extremum::Empty } else { Extremum::Value(T::zero()) });
        }
        let s = solve(&self.program(sense, self.pad(functional))?)?;
        Ok(match s.status {
            LpStatus::Optimal => Extremum::Value(s.objective_value),
            LpStatus::Infeasible => Extremum::Empty,
            LpStatus::Unbounded => Extremum::Unbounded,
        })
    }

    /// `(min, max)` of `functional`; `None` when the polytope is empty.
    pub fn range(&self, functional: &[T]) -> Result<Option<(T, T)>, LpError> {
        let lo = self.optimize(Sense::Minimize, functional)?;
        let hi = self.optimize(Sense::Maximize, functional)?;
        match (lo, hi) {
            (Extremum::Value(a), Extremum::Value(b)) => Ok(Some((a, b))),
            (Extremum::Empty, _) | (_, Extremum::Empty) => Ok(None),
            _ => Err(LpError::UnboundedFunctional),
        }
    }

    /// Per-coordinate ranges.
    pub fn coordinate_ranges(&self) -> Result<Option<Vec<(T, T)>>, LpError> {
        let mut out = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            match self.range(&unit(self.dim, j))? {
                Some(r) => out.push(r),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// The unique point when the polytope is a single point.
    pub fn singleton(&self) -> Result<Option<Vec<T>>, LpError> {
        let Some(ranges) = self.coordinate_ranges()? else {
            return Ok(None);
        };
        if ranges.iter().all(|(lo, hi)| lo == hi) {
            Ok(Some(ranges.into_iter().map(|(lo, _)| lo).collect()))
        } else {
            Ok(None)
        }
    }

    pub fn lexicographic_min(&self) -> Result<Option<Vec<T>>, LpError> {
        if self.dim == 0 {
            return Ok((!self.is_empty()?).then(Vec::new));
        }
        let lp = self.program(Sense::Maximize, vec![T::zero(); self.width()])?;
        let coords: Vec<usize> = (0..self.dim).collect();
        Ok(lexicographic_min_point(&lp, &coords)?.map(|mut p| {
            p.truncate(self.dim);
            p
        }))
    }

    /// First row of `other` that some point of `self` violates, or `None`
    /// when `self ⊆ other`.
    pub fn inclusion_witness(&self, other: &Self) -> Result<Option<usize>, LpError> {
        if self.dim != other.dim {
            return Err(LpError::Malformed("polytopes of different dimension".into()));
        }
        if other.hidden > 0 {
            return Err(LpError::Malformed(
                "inclusion into a projected polytope is not supported".into(),
            ));
        }
        if self.is_empty()? {
            return Ok(None);
        }
        let verdicts: Vec<Result<bool, LpError>> = other
            .rows
            .par_iter()
            .map(|row| self.implies(row))
            .collect();
        for (k, v) in verdicts.into_iter().enumerate() {
            if !v? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// `true` when every point of the (nonempty) polytope satisfies `row`.
    fn implies(&self, row: &Constraint<T>) -> Result<bool, LpError> {
        let below = || -> Result<bool, LpError> {
            Ok(match self.optimize(Sense::Maximize, &row.coeffs)? {
                Extremum::Value(v) => v <= row.rhs || v.approx_eq(&row.rhs),
                Extremum::Unbounded => false,
                Extremum::Empty => true,
            })
        };
        let above = || -> Result<bool, LpError> {
            Ok(match self.optimize(Sense::Minimize, &row.coeffs)? {
                Extremum::Value(v) => v >= row.rhs || v.approx_eq(&row.rhs),
                Extremum::Unbounded => false,
                Extremum::Empty => true,
            })
        };
        match row.relation {
            Relation::Le => below(),
            Relation::Ge => above(),
            Relation::Eq => Ok(below()? && above()?),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool, LpError> {
        Ok(self.inclusion_witness(other)?.is_none())
    }

    /// Set equality by mutual inclusion.
    pub fn same_set(&self, other: &Self) -> Result<bool, LpError> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}

pub(crate) fn unit<T: Scalar>(dim: usize, j: usize) -> Vec<T> {
    let mut e = vec![T::zero(); dim];
    e[j] = T::one();
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn segment() -> Polytope {
        let mut p = Polytope::new(2);
        p.add(vec![q(1), q(1)], Relation::Eq, q(1)).unwrap();
        p.add(vec![q(1), q(0)], Relation::Ge, q(0)).unwrap();
        p.add(vec![q(0), q(1)], Relation::Ge, q(0)).unwrap();
        p
    }

    #[test]
    fn probes() {
        let p = segment();
        assert!(!p.is_empty().unwrap());
        assert_eq!(p.range(&[q(1), q(0)]).unwrap(), Some((q(0), q(1))));
        assert_eq!(p.lexicographic_min().unwrap(), Some(vec![q(0), q(1)]));
        assert_eq!(p.singleton().unwrap(), None);
        assert!(p.contains(&[q(1), q(0)]).unwrap());
    }

    #[test]
    fn inclusion() {
        let p = segment();
        let mut point = segment();
        point.add(vec![q(1), q(0)], Relation::Eq, q(0)).unwrap();
        assert!(point.is_subset_of(&p).unwrap());
        assert!(!p.is_subset_of(&point).unwrap());
        assert_eq!(p.inclusion_witness(&point).unwrap(), Some(3));
        assert!(p.same_set(&segment()).unwrap());
        assert_eq!(point.singleton().unwrap(), Some(vec![q(0), q(1)]));
    }

    #[test]
    fn unbounded_side() {
        let mut half = Polytope::new(1);
        half.add(vec![q(1)], Relation::Ge, q(0)).unwrap();
        assert!(half.range(&[q(1)]).is_err());
        assert!(!half.is_subset_of(&segment_1d()).unwrap());
    }

    #[test]
    fn projection() {
        // { r : exists p with r = p, 0 <= p <= 2 }
        let mut p = Polytope::with_hidden(1, 1);
        p.add(vec![q(1), q(-1)], Relation::Eq, q(0)).unwrap();
        p.add(vec![q(0), q(1)], Relation::Ge, q(0)).unwrap();
        p.add(vec![q(0), q(1)], Relation::Le, q(2)).unwrap();
        assert_eq!(p.range(&[q(1)]).unwrap(), Some((q(0), q(2))));
        assert!(p.contains(&[q(1)]).unwrap());
        assert!(!p.contains(&[q(3)]).unwrap());
        assert_eq!(p.lexicographic_min().unwrap(), Some(vec![q(0)]));
        assert!(!p.is_subset_of(&segment_1d()).unwrap());
        assert!(segment_1d().is_subset_of(&p).is_err());
    }

    fn segment_1d() -> Polytope {
        let mut p = Polytope::new(1);
        p.add(vec![q(1)], Relation::Le, q(1)).unwrap();
        p
    }
}
