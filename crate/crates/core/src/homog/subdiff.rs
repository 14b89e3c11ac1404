use crate::error::{domain, Result};
use crate::game::PopulationVector;
use crate::lp::{solve, Extremum, Polytope, Relation, Sense};
use crate::scalar::Scalar;
use crate::Rational;

use super::model::{GainsModel, GainsProgram};

/// The superdifferential `∂F(x)`: the optimal face of the dual of the gains
/// program, projected onto the per-capita payoffs `r`.
///
/// Payoffs of types outside `supp x` are bounded below but not above; all
/// singleton and gradient questions are therefore asked on the support.
#[derive(Clone, Debug)]
pub struct Subdifferential<T = Rational> {
    polytope: Polytope<T>,
    support: Vec<usize>,
    value: T,
}

impl<T: Scalar> Subdifferential<T> {
    pub(crate) fn from_program(program: &GainsProgram<T>, x: &PopulationVector<T>, value: T) -> Result<Self> {
        let rows = program.lp.num_constraints();
        let mut polytope = Polytope::with_hidden(program.n, rows - program.n);
        for j in 0..program.num_columns() {
            let coeffs = program.lp.constraints().iter().map(|c| c.coeffs[j].clone()).collect();
            polytope.add(coeffs, Relation::Ge, program.lp.objective()[j].clone())?;
        }
        let rhs = program.lp.constraints().iter().map(|c| c.rhs.clone()).collect();
        polytope.add(rhs, Relation::Eq, value.clone())?;
        Ok(Self {
            polytope,
            support: x.support(),
            value,
        })
    }

    pub fn polytope(&self) -> &Polytope<T> {
        &self.polytope
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `F(x)`.
    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn contains(&self, r: &[T]) -> Result<bool> {
        Ok(self.polytope.contains(r)?)
    }

    /// `min { f · r : r ∈ ∂F(x) }`, or `None` when unbounded below.
    pub fn min_of(&self, functional: &[T]) -> Result<Option<T>> {
        Ok(match self.polytope.optimize(Sense::Minimize, functional)? {
            Extremum::Value(v) => Some(v),
            Extremum::Unbounded => None,
            Extremum::Empty => return Err(domain("subdifferential is empty")),
        })
    }

    /// `max { f · r : r ∈ ∂F(x) }`, or `None` when unbounded above.
    pub fn max_of(&self, functional: &[T]) -> Result<Option<T>> {
        Ok(match self.polytope.optimize(Sense::Maximize, functional)? {
            Extremum::Value(v) => Some(v),
            Extremum::Unbounded => None,
            Extremum::Empty => return Err(domain("subdifferential is empty")),
        })
    }

    fn unit(&self, i: usize) -> Vec<T> {
        let mut e = vec![T::zero(); self.dim()];
        e[i] = T::one();
        e
    }

    /// Range of `r_i`; the upper end is `None` off the support.
    pub fn coordinate_range(&self, i: usize) -> Result<(T, Option<T>)> {
        let e = self.unit(i);
        let lo = self
            .min_of(&e)?
            .ok_or_else(|| domain(format!("payoff of type {} is unbounded below", i + 1)))?;
        Ok((lo, self.max_of(&e)?))
    }

    /// `(min, max)` of a functional that must be bounded on the face.
    pub fn range(&self, functional: &[T]) -> Result<(T, T)> {
        match (self.min_of(functional)?, self.max_of(functional)?) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(domain("functional is unbounded on the subdifferential")),
        }
    }

    /// `true` when `r_i` is pinned down for every type in the support.
    pub fn is_singleton(&self) -> Result<bool> {
        for &i in &self.support {
            let (lo, hi) = self.coordinate_range(i)?;
            if !hi.is_some_and(|h| h.approx_eq(&lo)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Gradient when [`Subdifferential::is_singleton`]; entries off the support
    /// are the one-sided derivatives `min r_i`.
    pub fn gradient(&self) -> Result<Option<Vec<T>>> {
        if !self.is_singleton()? {
            return Ok(None);
        }
        (0..self.dim())
            .map(|i| self.coordinate_range(i).map(|(lo, _)| lo))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn lexicographic_min(&self) -> Result<Vec<T>> {
        self.polytope
            .lexicographic_min()?
            .ok_or_else(|| domain("subdifferential is empty"))
    }
}

/// `∂F(x)`.
pub fn subdifferential_f<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<Subdifferential<T>> {
    let program = model.gains_program(x)?;
    let value = solve(&program.lp)?.optimal()?.objective_value;
    Subdifferential::from_program(&program, x, value)
}

/// The optimal face of the gains program (`∂H`), as a polytope over
/// activity levels.
pub fn assignment_face<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<Polytope<T>> {
    let program = model.gains_program(x)?;
    let value = solve(&program.lp)?.optimal()?.objective_value;
    let cols = program.num_columns();
    let mut face = Polytope::new(cols);
    for c in program.lp.constraints() {
        face.add(c.coeffs.clone(), c.relation, c.rhs.clone())?;
    }
    face.add(program.lp.objective().to_vec(), Relation::Eq, value)?;
    for j in 0..cols {
        let mut e = vec![T::zero(); cols];
        e[j] = T::one();
        face.add(e, Relation::Ge, T::zero())?;
    }
    Ok(face)
}

/// One-sided derivative `F'(x; d) = min { r · d : r ∈ ∂F(x) }`.
///
/// Directions that leave the orthant (`d_i < 0` where `x_i = 0`) are
/// rejected.
pub fn directional_derivative_f<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    d: &[T],
) -> Result<T> {
    if d.len() != x.len() {
        return Err(domain("direction has the wrong length"));
    }
    if (0..d.len()).any(|i| d[i].is_neg() && !x.get(i).is_pos()) {
        return Err(domain("direction leaves the nonnegative orthant"));
    }
    subdifferential_f(model, x)?
        .min_of(d)?
        .ok_or_else(|| domain("directional derivative is unbounded"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CoalitionGame, CommunityGame};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pop(v: &[i64]) -> PopulationVector {
        PopulationVector::new(v.iter().map(|&a| q(a, 1)).collect()).unwrap()
    }

    fn glove() -> CommunityGame {
        let g = CoalitionGame::new(2, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        CommunityGame::from_coalition_game(&g).unwrap()
    }

    #[test]
    fn glove_faces() {
        let d = subdifferential_f(&glove(), &pop(&[1, 1])).unwrap();
        assert_eq!(d.range(&[q(1, 1), q(0, 1)]).unwrap(), (q(0, 1), q(1, 1)));
        assert!(!d.is_singleton().unwrap());
        let d = subdifferential_f(&glove(), &pop(&[2, 1])).unwrap();
        assert_eq!(d.gradient().unwrap(), Some(vec![q(0, 1), q(1, 1)]));
    }

    #[test]
    fn directional_derivatives() {
        let g = glove();
        let e1 = [q(-1, 1), q(0, 1)];
        assert_eq!(directional_derivative_f(&g, &pop(&[1, 1]), &e1).unwrap(), q(-1, 1));
        assert_eq!(directional_derivative_f(&g, &pop(&[2, 1]), &e1).unwrap(), q(0, 1));
        assert_eq!(directional_derivative_f(&g, &pop(&[2, 1]), &[q(2, 1), q(1, 1)]).unwrap(), q(1, 1));
        assert!(directional_derivative_f(&g, &pop(&[1, 0]), &[q(0, 1), q(-1, 1)]).is_err());
        // entering a new type: F(1, t) = t for small t
        assert_eq!(directional_derivative_f(&g, &pop(&[1, 0]), &[q(0, 1), q(1, 1)]).unwrap(), q(1, 1));
    }
}
