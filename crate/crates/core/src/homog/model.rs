use crate::error::{domain, Result};
use crate::game::{CommunityGame, PopulationVector};
use crate::lp::{solve, LinearProgram, Relation, Sense};
use crate::scalar::Scalar;
use crate::Rational;

/// The gains program of a model at a population `x`.
///
/// `lp` is a maximization over nonnegative activity levels whose first `n`
/// rows are the population equalities (`rhs = x_i`); any further rows are
/// homogeneous equalities (market clearing). Its value is `F(x)`, the duals
/// of the population rows are per-capita payoffs.
#[derive(Clone, Debug)]
pub struct GainsProgram<T = Rational> {
    pub n: usize,
    pub lp: LinearProgram<T>,
    /// `direct[i] · y` is the total direct utility accruing to type `i`.
    pub direct: Vec<Vec<T>>,
    /// Human-readable name of every column.
    pub labels: Vec<String>,
}

impl<T: Scalar> GainsProgram<T> {
    pub fn num_columns(&self) -> usize {
        self.lp.num_vars()
    }

    pub fn extra_rows(&self) -> usize {
        self.lp.num_constraints() - self.n
    }
}

/// A positively homogeneous gains function given by an LP.
pub trait GainsModel<T: Scalar>: Sync {
    fn num_types(&self) -> usize;

    fn gains_program(&self, x: &PopulationVector<T>) -> Result<GainsProgram<T>>;
}

pub(crate) fn check_population<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<()> {
    if x.len() != model.num_types() {
        return Err(domain(format!(
            "population has {} entries, the model has {} types",
            x.len(),
            model.num_types()
        )));
    }
    Ok(())
}

impl<T: Scalar> GainsModel<T> for CommunityGame<T> {
    fn num_types(&self) -> usize {
        self.n()
    }

    fn gains_program(&self, x: &PopulationVector<T>) -> Result<GainsProgram<T>> {
        check_population(self, x)?;
        let n = self.n();
        let activities: Vec<(usize, usize)> = self.activities().collect();
        let coms = self.communities();
        let objective = activities
            .iter()
            .map(|&(c, p)| coms[c].profiles[p].total())
            .collect();
        let mut lp = LinearProgram::new(Sense::Maximize, objective)?;
        let mut direct = Vec::with_capacity(n);
        for i in 0..n {
            let row = activities
                .iter()
                .map(|&(c, _)| if coms[c].members.contains(i) { T::one() } else { T::zero() })
                .collect();
            lp.add_constraint(row, Relation::Eq, x.get(i).clone())?;
            direct.push(activities.iter().map(|&(c, p)| coms[c].utility_of(p, i)).collect());
        }
        let labels = activities
            .iter()
            .map(|&(c, p)| {
                if coms[c].profiles.len() == 1 {
                    coms[c].members.to_string()
                } else {
                    format!("{}#{}", coms[c].members, p)
                }
            })
            .collect();
        Ok(GainsProgram { n, lp, direct, labels })
    }
}

/// `F(x)`, the optimal value of the gains program.
pub fn f_value<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M, x: &PopulationVector<T>) -> Result<T> {
    let program = model.gains_program(x)?;
    Ok(solve(&program.lp)?.optimal()?.objective_value)
}

/// `F` at an arbitrary nonnegative vector; the zero vector has value zero.
pub(crate) fn f_at<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M, x: &[T]) -> Result<T> {
    if x.iter().all(|v| v.is_negligible()) {
        if x.iter().any(|v| v.is_neg()) {
            return Err(domain("point lies outside the nonnegative orthant"));
        }
        return Ok(T::zero());
    }
    f_value(model, &PopulationVector::new(x.to_vec())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CoalitionGame;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pop(v: &[i64]) -> PopulationVector {
        PopulationVector::new(v.iter().map(|&a| q(a, 1)).collect()).unwrap()
    }

    #[test]
    fn glove_values() {
        let glove = CoalitionGame::new(2, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        let cg = CommunityGame::from_coalition_game(&glove).unwrap();
        assert_eq!(f_value(&cg, &pop(&[1, 1])).unwrap(), q(1, 1));
        assert_eq!(f_value(&cg, &pop(&[2, 1])).unwrap(), q(1, 1));
        assert_eq!(f_value(&cg, &pop(&[3, 3])).unwrap(), q(3, 1));
        assert_eq!(f_at(&cg, &[q(0, 1), q(0, 1)]).unwrap(), q(0, 1));
    }

    #[test]
    fn majority_value_matches_cover() {
        let majority = CoalitionGame::from_fn(3, |s| q((s.len() >= 2) as i64, 1)).unwrap();
        let cg = CommunityGame::from_coalition_game(&majority).unwrap();
        assert_eq!(f_value(&cg, &pop(&[1, 1, 1])).unwrap(), q(3, 2));
    }
}
