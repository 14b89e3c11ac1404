use crate::error::{Error, Result};
use crate::game::{Coalition, CoalitionGame};
use crate::scalar::{sum, Scalar};
use crate::Rational;

/// Shapley value of every player.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyResult<T = Rational> {
    pub values: Vec<T>,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// `Sh_i = Σ_{S ∌ i} |S|!(n-|S|-1)!/n! [v(S ∪ i) - v(S)]`.
pub fn shapley_value<T: Scalar>(cg: &CoalitionGame<T>) -> Result<ShapleyResult<T>> {
    let n = cg.n();
    let weights: Vec<T> = (0..n as u64)
        .map(|s| T::from_ratio(1, (n as u64 * binomial(n as u64 - 1, s)) as i64))
        .collect();
    let grand = cg.grand();
    let values: Vec<T> = (0..n)
        .map(|i| {
            grand
                .without(i)
                .subsets()
                .fold(T::zero(), |acc, s| {
                    let marginal = cg.value(s.with(i)).clone() - cg.value(s).clone();
                    acc + weights[s.len()].clone() * marginal
                })
        })
        .collect();
    let total = sum(&values);
    if !total.approx_eq(cg.value(grand)) {
        return Err(Error::Invariant(format!(
            "Shapley values sum to {total}, not v(I) = {}",
            cg.value(grand)
        )));
    }
    Ok(ShapleyResult { values })
}

/// Shapley value of the subgame on `s`, in increasing member order.
pub fn shapley_subgame<T: Scalar>(cg: &CoalitionGame<T>, s: Coalition) -> Result<ShapleyResult<T>> {
    shapley_value(&cg.subgame(s)?)
}

/// Efficiency of the subgame values on one coalition.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgameIdentity<T = Rational> {
    pub coalition: Coalition,
    pub values: Vec<T>,
    pub total: T,
    pub worth: T,
}

impl<T: Scalar> SubgameIdentity<T> {
    pub fn holds(&self) -> bool {
        self.total.approx_eq(&self.worth)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyEulerReport<T = Rational> {
    pub subgames: Vec<SubgameIdentity<T>>,
    /// Marginals of the Shapley extension at the grand coalition.
    pub gradient: Vec<T>,
    /// `gradient · 1 = v(I)`.
    pub grand_identity: bool,
}

impl<T: Scalar> ShapleyEulerReport<T> {
    pub fn all_hold(&self) -> bool {
        self.grand_identity && self.subgames.iter().all(SubgameIdentity::holds)
    }
}

/// For every coalition `S`, the subgame Shapley values sum to `v(S)`.
pub fn shapley_euler_identities<T: Scalar>(cg: &CoalitionGame<T>) -> Result<ShapleyEulerReport<T>> {
    let mut subgames = Vec::new();
    for s in cg.grand().nonempty_subsets() {
        let values = shapley_subgame(cg, s)?.values;
        subgames.push(SubgameIdentity {
            coalition: s,
            total: sum(&values),
            worth: cg.value(s).clone(),
            values,
        });
    }
    let gradient = shapley_value(cg)?.values;
    let grand_identity = sum(&gradient).approx_eq(cg.value(cg.grand()));
    Ok(ShapleyEulerReport {
        subgames,
        gradient,
        grand_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn textbook_values() {
        let unanimity = CoalitionGame::from_fn(3, |s| q(Coalition(0b011).is_subset_of(s) as i64, 1)).unwrap();
        assert_eq!(shapley_value(&unanimity).unwrap().values, vec![q(1, 2), q(1, 2), q(0, 1)]);
        let majority = CoalitionGame::from_fn(3, |s| q((s.len() >= 2) as i64, 1)).unwrap();
        assert_eq!(shapley_value(&majority).unwrap().values, vec![q(1, 3); 3]);
        let pair = CoalitionGame::new(2, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(shapley_value(&pair).unwrap().values, vec![q(1, 2); 2]);
    }

    #[test]
    fn subgames() {
        let majority = CoalitionGame::from_fn(3, |s| q((s.len() >= 2) as i64, 1)).unwrap();
        assert_eq!(shapley_subgame(&majority, Coalition(0b011)).unwrap().values, vec![q(1, 2); 2]);
        assert_eq!(shapley_subgame(&majority, Coalition(0b100)).unwrap().values, vec![q(0, 1)]);
        assert_eq!(
            shapley_subgame(&majority, majority.grand()).unwrap(),
            shapley_value(&majority).unwrap()
        );
        assert!(shapley_euler_identities(&majority).unwrap().all_hold());
    }
}
