use crate::charfn::{community_from_normal_form, CharFnMode, OutsiderRule};
use crate::error::{domain, Error, Result};
use crate::game::{CommunityGame, NormalFormGame, PopulationVector};
use crate::homog::{discrete_marginals, subdifferential_f, GainsModel};
use crate::lp::{lexicographic_optimum, solve};
use crate::scalar::{dot, Scalar};
use crate::solutions::{restricted_game, shapley_value};
use crate::Rational;

/// How the mechanism sets per-capita payoffs from reported utilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaymentRule {
    /// `r_i = F(kx) - F(kx - e_i)`.
    MarginalContribution(u64),
    /// Shapley value of `S ↦ F(1_S)`; only at `x = 1`.
    ShapleyOfCover,
    /// Lexicographic minimum of `∂F(x)`.
    CoreSelection,
}

/// A game whose players report utilities to the mechanism.
#[derive(Clone, Debug, PartialEq)]
pub enum MechanismGame<T = Rational> {
    /// Reports are rows in [`CommunityGame::utility_row`] layout.
    Community(CommunityGame<T>),
    /// Reports are rows of the normal-form utility table; activities are
    /// derived with [`community_from_normal_form`].
    NormalForm {
        game: NormalFormGame<T>,
        mode: CharFnMode,
        rule: OutsiderRule,
    },
}

impl<T: Scalar> MechanismGame<T> {
    pub fn num_players(&self) -> usize {
        match self {
            Self::Community(cg) => cg.n(),
            Self::NormalForm { game, .. } => game.n(),
        }
    }

    pub fn utility_row(&self, i: usize) -> Vec<T> {
        match self {
            Self::Community(cg) => cg.utility_row(i),
            Self::NormalForm { game, .. } => game.utilities()[i].clone(),
        }
    }

    /// The same game with player `i` reporting `row`.
    pub fn with_report(&self, i: usize, row: &[T]) -> Result<Self> {
        Ok(match self {
            Self::Community(cg) => Self::Community(cg.with_utility_row(i, row)?),
            Self::NormalForm { game, mode, rule } => Self::NormalForm {
                game: game.with_utility_row(i, row.to_vec())?,
                mode: *mode,
                rule: rule.clone(),
            },
        })
    }

    pub fn community(&self) -> Result<CommunityGame<T>> {
        match self {
            Self::Community(cg) => Ok(cg.clone()),
            Self::NormalForm { game, mode, rule } => community_from_normal_form(game, *mode, rule),
        }
    }

    /// Utility of every player, under this game's utilities, for each
    /// activity of `activities` (a community game built from a report).
    fn utilities_of(&self, activities: &CommunityGame<T>) -> Result<Vec<Vec<T>>> {
        let n = self.num_players();
        let coms = activities.communities();
        match self {
            Self::Community(cg) => {
                let same = cg.communities().len() == coms.len()
                    && cg.communities().iter().zip(coms).all(|(a, b)| {
                        a.members == b.members && a.profiles.len() == b.profiles.len()
                    });
                if !same {
                    return Err(domain("report changed the activity structure"));
                }
                Ok((0..n)
                    .map(|i| activities.activities().map(|(c, p)| cg.communities()[c].utility_of(p, i)).collect())
                    .collect())
            }
            Self::NormalForm { game, .. } => Ok((0..n)
                .map(|i| {
                    activities
                        .activities()
                        .map(|(c, p)| {
                            let com = &coms[c];
                            if !com.members.contains(i) {
                                return T::zero();
                            }
                            let prof = &com.profiles[p];
                            if prof.lottery.is_empty() {
                                return com.utility_of(p, i);
                            }
                            prof.lottery
                                .iter()
                                .fold(T::zero(), |acc, (k, w)| acc + w.clone() * game.utility(i, *k).clone())
                        })
                        .collect()
                })
                .collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanismOutcome<T = Rational> {
    /// Reported `F(x)`.
    pub value: T,
    /// Aggregate activity levels (lexicographic minimum of the reported
    /// optimal face).
    pub z: Vec<T>,
    pub labels: Vec<String>,
    pub r: Vec<T>,
    /// Per-capita reported direct utility.
    pub reported: Vec<T>,
    /// `reported_i - r_i`; zero off the support.
    pub m: Vec<T>,
    /// Per-capita utility under true utilities, net of money: `true_i - m_i`.
    pub realized: Vec<T>,
    /// `Σ x_i r_i - F(x)`, what the mechanism pays beyond the gains.
    pub deficit: T,
}

impl<T: Scalar> MechanismOutcome<T> {
    /// `Σ x_i m_i + deficit`, zero for every outcome.
    pub fn budget_residual(&self, x: &PopulationVector<T>) -> T {
        dot(&self.m, x.as_slice()) + self.deficit.clone()
    }
}

fn payoffs<T: Scalar>(cg: &CommunityGame<T>, rule: PaymentRule, x: &PopulationVector<T>) -> Result<Vec<T>> {
    match rule {
        PaymentRule::MarginalContribution(k) => discrete_marginals(cg, x, k),
        PaymentRule::ShapleyOfCover => {
            if x.as_slice().iter().any(|v| !v.is_one()) {
                return Err(domain("Shapley payments are defined at x = 1 only"));
            }
            Ok(shapley_value(&restricted_game(cg)?)?.values)
        }
        PaymentRule::CoreSelection => {
            let sub = subdifferential_f(cg, x)?;
            if sub.polytope().is_empty()? {
                return Err(Error::EmptyCore);
            }
            sub.lexicographic_min()
        }
    }
}

/// Outcome when the mechanism sees `reported` but players value activities
/// by `truth`.
pub fn mechanism_outcome<T: Scalar>(
    truth: &MechanismGame<T>,
    reported: &MechanismGame<T>,
    rule: PaymentRule,
    x: &PopulationVector<T>,
) -> Result<MechanismOutcome<T>> {
    let n = truth.num_players();
    if reported.num_players() != n {
        return Err(domain("reported game has a different number of players"));
    }
    let cg = reported.community()?;
    let program = cg.gains_program(x)?;
    let value = solve(&program.lp)?.optimal()?.objective_value;
    let z = lexicographic_optimum(&program.lp)?;
    let r = payoffs(&cg, rule, x)?;
    let true_rows = truth.utilities_of(&cg)?;

    let mut reported_direct = vec![T::zero(); n];
    let mut m = vec![T::zero(); n];
    let mut realized = vec![T::zero(); n];
    for i in x.support() {
        let xi = x.get(i).clone();
        reported_direct[i] = dot(&program.direct[i], &z) / xi.clone();
        m[i] = reported_direct[i].clone() - r[i].clone();
        realized[i] = dot(&true_rows[i], &z) / xi - m[i].clone();
    }
    let deficit = dot(&r, x.as_slice()) - value.clone();
    let out = MechanismOutcome {
        value,
        z,
        labels: program.labels,
        r,
        reported: reported_direct,
        m,
        realized,
        deficit,
    };
    if !out.budget_residual(x).is_negligible() {
        return Err(Error::Invariant("transfers and deficit do not balance".into()));
    }
    Ok(out)
}

pub fn truthful_outcome<T: Scalar>(
    game: &MechanismGame<T>,
    rule: PaymentRule,
    x: &PopulationVector<T>,
) -> Result<MechanismOutcome<T>> {
    mechanism_outcome(game, game, rule, x)
}

/// One-sided derivative of `H_x` at the game's utilities in direction
/// `delta`: the largest `Σ_i delta_i · y` over optimal assignments `y`.
/// `delta[i]` has one entry per column of the gains program.
pub fn directional_derivative_h<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    delta: &[Vec<T>],
) -> Result<T> {
    let program = model.gains_program(x)?;
    let cols = program.num_columns();
    if delta.len() != program.n || delta.iter().any(|row| row.len() != cols) {
        return Err(domain(format!("direction must be {} rows of {cols} entries", program.n)));
    }
    let functional: Vec<T> = (0..cols)
        .map(|j| delta.iter().fold(T::zero(), |acc, row| acc + row[j].clone()))
        .collect();
    Ok(crate::lp::functional_range_over_optimal_face(&program.lp, &functional)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Coalition, CoalitionGame, Community};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    fn nf(g: NormalFormGame) -> MechanismGame {
        MechanismGame::NormalForm { game: g, mode: CharFnMode::Standard, rule: OutsiderRule::default() }
    }

    fn ones() -> PopulationVector {
        PopulationVector::ones(2)
    }

    #[test]
    fn battle_marginals_run_a_deficit() {
        let g = nf(NormalFormGame::bimatrix(m(&[&[1, 0], &[0, 0]]), m(&[&[1, 0], &[0, 0]])).unwrap());
        let o = truthful_outcome(&g, PaymentRule::MarginalContribution(1), &ones()).unwrap();
        assert_eq!(o.r, vec![q(2, 1), q(2, 1)]);
        assert_eq!(o.deficit, q(2, 1));
        assert_eq!(o.realized, vec![q(2, 1), q(2, 1)]);
        let o = truthful_outcome(&g, PaymentRule::CoreSelection, &ones()).unwrap();
        assert_eq!(o.r, vec![q(0, 1), q(2, 1)]);
        assert_eq!(o.m, vec![q(1, 1), q(-1, 1)]);
        assert_eq!(o.deficit, q(0, 1));
    }

    #[test]
    fn pennies_marginals_balance() {
        let g = nf(NormalFormGame::bimatrix(m(&[&[1, 0], &[0, 1]]), m(&[&[0, 1], &[1, 0]])).unwrap());
        let o = truthful_outcome(&g, PaymentRule::MarginalContribution(1), &ones()).unwrap();
        assert_eq!(o.r, vec![q(1, 2), q(1, 2)]);
        assert_eq!(o.deficit, q(0, 1));
        let s = truthful_outcome(&g, PaymentRule::ShapleyOfCover, &ones()).unwrap();
        assert_eq!(s.r, o.r);
    }

    #[test]
    fn additive_game_pays_its_constants() {
        let cg = CommunityGame::from_coalition_game(&CoalitionGame::from_fn(2, |s| {
            s.members().map(|i| q(i as i64 + 1, 1)).sum()
        }).unwrap()).unwrap();
        let g = MechanismGame::Community(cg);
        for rule in [PaymentRule::MarginalContribution(1), PaymentRule::ShapleyOfCover, PaymentRule::CoreSelection] {
            let o = truthful_outcome(&g, rule, &ones()).unwrap();
            assert_eq!(o.r, vec![q(1, 1), q(2, 1)]);
            assert_eq!(o.budget_residual(&ones()), q(0, 1));
        }
    }

    #[test]
    fn shapley_needs_unit_population() {
        let g = nf(NormalFormGame::bimatrix(m(&[&[1]]), m(&[&[1]])).unwrap());
        let x = PopulationVector::new(vec![q(2, 1), q(1, 1)]).unwrap();
        assert!(truthful_outcome(&g, PaymentRule::ShapleyOfCover, &x).is_err());
    }

    #[test]
    fn derivative_of_h() {
        let glove = CoalitionGame::new(2, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        let cg = CommunityGame::from_coalition_game(&glove).unwrap();
        let x = ones();
        let program = cg.gains_program(&x).unwrap();
        let cols = program.num_columns();
        // bump the pair's activity by one unit of utility
        let pair = program.labels.iter().position(|l| l == "{1,2}").unwrap();
        let mut bump = vec![vec![q(0, 1); cols]; 2];
        bump[0][pair] = q(1, 1);
        assert_eq!(directional_derivative_h(&cg, &x, &bump).unwrap(), q(1, 1));
        assert_eq!(directional_derivative_h(&cg, &x, &program.direct).unwrap(), q(1, 1));

        let single = CommunityGame::new(1, vec![Community::new(Coalition::singleton(0), vec![vec![q(3, 1)]])]).unwrap();
        let p = single.gains_program(&PopulationVector::ones(1)).unwrap();
        let neg: Vec<Vec<Rational>> = p.direct.iter().map(|r| r.iter().map(|v| -v.clone()).collect()).collect();
        assert_eq!(directional_derivative_h(&single, &PopulationVector::ones(1), &neg).unwrap(), q(-3, 1));
    }
}
