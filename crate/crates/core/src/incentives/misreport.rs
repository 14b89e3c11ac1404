use rayon::prelude::*;

use crate::error::Result;
use crate::game::PopulationVector;
use crate::scalar::Scalar;
use crate::Rational;

use super::mechanism::{mechanism_outcome, truthful_outcome, MechanismGame, PaymentRule};

/// Deterministic misreport family for a utility row: `2u`, `u/2`, zero,
/// the reversed row, then `u ± δ e_a` for every entry `a` and
/// `δ ∈ {1, 1/2}`, then `extra` verbatim.
///
/// Downward bumps stop at zero for nonnegative entries.
pub fn misreport_candidates<T: Scalar>(u: &[T], extra: &[Vec<T>]) -> Vec<Vec<T>> {
    let two = T::from_int(2);
    let mut out = vec![
        u.iter().map(|v| v.clone() * two.clone()).collect(),
        u.iter().map(|v| v.clone() / two.clone()).collect(),
        vec![T::zero(); u.len()],
        u.iter().rev().cloned().collect(),
    ];
    for a in 0..u.len() {
        for delta in [T::one(), T::from_ratio(1, 2)] {
            for up in [true, false] {
                let mut row = u.to_vec();
                row[a] = if up {
                    row[a].clone() + delta.clone()
                } else {
                    let lowered = row[a].clone() - delta.clone();
                    if lowered.is_neg() && !row[a].is_neg() {
                        T::zero()
                    } else {
                        lowered
                    }
                };
                out.push(row);
            }
        }
    }
    out.extend(extra.iter().cloned());
    out
}

/// Most profitable report for one player within a candidate family.
#[derive(Clone, Debug, PartialEq)]
pub struct MisreportSearch<T = Rational> {
    pub player: usize,
    /// Realized utility when reporting truthfully.
    pub truthful: T,
    /// Largest realized-utility change over the family (zero for an empty
    /// family). Positive means a profitable misreport was found.
    pub gain: T,
    /// The candidate attaining `gain`, when it is positive.
    pub witness: Option<Vec<T>>,
    pub candidates: usize,
}

impl<T: Scalar> MisreportSearch<T> {
    /// Incentive compatible within the searched family.
    pub fn compatible_within_family(&self) -> bool {
        !self.gain.is_pos()
    }
}

pub fn best_misreport<T: Scalar>(
    game: &MechanismGame<T>,
    player: usize,
    rule: PaymentRule,
    candidates: &[Vec<T>],
    x: &PopulationVector<T>,
) -> Result<MisreportSearch<T>> {
    let truthful = truthful_outcome(game, rule, x)?.realized[player].clone();
    let gains: Vec<T> = candidates
        .par_iter()
        .map(|row| {
            let reported = game.with_report(player, row)?;
            let out = mechanism_outcome(game, &reported, rule, x)?;
            Ok(out.realized[player].clone() - truthful.clone())
        })
        .collect::<Result<_>>()?;
    let best = gains
        .iter()
        .enumerate()
        .fold(None::<(usize, &T)>, |acc, (k, g)| match acc {
            Some((_, b)) if b >= g => acc,
            _ => Some((k, g)),
        });
    let (gain, witness) = match best {
        Some((k, g)) if g.is_pos() => (g.clone(), Some(candidates[k].clone())),
        Some((_, g)) => (g.clone(), None),
        None => (T::zero(), None),
    };
    Ok(MisreportSearch {
        player,
        truthful,
        gain,
        witness,
        candidates: candidates.len(),
    })
}

/// Misreport search for every player in `supp x`, each over the default
/// family for its row plus `extra[i]` when given.
pub fn is_incentive_compatible<T: Scalar>(
    game: &MechanismGame<T>,
    rule: PaymentRule,
    extra: &[Vec<Vec<T>>],
    x: &PopulationVector<T>,
) -> Result<Vec<MisreportSearch<T>>> {
    x.support()
        .into_par_iter()
        .map(|i| {
            let user = extra.get(i).map(Vec::as_slice).unwrap_or(&[]);
            let family = misreport_candidates(&game.utility_row(i), user);
            best_misreport(game, i, rule, &family, x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::{CharFnMode, OutsiderRule};
    use crate::game::NormalFormGame;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    fn nf(u1: &[&[i64]], u2: &[&[i64]]) -> MechanismGame {
        MechanismGame::NormalForm {
            game: NormalFormGame::bimatrix(m(u1), m(u2)).unwrap(),
            mode: CharFnMode::Standard,
            rule: OutsiderRule::default(),
        }
    }

    #[test]
    fn family_size() {
        let u = [q(1, 1), q(0, 1), q(0, 1), q(1, 1)];
        let c = misreport_candidates(&u, &[]);
        assert_eq!(c.len(), 20);
        assert!(c.iter().flatten().all(|v| !v.is_neg()));
        let extra = vec![vec![q(7, 1); 4]];
        let c = misreport_candidates(&u, &extra);
        assert_eq!(c.last(), Some(&extra[0]));
    }

    #[test]
    fn pennies_is_compatible_under_marginals() {
        let g = nf(&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]);
        let v = is_incentive_compatible(&g, PaymentRule::MarginalContribution(1), &[], &PopulationVector::ones(2)).unwrap();
        assert!(v.iter().all(|s| s.compatible_within_family()));
    }

    #[test]
    fn battle_core_payments_invite_misreports() {
        let g = nf(&[&[1, 0], &[0, 0]], &[&[1, 0], &[0, 0]]);
        let s = best_misreport(
            &g,
            0,
            PaymentRule::CoreSelection,
            &misreport_candidates(&g.utility_row(0), &[]),
            &PopulationVector::ones(2),
        )
        .unwrap();
        assert!(s.gain.is_pos());
        assert!(s.witness.is_some());
    }
}
