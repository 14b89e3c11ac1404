use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::Rational;

use super::coalition::{Coalition, MAX_TYPES};
use super::diagnostics::{into_result, Diagnostic};

/// Flat index of an action profile: mixed radix, player 0 most significant.
pub fn profile_index(action_counts: &[usize], profile: &[usize]) -> Result<usize> {
    if profile.len() != action_counts.len() {
        return Err(domain("profile length differs from the number of players"));
    }
    let mut index = 0usize;
    for (i, (&a, &m)) in profile.iter().zip(action_counts).enumerate() {
        if a >= m {
            return Err(domain(format!("action {a} of player {} out of range 0..{m}", i + 1)));
        }
        index = index * m + a;
    }
    Ok(index)
}

/// Inverse of [`profile_index`].
pub fn profile_from_index(action_counts: &[usize], mut index: usize) -> Result<Vec<usize>> {
    let total: usize = action_counts.iter().product();
    if index >= total {
        return Err(domain(format!("profile index {index} out of range 0..{total}")));
    }
    let mut profile = vec![0; action_counts.len()];
    for (slot, &m) in profile.iter_mut().zip(action_counts).rev() {
        *slot = index % m;
        index /= m;
    }
    Ok(profile)
}

/// A game in normal form with nonnegative utilities. `utilities[i][k]` is
/// player `i`'s payoff at the profile with flat index `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormGame<T = Rational> {
    action_counts: Vec<usize>,
    utilities: Vec<Vec<T>>,
}

impl<T: Scalar> NormalFormGame<T> {
    pub fn new(action_counts: Vec<usize>, utilities: Vec<Vec<T>>) -> Result<Self> {
        into_result(Self::diagnose(&action_counts, &utilities))?;
        Ok(Self {
            action_counts,
            utilities,
        })
    }

    /// Two-player game from row-major payoff matrices.
    pub fn bimatrix(u1: Vec<Vec<T>>, u2: Vec<Vec<T>>) -> Result<Self> {
        let rows = u1.len();
        let cols = u1.first().map_or(0, Vec::len);
        let flat = |m: Vec<Vec<T>>| -> Vec<T> { m.into_iter().flatten().collect() };
        Self::new(vec![rows, cols], vec![flat(u1), flat(u2)])
    }

    pub fn diagnose(action_counts: &[usize], utilities: &[Vec<T>]) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = action_counts.len();
        if n == 0 || n > MAX_TYPES {
            out.push(Diagnostic::new("/actions", format!("need 1..={MAX_TYPES} players")));
            return out;
        }
        for (i, &m) in action_counts.iter().enumerate() {
            if m == 0 {
                out.push(Diagnostic::new(format!("/actions/{i}"), "player has no actions"));
            }
        }
        if utilities.len() != n {
            out.push(Diagnostic::new(
                "/utilities",
                format!("expected {n} utility tables, found {}", utilities.len()),
            ));
            return out;
        }
        let profiles: usize = action_counts.iter().product();
        for (i, row) in utilities.iter().enumerate() {
            if row.len() != profiles {
                out.push(Diagnostic::new(
                    format!("/utilities/{i}"),
                    format!("expected {profiles} entries, found {}", row.len()),
                ));
                continue;
            }
            for (k, u) in row.iter().enumerate() {
                if u.is_neg() {
                    out.push(Diagnostic::new(format!("/utilities/{i}/{k}"), "negative utility"));
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn num_profiles(&self) -> usize {
        self.utilities[0].len()
    }

    pub fn utilities(&self) -> &[Vec<T>] {
        &self.utilities
    }

    pub fn utility(&self, player: usize, profile: usize) -> &T {
        &self.utilities[player][profile]
    }

    /// Same game with player `i`'s table replaced.
    pub fn with_utility_row(&self, player: usize, row: Vec<T>) -> Result<Self> {
        if player >= self.n() {
            return Err(domain(format!("player {} does not exist", player + 1)));
        }
        let mut utilities = self.utilities.clone();
        utilities[player] = row;
        Self::new(self.action_counts.clone(), utilities)
    }

    /// Total utility of the members of `s` at a profile.
    pub fn coalition_payoff(&self, s: Coalition, profile: usize) -> T {
        s.members()
            .fold(T::zero(), |acc, i| acc + self.utilities[i][profile].clone())
    }

    /// Joint action profiles of the members of `s`, as action-count vector.
    pub(crate) fn counts_of(&self, s: Coalition) -> Vec<usize> {
        s.members().map(|i| self.action_counts[i]).collect()
    }

    /// Flat full-profile index from a joint action of `s` and one of its
    /// complement.
    pub(crate) fn merge(&self, s: Coalition, inside: usize, outside: usize) -> usize {
        let n = self.n();
        let rest = Coalition::grand(n).intersection(Coalition(!s.0));
        let a_in = profile_from_index(&self.counts_of(s), inside).expect("inside profile");
        let a_out = profile_from_index(&self.counts_of(rest), outside).expect("outside profile");
        let mut full = vec![0; n];
        for (k, i) in s.members().enumerate() {
            full[i] = a_in[k];
        }
        for (k, i) in rest.members().enumerate() {
            full[i] = a_out[k];
        }
        profile_index(&self.action_counts, &full).expect("merged profile")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix() {
        assert_eq!(profile_index(&[2, 2], &[0, 0]).unwrap(), 0);
        assert_eq!(profile_index(&[2, 2], &[1, 0]).unwrap(), 2);
        assert_eq!(profile_index(&[2, 3], &[1, 2]).unwrap(), 5);
        assert!(profile_index(&[2, 3], &[2, 0]).is_err());
        for shape in [vec![2, 3], vec![3, 1, 2], vec![4]] {
            let total: usize = shape.iter().product();
            for k in 0..total {
                let a = profile_from_index(&shape, k).unwrap();
                assert_eq!(profile_index(&shape, &a).unwrap(), k);
            }
        }
    }

    #[test]
    fn negative_utility_is_reported() {
        let q = Rational::from_int;
        let d = NormalFormGame::diagnose(&[2, 2], &[
            vec![q(1), q(0), q(0), q(1)],
            vec![q(0), q(-1), q(1), q(0)],
        ]);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].path, "/utilities/1/1");
        assert!(d[0].message.contains("negative utility"));
    }

    #[test]
    fn merge_profiles() {
        let q = Rational::from_int;
        let g = NormalFormGame::new(vec![2, 3, 2], vec![vec![q(0); 12]; 3]).unwrap();
        let s = Coalition::from_members([0, 2]);
        // inside (a0=1, a2=1) -> 3, outside a1=2 -> 2
        assert_eq!(g.merge(s, 3, 2), profile_index(&[2, 3, 2], &[1, 2, 1]).unwrap());
    }
}
