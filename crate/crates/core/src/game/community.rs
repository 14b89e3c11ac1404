use std::collections::HashSet;

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::Rational;

use super::coalition::{Coalition, CoalitionGame, MAX_TYPES};
use super::diagnostics::{into_result, Diagnostic};

/// One joint activity of a community.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile<T = Rational> {
    /// Direct utility of each member, in increasing member order.
    pub utilities: Vec<T>,
    /// Distribution over full normal-form profiles that produced these
    /// utilities, when the community was derived from a normal-form game.
    pub lottery: Vec<(usize, T)>,
}

impl<T: Scalar> Profile<T> {
    pub fn new(utilities: Vec<T>) -> Self {
        Self {
            utilities,
            lottery: Vec::new(),
        }
    }

    pub fn total(&self) -> T {
        crate::scalar::sum(&self.utilities)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Community<T = Rational> {
    pub members: Coalition,
    pub profiles: Vec<Profile<T>>,
}

impl<T: Scalar> Community<T> {
    pub fn new(members: Coalition, rows: Vec<Vec<T>>) -> Self {
        Self {
            members,
            profiles: rows.into_iter().map(Profile::new).collect(),
        }
    }

    /// Utility of type `i` under profile `p`, zero when `i` is not a member.
    pub fn utility_of(&self, p: usize, i: usize) -> T {
        match self.members.rank_of(i) {
            Some(k) => self.profiles[p].utilities[k].clone(),
            None => T::zero(),
        }
    }
}

/// Group-matching primitive: each community `S` may form, any number of
/// times, and choose one of its profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityGame<T = Rational> {
    n: usize,
    communities: Vec<Community<T>>,
}

impl<T: Scalar> CommunityGame<T> {
    pub fn new(n: usize, communities: Vec<Community<T>>) -> Result<Self> {
        into_result(Self::diagnose(n, &communities))?;
        Ok(Self { n, communities })
    }

    pub fn diagnose(n: usize, communities: &[Community<T>]) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if n == 0 || n > MAX_TYPES {
            out.push(Diagnostic::new("/n", format!("must be between 1 and {MAX_TYPES}")));
            return out;
        }
        let grand = Coalition::grand(n);
        let mut seen = HashSet::new();
        for (c, com) in communities.iter().enumerate() {
            let path = format!("/communities/{c}");
            if com.members.is_empty() || !com.members.is_subset_of(grand) {
                out.push(Diagnostic::new(format!("{path}/members"), "members must be a nonempty set of existing types"));
                continue;
            }
            if !seen.insert(com.members) {
                out.push(Diagnostic::new(format!("{path}/members"), format!("duplicate community {}", com.members)));
            }
            if com.profiles.is_empty() {
                out.push(Diagnostic::new(format!("{path}/profiles"), "community has no profiles"));
            }
            for (p, prof) in com.profiles.iter().enumerate() {
                if prof.utilities.len() != com.members.len() {
                    out.push(Diagnostic::new(
                        format!("{path}/profiles/{p}"),
                        format!("expected {} utilities, found {}", com.members.len(), prof.utilities.len()),
                    ));
                    continue;
                }
                for (k, u) in prof.utilities.iter().enumerate() {
                    if u.is_neg() {
                        out.push(Diagnostic::new(format!("{path}/profiles/{p}/{k}"), "negative utility"));
                    }
                }
            }
        }
        for i in 0..n {
            if !seen.contains(&Coalition::singleton(i)) {
                out.push(Diagnostic::new("/communities", format!("singleton community {{{}}} is missing", i + 1)));
            }
        }
        out
    }

    /// Every coalition becomes a community with one profile that splits
    /// `v(S)` equally among its members.
    pub fn from_coalition_game(cg: &CoalitionGame<T>) -> Result<Self> {
        let communities = cg
            .grand()
            .nonempty_subsets()
            .map(|s| {
                let share = cg.value(s).clone() / T::from_int(s.len() as i64);
                Community::new(s, vec![vec![share; s.len()]])
            })
            .collect();
        Self::new(cg.n(), communities)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn communities(&self) -> &[Community<T>] {
        &self.communities
    }

    /// Every `(community, profile)` pair in storage order.
    pub fn activities(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.communities
            .iter()
            .enumerate()
            .flat_map(|(c, com)| (0..com.profiles.len()).map(move |p| (c, p)))
    }

    /// Type `i`'s utilities over all activities it takes part in, in
    /// [`CommunityGame::activities`] order.
    pub fn utility_row(&self, i: usize) -> Vec<T> {
        self.activities()
            .filter(|&(c, _)| self.communities[c].members.contains(i))
            .map(|(c, p)| self.communities[c].utility_of(p, i))
            .collect()
    }

    /// Same game with type `i`'s utilities replaced by `row` (layout of
    /// [`CommunityGame::utility_row`]).
    pub fn with_utility_row(&self, i: usize, row: &[T]) -> Result<Self> {
        if i >= self.n {
            return Err(domain(format!("type {} does not exist", i + 1)));
        }
        let expected = self.utility_row(i).len();
        if row.len() != expected {
            return Err(domain(format!("utility row for type {} needs {expected} entries", i + 1)));
        }
        let mut next = self.clone();
        let mut values = row.iter();
        for com in next.communities.iter_mut() {
            if let Some(k) = com.members.rank_of(i) {
                for prof in com.profiles.iter_mut() {
                    prof.utilities[k] = values.next().expect("row length checked").clone();
                }
            }
        }
        Self::new(next.n, next.communities)
    }
}
