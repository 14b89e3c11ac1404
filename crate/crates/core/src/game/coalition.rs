use std::fmt;

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::Rational;

use super::diagnostics::{into_result, Diagnostic};

/// Largest number of player types a coalition bitmask can address here.
pub const MAX_TYPES: usize = 20;

/// Set of player types as a bitmask: bit `i` is type `i` (zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn grand(n: usize) -> Self {
        debug_assert!(n <= MAX_TYPES);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Self {
        Coalition(members.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        Coalition(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Coalition(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// Position of member `i` among the members, if present.
    pub fn rank_of(self, i: usize) -> Option<usize> {
        self.contains(i)
            .then(|| (self.0 & ((1u32 << i) - 1)).count_ones() as usize)
    }

    /// Every subset, including the empty set and `self`, in increasing
    /// bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Coalition(cur))
        })
    }

    /// Nonempty subsets.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Coalition> {
        self.subsets().skip(1)
    }
}

impl fmt::Display for Coalition {
    /// One-based member list, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// A transferable-utility game given by its characteristic function,
/// `values[S.index()] = v(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalitionGame<T = Rational> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> CoalitionGame<T> {
    /// Checked constructor; see [`CoalitionGame::diagnose`].
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        into_result(Self::diagnose(n, &values))?;
        Ok(Self { n, values })
    }

    /// Build from a closure over coalitions; `v(∅)` is forced to zero.
    pub fn from_fn(n: usize, mut v: impl FnMut(Coalition) -> T) -> Result<Self> {
        if n == 0 || n > MAX_TYPES {
            return Err(domain(format!("number of types must be in 1..={MAX_TYPES}")));
        }
        let values = (0..1u32 << n)
            .map(|s| if s == 0 { T::zero() } else { v(Coalition(s)) })
            .collect();
        Self::new(n, values)
    }

    /// Every invariant violation of the raw data.
    pub fn diagnose(n: usize, values: &[T]) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if n == 0 || n > MAX_TYPES {
            out.push(Diagnostic::new("/n", format!("must be between 1 and {MAX_TYPES}")));
            return out;
        }
        if values.len() != 1 << n {
            out.push(Diagnostic::new(
                "/values",
                format!("expected {} entries, found {}", 1usize << n, values.len()),
            ));
            return out;
        }
        if !values[0].is_zero() {
            out.push(Diagnostic::new("/values/0", "value of the empty coalition must be 0"));
        }
        for (s, v) in values.iter().enumerate() {
            if v.is_neg() {
                out.push(Diagnostic::new(format!("/values/{s}"), "negative value"));
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn value(&self, s: Coalition) -> &T {
        &self.values[s.index()]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The game restricted to subsets of `s`, with members renumbered
    /// `0..|s|` in increasing order.
    pub fn subgame(&self, s: Coalition) -> Result<Self> {
        if s.is_empty() || !s.is_subset_of(self.grand()) {
            return Err(domain("subgame needs a nonempty coalition of existing types"));
        }
        let members: Vec<usize> = s.members().collect();
        Self::from_fn(members.len(), |t| {
            let original = Coalition::from_members(t.members().map(|k| members[k]));
            self.value(original).clone()
        })
    }

    /// Pointwise sum of two games on the same types.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(domain("games have different numbers of types"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self::new(self.n, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_all() {
        let s = Coalition::from_members([0, 2, 3]);
        let subs: Vec<u32> = s.subsets().map(|c| c.0).collect();
        assert_eq!(subs, vec![0, 1, 4, 5, 8, 9, 12, 13]);
        assert_eq!(s.nonempty_subsets().count(), 7);
        assert_eq!(s.rank_of(2), Some(1));
        assert_eq!(s.to_string(), "{1,3,4}");
    }

    #[test]
    fn majority_subgame() {
        let g: CoalitionGame = CoalitionGame::from_fn(3, |s| {
            Rational::from_int((s.len() >= 2) as i64)
        })
        .unwrap();
        let pair = g.subgame(Coalition::from_members([0, 1])).unwrap();
        assert_eq!(pair.values(), &[0, 0, 0, 1].map(Rational::from_int));
        assert_eq!(g.subgame(g.grand()).unwrap(), g);
        let single = g.subgame(Coalition::singleton(2)).unwrap();
        assert_eq!(single.n(), 1);
        assert!(g.subgame(Coalition::EMPTY).is_err());
    }

    #[test]
    fn diagnostics() {
        let bad = [1, 0, 0, -1].map(Rational::from_int);
        let d = CoalitionGame::diagnose(2, &bad);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].path, "/values/0");
        assert!(CoalitionGame::new(2, bad.to_vec()).is_err());
    }
}
