use rayon::prelude::*;

use crate::charfn::{is_self_concavifying, superadditive_cover_value};
use crate::error::{domain, Error, Result};
use crate::game::{Coalition, CoalitionGame, PopulationVector};
use crate::homog::{f_at, subdifferential_f, GainsModel};
use crate::lp::{Polytope, Relation};
use crate::scalar::Scalar;
use crate::Rational;

use super::shapley::shapley_value;

/// Largest `(k+1)^n` accepted by [`equal_treatment_core`].
pub const EQUAL_TREATMENT_LIMIT: u64 = 100_000;

/// A core-like polytope of payoff vectors.
#[derive(Clone, Debug)]
pub struct CorePolytope<T = Rational> {
    polytope: Polytope<T>,
    empty: bool,
}

impl<T: Scalar> CorePolytope<T> {
    fn new(polytope: Polytope<T>) -> Result<Self> {
        let empty = polytope.is_empty()?;
        Ok(Self { polytope, empty })
    }

    pub fn polytope(&self) -> &Polytope<T> {
        &self.polytope
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn contains(&self, r: &[T]) -> Result<bool> {
        Ok(self.polytope.contains(r)?)
    }

    /// `(min, max)` of a functional; `None` on an empty core.
    pub fn range(&self, functional: &[T]) -> Result<Option<(T, T)>> {
        Ok(self.polytope.range(functional)?)
    }

    pub fn lexicographic_min(&self) -> Result<Option<Vec<T>>> {
        Ok(self.polytope.lexicographic_min()?)
    }

    pub fn singleton(&self) -> Result<Option<Vec<T>>> {
        Ok(self.polytope.singleton()?)
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        Ok(self.polytope.is_subset_of(&other.polytope)?)
    }

    pub fn same_set(&self, other: &Self) -> Result<bool> {
        Ok(self.polytope.same_set(&other.polytope)?)
    }
}

fn indicator<T: Scalar>(n: usize, s: Coalition) -> Vec<T> {
    (0..n).map(|i| if s.contains(i) { T::one() } else { T::zero() }).collect()
}

/// `{ r : r·1_S >= v(S) for proper S, r·1_I = v(I) }`.
pub fn core<T: Scalar>(cg: &CoalitionGame<T>) -> Result<CorePolytope<T>> {
    let n = cg.n();
    let grand = cg.grand();
    let mut p = Polytope::new(n);
    for s in grand.nonempty_subsets() {
        let rel = if s == grand { Relation::Eq } else { Relation::Ge };
        p.add(indicator(n, s), rel, cg.value(s).clone())?;
    }
    CorePolytope::new(p)
}

/// Balancedness, decided by the cover LP and by core feasibility; the two
/// must agree.
pub fn is_balanced<T: Scalar>(cg: &CoalitionGame<T>) -> Result<bool> {
    let by_cover = superadditive_cover_value(cg, cg.grand())?.approx_eq(cg.value(cg.grand()));
    let by_core = !core(cg)?.is_empty();
    if by_cover != by_core {
        return Err(Error::Invariant(format!(
            "cover says balanced = {by_cover}, core says {by_core}"
        )));
    }
    Ok(by_cover)
}

pub fn is_totally_balanced<T: Scalar>(cg: &CoalitionGame<T>) -> Result<bool> {
    is_self_concavifying(cg)
}

/// Integer vectors in `[0, k]^n` other than zero, in mixed-radix order.
fn grid(n: usize, k: u64) -> Result<Vec<Vec<u64>>> {
    let size = (k + 1)
        .checked_pow(n as u32)
        .filter(|s| *s <= EQUAL_TREATMENT_LIMIT)
        .ok_or_else(|| {
            Error::TooLarge(format!("(k+1)^n exceeds {EQUAL_TREATMENT_LIMIT} for k = {k}, n = {n}"))
        })?;
    Ok((1..size)
        .map(|mut idx| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = idx % (k + 1);
                idx /= k + 1;
            }
            v
        })
        .collect())
}

/// Equal-treatment core at replication `k`:
/// `{ r : r·x >= F(x) for integer 0 < x <= k1, r·k1 = F(k1) }`.
pub fn equal_treatment_core<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    k: u64,
) -> Result<CorePolytope<T>> {
    if k == 0 {
        return Err(domain("replication k must be at least 1"));
    }
    let n = model.num_types();
    let points = grid(n, k)?;
    let rows: Result<Vec<(Vec<T>, T)>> = points
        .par_iter()
        .map(|x| {
            let xs: Vec<T> = x.iter().map(|&v| T::from_int(v as i64)).collect();
            let value = f_at(model, &xs)?;
            Ok((xs, value))
        })
        .collect();
    let mut p = Polytope::new(n);
    for (x, value) in rows? {
        let full = x.iter().all(|v| *v == T::from_int(k as i64));
        p.add(x, if full { Relation::Eq } else { Relation::Ge }, value)?;
    }
    CorePolytope::new(p)
}

/// `∂F(1)` as a core polytope. Fails when the gains program has extra rows,
/// because the projection then has no plain H-representation.
fn subdifferential_at_ones<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M) -> Result<CorePolytope<T>> {
    let sub = subdifferential_f(model, &PopulationVector::ones(model.num_types()))?;
    if sub.polytope().hidden() > 0 {
        return Err(domain("core comparisons need a model without extra dual variables"));
    }
    CorePolytope::new(sub.polytope().clone())
}

/// `∂_eC(k1) = ∂F(1)`, by mutual inclusion.
pub fn core_equivalence<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M, k: u64) -> Result<bool> {
    let etc = equal_treatment_core(model, k)?;
    let sub = subdifferential_at_ones(model)?;
    etc.same_set(&sub)
}

/// Inclusions of the chain `∂F(1) ⊆ ∂_eC((k+1)1) ⊆ ∂_eC(k1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nesting {
    pub k: u64,
    pub gradient_in_next: bool,
    pub next_in_current: bool,
}

impl Nesting {
    pub fn holds(&self) -> bool {
        self.gradient_in_next && self.next_in_current
    }
}

pub fn nesting_check<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M, k: u64) -> Result<Nesting> {
    let sub = subdifferential_f(model, &PopulationVector::ones(model.num_types()))?;
    let current = equal_treatment_core(model, k)?;
    let next = equal_treatment_core(model, k + 1)?;
    Ok(Nesting {
        k,
        gradient_in_next: sub.polytope().is_subset_of(next.polytope())?,
        next_in_current: next.is_subset_of(&current)?,
    })
}

/// Shapley value of `S ↦ F(1_S)` against the gradient of `F` at `1`.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapleyGradientComparison<T = Rational> {
    /// `∂F(1)` is not a singleton.
    NotApplicable,
    Equal { gradient: Vec<T> },
    Differs { gradient: Vec<T>, shapley: Vec<T> },
}

pub fn shapley_gradient_comparison<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M) -> Result<ShapleyGradientComparison<T>> {
    let n = model.num_types();
    let Some(gradient) = subdifferential_f(model, &PopulationVector::ones(n))?.gradient()? else {
        return Ok(ShapleyGradientComparison::NotApplicable);
    };
    let restricted = restricted_game(model)?;
    let shapley = shapley_value(&restricted)?.values;
    if shapley.iter().zip(&gradient).all(|(a, b)| a.approx_eq(b)) {
        Ok(ShapleyGradientComparison::Equal { gradient })
    } else {
        Ok(ShapleyGradientComparison::Differs { gradient, shapley })
    }
}

/// The coalition game `S ↦ F(1_S)`.
pub fn restricted_game<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M) -> Result<CoalitionGame<T>> {
    let n = model.num_types();
    let values: Result<Vec<T>> = (0..1u32 << n)
        .into_par_iter()
        .map(|s| f_at(model, &indicator(n, Coalition(s))))
        .collect();
    CoalitionGame::new(n, values?)
}
