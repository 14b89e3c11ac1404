use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::game::PopulationVector;
use crate::scalar::Scalar;
use crate::Rational;

use super::model::{f_at, f_value, GainsModel};
use super::subdiff::{directional_derivative_f, subdifferential_f};

fn scaled<T: Scalar>(x: &PopulationVector<T>, k: u64) -> Vec<T> {
    let k = T::from_int(k as i64);
    x.as_slice().iter().map(|v| v.clone() * k.clone()).collect()
}

/// `F(kx + d) - F(kx)`.
pub fn discrete_difference<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    d: &[T],
    k: u64,
) -> Result<T> {
    if k == 0 {
        return Err(domain("scale k must be at least 1"));
    }
    if d.len() != x.len() {
        return Err(domain("direction has the wrong length"));
    }
    let base = scaled(x, k);
    let moved: Vec<T> = base.iter().zip(d).map(|(a, b)| a.clone() + b.clone()).collect();
    if moved.iter().any(|v| v.is_neg()) {
        return Err(domain("kx + d leaves the nonnegative orthant"));
    }
    Ok(f_at(model, &moved)? - f_at(model, &base)?)
}

/// Discrete marginal contributions `F(kx) - F(kx - e_i)` for `i ∈ supp x`
/// (zero elsewhere).
pub fn discrete_marginals<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    k: u64,
) -> Result<Vec<T>> {
    if k == 0 {
        return Err(domain("scale k must be at least 1"));
    }
    let base = scaled(x, k);
    let support = x.support();
    if let Some(&i) = support.iter().find(|&&i| base[i] < T::one()) {
        return Err(domain(format!("k·x_{} is below one, so a unit cannot be removed", i + 1)));
    }
    let full = f_at(model, &base)?;
    let mut out = vec![T::zero(); x.len()];
    for i in support {
        let mut less = base.clone();
        less[i] = less[i].clone() - T::one();
        out[i] = full.clone() - f_at(model, &less)?;
    }
    Ok(out)
}

/// Discrete Euler gap `E_k(x) = Σ_{i ∈ supp x} x_i [F(kx) - F(kx - e_i)] - F(x)`.
pub fn discrete_euler_gap<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    k: u64,
) -> Result<T> {
    let marginals = discrete_marginals(model, x, k)?;
    let weighted = crate::scalar::dot(&marginals, x.as_slice());
    Ok(weighted - f_value(model, x)?)
}

/// Infinitesimal Euler gap `E_∞(x) = Σ_{i ∈ supp x} x_i max{r_i : r ∈ ∂F(x)} - F(x)`.
pub fn infinitesimal_euler_gap<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<T> {
    let sub = subdifferential_f(model, x)?;
    let mut total = T::zero();
    for i in x.support() {
        let (_, hi) = sub.coordinate_range(i)?;
        let hi = hi.ok_or_else(|| domain("payoff on the support is unbounded"))?;
        total = total + x.get(i).clone() * hi;
    }
    Ok(total - sub.value().clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Differentiability<T = Rational> {
    pub differentiable: bool,
    pub gradient: Option<Vec<T>>,
}

/// Differentiability of `F` at `x` by coordinate probes of `∂F(x)`.
pub fn is_differentiable<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<Differentiability<T>> {
    let gradient = subdifferential_f(model, x)?.gradient()?;
    Ok(Differentiability {
        differentiable: gradient.is_some(),
        gradient,
    })
}

/// One-sided test: `Σ_{i ∈ supp x} x_i · (-F'(x; -e_i)) = F(x)`.
pub fn one_sided_euler_test<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<bool> {
    let mut total = T::zero();
    for i in x.support() {
        let mut d = vec![T::zero(); x.len()];
        d[i] = -T::one();
        let left = -directional_derivative_f(model, x, &d)?;
        total = total + x.get(i).clone() * left;
    }
    Ok(total.approx_eq(&f_value(model, x)?))
}

/// Smallest scale at which every unit can be removed from `kx`.
pub fn first_valid_scale<T: Scalar>(x: &PopulationVector<T>) -> u64 {
    let mut k = 1u64;
    while x.support().iter().any(|&i| x.get(i).clone() * T::from_int(k as i64) < T::one()) {
        k *= 2;
    }
    // step back down to the exact threshold
    let mut lo = k / 2 + 1;
    let mut hi = k;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if x.support().iter().all(|&i| x.get(i).clone() * T::from_int(mid as i64) >= T::one()) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi.max(1)
}

/// Gap table from a replication sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerReport<T = Rational> {
    pub x: Vec<T>,
    pub value: T,
    /// `(k, E_k)` for `k` from the first valid scale to `kmax`.
    pub discrete: Vec<(u64, T)>,
    pub infinitesimal: T,
    pub differentiable: bool,
    pub gradient: Option<Vec<T>>,
    /// Smallest `K` with `E_k = E_∞` for all `k >= K`, if found below the
    /// search limit.
    pub stabilization: Option<u64>,
}

/// Default cap for the stabilization search.
pub const STABILIZATION_LIMIT: u64 = 1 << 20;

/// Smallest `K` such that `E_k(x) = E_∞(x)` for every `k >= K`.
///
/// `E_k` is nonincreasing in `k` and reaches `E_∞` after finitely many steps
/// for polyhedral `F`, so doubling followed by bisection finds it.
pub fn stabilization_index<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    limit: u64,
) -> Result<Option<u64>> {
    let target = infinitesimal_euler_gap(model, x)?;
    let start = first_valid_scale(x);
    let reached = |k: u64| -> Result<bool> { Ok(discrete_euler_gap(model, x, k)?.approx_eq(&target)) };
    let mut hi = start;
    while !reached(hi)? {
        if hi >= limit {
            return Ok(None);
        }
        hi = (hi * 2).min(limit);
    }
    let mut lo = if hi == start { start } else { hi / 2 + 1 };
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reached(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(hi))
}

pub fn euler_report<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    kmax: u64,
) -> Result<EulerReport<T>> {
    let start = first_valid_scale(x);
    let discrete: Result<Vec<(u64, T)>> = (start..=kmax.max(start))
        .into_par_iter()
        .map(|k| discrete_euler_gap(model, x, k).map(|e| (k, e)))
        .collect();
    let diff = is_differentiable(model, x)?;
    Ok(EulerReport {
        x: x.as_slice().to_vec(),
        value: f_value(model, x)?,
        discrete: discrete?,
        infinitesimal: infinitesimal_euler_gap(model, x)?,
        differentiable: diff.differentiable,
        gradient: diff.gradient,
        stabilization: stabilization_index(model, x, STABILIZATION_LIMIT)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Coalition, CoalitionGame, Community, CommunityGame};

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

    fn pair_game(w1: i64, w2: i64) -> CommunityGame {
        CommunityGame::new(
            2,
            vec![
                Community::new(Coalition::singleton(0), vec![vec![q(0, 1)]]),
                Community::new(Coalition::singleton(1), vec![vec![q(0, 1)]]),
                Community::new(Coalition::grand(2), vec![vec![q(w1, 1), q(w2, 1)]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn glove_gaps() {
        let g = glove();
        for k in 1..=4 {
            assert_eq!(discrete_euler_gap(&g, &pop(&[1, 1]), k).unwrap(), q(1, 1));
        }
        assert_eq!(infinitesimal_euler_gap(&g, &pop(&[1, 1])).unwrap(), q(1, 1));
        assert_eq!(infinitesimal_euler_gap(&g, &pop(&[2, 1])).unwrap(), q(0, 1));
        assert_eq!(discrete_difference(&g, &pop(&[1, 1]), &[q(-1, 1), q(0, 1)], 5).unwrap(), q(-1, 1));
        let d = is_differentiable(&g, &pop(&[2, 1])).unwrap();
        assert_eq!(d.gradient, Some(vec![q(0, 1), q(1, 1)]));
        assert!(one_sided_euler_test(&g, &pop(&[2, 1])).unwrap());
        assert!(!one_sided_euler_test(&g, &pop(&[1, 1])).unwrap());
    }

    #[test]
    fn battle_gap_is_gains_from_cooperation() {
        let b = pair_game(1, 1);
        for k in 1..=3 {
            assert_eq!(discrete_euler_gap(&b, &pop(&[1, 1]), k).unwrap(), q(2, 1));
        }
    }

    #[test]
    fn stabilization_needs_large_k() {
        // On the glove, x = (1/2, 1/3) has gradient (0, 1) but the type-1
        // marginal only vanishes once k/2 - 1 >= k/3.
        let g = glove();
        let x = pop(&[1, 2]);
        assert_eq!(infinitesimal_euler_gap(&g, &x).unwrap(), q(0, 1));
        assert_eq!(discrete_euler_gap(&g, &x, 1).unwrap(), q(0, 1));
        let x = PopulationVector::new(vec![q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(stabilization_index(&g, &x, 1 << 10).unwrap(), Some(1));
        let half = PopulationVector::new(vec![q(1, 2), q(1, 3)]).unwrap();
        assert_eq!(first_valid_scale(&half), 3);
        assert_eq!(stabilization_index(&g, &half, 1 << 10).unwrap(), Some(6));
    }
}
