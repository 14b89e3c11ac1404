use crate::error::{domain, Result};
use crate::game::PopulationVector;
use crate::homog::{select, GainsModel, GainsProgram, SaddleSelection};
use crate::lp::solve;
use crate::scalar::{sum, Scalar};
use crate::Rational;

/// Utility weights on the simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<T = Rational>(Vec<T>);

impl<T: Scalar> WeightVector<T> {
    pub fn new(gamma: Vec<T>) -> Result<Self> {
        if gamma.is_empty() || gamma.iter().any(|g| g.is_neg()) {
            return Err(domain("weights must be nonnegative"));
        }
        if !sum(&gamma).approx_eq(&T::one()) {
            return Err(domain("weights must sum to one"));
        }
        Ok(Self(gamma))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![T::from_ratio(1, n as i64); n])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }
}

/// The gains model with type `i`'s utilities scaled by `γ_i`.
pub struct Weighted<'a, T, M: ?Sized> {
    pub model: &'a M,
    pub gamma: &'a [T],
}

impl<T: Scalar, M: GainsModel<T> + ?Sized> GainsModel<T> for Weighted<'_, T, M> {
    fn num_types(&self) -> usize {
        self.model.num_types()
    }

    fn gains_program(&self, x: &PopulationVector<T>) -> Result<GainsProgram<T>> {
        let mut p = self.model.gains_program(x)?;
        if self.gamma.len() != p.n {
            return Err(domain("weight vector has the wrong length"));
        }
        for (row, g) in p.direct.iter_mut().zip(self.gamma) {
            for v in row.iter_mut() {
                *v = v.clone() * g.clone();
            }
        }
        let objective = (0..p.num_columns())
            .map(|j| p.direct.iter().fold(T::zero(), |acc, row| acc + row[j].clone()))
            .collect();
        p.lp = p.lp.with_objective(crate::lp::Sense::Maximize, objective)?;
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NtuStatus {
    Converged,
    MaxIter,
    /// The iterates revisited an earlier weight vector exactly.
    Cycling { period: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NtuOptions<T = Rational> {
    pub tol: T,
    pub max_iter: usize,
    /// Average each step with the previous weights.
    pub damping: bool,
    pub selection: SaddleSelection,
    /// Round the weights down to multiples of `1/resolution` after each
    /// step (the largest weight absorbs the remainder). Keeps exact
    /// denominators bounded; `None` iterates the map exactly.
    pub resolution: Option<u64>,
}

impl<T: Scalar> Default for NtuOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::from_ratio(1, 1_000_000_000),
            max_iter: 10_000,
            damping: false,
            selection: SaddleSelection::default(),
            resolution: Some(1 << 40),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NtuOutcome<T = Rational> {
    pub gamma: Vec<T>,
    /// `γ_i · direct_i - r_i` at `gamma`.
    pub m: Vec<T>,
    pub r: Vec<T>,
    pub iterations: usize,
    pub status: NtuStatus,
}

fn transfers<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    gamma: &[T],
    selection: SaddleSelection,
) -> Result<(Vec<T>, Vec<T>)> {
    let program = Weighted { model, gamma }.gains_program(x)?;
    let value = solve(&program.lp)?.optimal()?.objective_value;
    let sp = select(&program, x, value, selection)?;
    Ok((sp.m, sp.r))
}

/// `M(γ)_i = (γ_i + m_i⁺) / (1 + Σ_j m_j⁺)`.
pub fn ntu_map<T: Scalar>(gamma: &[T], m: &[T]) -> Vec<T> {
    let pos: Vec<T> = m.iter().map(|v| if v.is_pos() { v.clone() } else { T::zero() }).collect();
    let denom = T::one() + sum(&pos);
    gamma
        .iter()
        .zip(pos)
        .map(|(g, p)| (g.clone() + p) / denom.clone())
        .collect()
}

fn snap<T: Scalar>(gamma: Vec<T>, resolution: u64) -> Vec<T> {
    let top = (0..gamma.len()).fold(0, |best, i| if gamma[i] > gamma[best] { i } else { best });
    let mut out: Vec<T> = gamma.iter().map(|g| g.floor_to(resolution)).collect();
    let rest = out.iter().enumerate().filter(|&(i, _)| i != top).fold(T::zero(), |acc, (_, v)| acc + v.clone());
    out[top] = T::one() - rest;
    out
}

/// Iterate `γ ← M(γ)` until every transfer is within `tol`.
///
/// Exact repeats are caught with Brent's cycle detection; a cycle can never
/// contain a converged point, so it is reported as such.
pub fn ntu_fixed_point<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    gamma0: &WeightVector<T>,
    options: &NtuOptions<T>,
) -> Result<NtuOutcome<T>> {
    if !options.tol.is_pos() {
        return Err(domain("tolerance must be positive"));
    }
    if gamma0.as_slice().len() != model.num_types() {
        return Err(domain("weight vector has the wrong length"));
    }
    let half = T::from_ratio(1, 2);
    let mut gamma = gamma0.as_slice().to_vec();
    let mut saved = gamma.clone();
    let (mut power, mut lam) = (1usize, 0usize);
    for iterations in 0..=options.max_iter {
        let (m, r) = transfers(model, x, &gamma, options.selection)?;
        let worst = m.iter().map(|v| v.abs()).fold(T::zero(), T::max_of);
        let done = |status| NtuOutcome { gamma: gamma.clone(), m: m.clone(), r: r.clone(), iterations, status };
        if worst <= options.tol {
            return Ok(done(NtuStatus::Converged));
        }
        if iterations == options.max_iter {
            return Ok(done(NtuStatus::MaxIter));
        }
        let mut next = ntu_map(&gamma, &m);
        if options.damping {
            next = next
                .into_iter()
                .zip(&gamma)
                .map(|(a, b)| (a + b.clone()) * half.clone())
                .collect();
        }
        if let Some(res) = options.resolution {
            next = snap(next, res);
        }
        gamma = next;
        lam += 1;
        if gamma == saved {
            let (m, r) = transfers(model, x, &gamma, options.selection)?;
            return Ok(NtuOutcome { gamma, m, r, iterations: iterations + 1, status: NtuStatus::Cycling { period: lam } });
        }
        if lam == power {
            saved = gamma.clone();
            power *= 2;
            lam = 0;
        }
    }
    unreachable!("loop returns by max_iter")
}
