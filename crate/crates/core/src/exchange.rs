//! Linear exchange economies.
//!
//! Type `i` chooses a mixture over its trade vectors `E_i(a) ∈ Q^ℓ` and
//! values a net trade `e` at `v_i · e`. Trades must clear in aggregate. The
//! gains LP is written in aggregate activity levels `w_i(a) = x_i z_i(a)`,
//! which also covers types with zero population. Commodity prices are the
//! duals of the clearing rows.

use crate::error::{domain, Error, Result};
use crate::game::{CoalitionGame, Diagnostic, PopulationVector, MAX_TYPES};
use crate::homog::{
    euler_report, f_value, select, subdifferential_f, EulerReport, GainsModel, GainsProgram,
    SaddleSelection,
};
use crate::lp::{lexicographic_min_point, optimal_face_program, LinearProgram, Relation, Sense};
use crate::scalar::{dot, Scalar};
use crate::solutions::{core_equivalence, is_totally_balanced, restricted_game};
use crate::{game::CommunityGame, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct TraderType<T = Rational> {
    /// Available net trades, each of length `ℓ`; one must be zero.
    pub trades: Vec<Vec<T>>,
    /// Linear valuation of commodities, nonnegative.
    pub values: Vec<T>,
}

impl<T: Scalar> TraderType<T> {
    /// Value `v · E(a)` of trade `a`.
    pub fn trade_value(&self, a: usize) -> T {
        dot(&self.values, &self.trades[a])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeEconomy<T = Rational> {
    commodities: usize,
    traders: Vec<TraderType<T>>,
}

impl<T: Scalar> ExchangeEconomy<T> {
    pub fn new(commodities: usize, traders: Vec<TraderType<T>>) -> Result<Self> {
        let diags = Self::diagnose(commodities, &traders);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        Ok(Self { commodities, traders })
    }

    pub fn diagnose(commodities: usize, traders: &[TraderType<T>]) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if commodities == 0 {
            out.push(Diagnostic::new("/commodities", "need at least one commodity"));
        }
        if traders.is_empty() || traders.len() > MAX_TYPES {
            out.push(Diagnostic::new("/types", format!("need 1..={MAX_TYPES} trader types")));
        }
        for (i, t) in traders.iter().enumerate() {
            let path = format!("/types/{i}");
            if t.values.len() != commodities {
                out.push(Diagnostic::new(format!("{path}/values"), format!("expected {commodities} entries")));
            } else if t.values.iter().any(|v| v.is_neg()) {
                out.push(Diagnostic::new(format!("{path}/values"), "valuations must be nonnegative"));
            }
            for (a, e) in t.trades.iter().enumerate() {
                if e.len() != commodities {
                    out.push(Diagnostic::new(format!("{path}/trades/{a}"), format!("expected {commodities} entries")));
                }
            }
            if !t.trades.iter().any(|e| e.iter().all(|v| v.is_zero())) {
                out.push(Diagnostic::new(format!("{path}/trades"), "no-trade (zero) column is missing"));
            }
        }
        out
    }

    pub fn commodities(&self) -> usize {
        self.commodities
    }

    pub fn traders(&self) -> &[TraderType<T>] {
        &self.traders
    }

    fn columns(&self) -> Vec<(usize, usize)> {
        self.traders
            .iter()
            .enumerate()
            .flat_map(|(i, t)| (0..t.trades.len()).map(move |a| (i, a)))
            .collect()
    }
}

impl<T: Scalar> GainsModel<T> for ExchangeEconomy<T> {
    fn num_types(&self) -> usize {
        self.traders.len()
    }

    fn gains_program(&self, x: &PopulationVector<T>) -> Result<GainsProgram<T>> {
        let n = self.traders.len();
        if x.len() != n {
            return Err(domain(format!("population has {} entries, the economy has {n} types", x.len())));
        }
        let cols = self.columns();
        let objective = cols.iter().map(|&(i, a)| self.traders[i].trade_value(a)).collect();
        let mut lp = LinearProgram::new(Sense::Maximize, objective)?;
        for i in 0..n {
            let row = cols.iter().map(|&(t, _)| if t == i { T::one() } else { T::zero() }).collect();
            lp.add_constraint(row, Relation::Eq, x.get(i).clone())?;
        }
        for c in 0..self.commodities {
            let row = cols.iter().map(|&(i, a)| self.traders[i].trades[a][c].clone()).collect();
            lp.add_constraint(row, Relation::Eq, T::zero())?;
        }
        let direct = (0..n)
            .map(|i| {
                cols.iter()
                    .map(|&(t, a)| if t == i { self.traders[i].trade_value(a) } else { T::zero() })
                    .collect()
            })
            .collect();
        let labels = cols.iter().map(|&(i, a)| format!("type{}:trade{}", i + 1, a)).collect();
        Ok(GainsProgram { n, lp, direct, labels })
    }
}

/// Market outcome at population `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalrasOutcome<T = Rational> {
    pub value: T,
    /// Per-capita mixture over each type's trades; `None` when `x_i = 0`.
    pub z: Vec<Option<Vec<T>>>,
    pub prices: Vec<T>,
    /// Per-capita values; `None` when `x_i = 0`.
    pub r: Vec<Option<T>>,
    /// Money transfers `v_i · E_i z_i - r_i`; `None` when `x_i = 0`.
    pub m: Vec<Option<T>>,
}

/// `F_V(x)`.
pub fn exchange_f_value<T: Scalar>(econ: &ExchangeEconomy<T>, x: &PopulationVector<T>) -> Result<T> {
    f_value(econ, x)
}

/// Walrasian outcome: the minimum-transfer saddle point for trades and
/// values, then the prices in the dual face closest (in L1) to the mean
/// valuation, ties broken lexicographically.
pub fn walras<T: Scalar>(econ: &ExchangeEconomy<T>, x: &PopulationVector<T>) -> Result<WalrasOutcome<T>> {
    let n = econ.traders.len();
    let ell = econ.commodities;
    let program = econ.gains_program(x)?;
    let value = crate::lp::solve(&program.lp)?.optimal()?.objective_value;
    let sp = select(&program, x, value.clone(), SaddleSelection::MinTransfer)?;

    // Prices consistent with r: E_i(a)·p >= v_i·E_i(a) - r_i for every trade.
    // Variables (p, s) with s_c >= |p_c - mean_c|.
    let support = x.support();
    let mean: Vec<T> = (0..ell)
        .map(|c| {
            let total = support
                .iter()
                .fold(T::zero(), |acc, &i| acc + econ.traders[i].values[c].clone());
            total / T::from_int(support.len() as i64)
        })
        .collect();
    let mut objective = vec![T::zero(); ell];
    objective.extend(std::iter::repeat_n(T::one(), ell));
    let mut lp = LinearProgram::new(Sense::Minimize, objective)?;
    for c in 0..ell {
        lp.set_free(c)?;
    }
    for (i, t) in econ.traders.iter().enumerate() {
        for (a, e) in t.trades.iter().enumerate() {
            let mut row = e.clone();
            row.extend(std::iter::repeat_n(T::zero(), ell));
            lp.add_constraint(row, Relation::Ge, t.trade_value(a) - sp.r[i].clone())?;
        }
    }
    for c in 0..ell {
        for sign in [T::one(), -T::one()] {
            let mut row = vec![T::zero(); 2 * ell];
            row[c] = -sign.clone();
            row[ell + c] = T::one();
            lp.add_constraint(row, Relation::Ge, -(sign.clone() * mean[c].clone()))?;
        }
    }
    let face = optimal_face_program(&lp)?;
    let point = lexicographic_min_point(&face, &(0..ell).collect::<Vec<_>>())?
        .ok_or_else(|| Error::Invariant("no prices support the selected payoffs".into()))?;
    let prices = point[..ell].to_vec();

    // Per-type mixtures and checks.
    let mut z = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    let mut offset = 0;
    let mut clearing = vec![T::zero(); ell];
    for (i, t) in econ.traders.iter().enumerate() {
        let w = &sp.y[offset..offset + t.trades.len()];
        offset += t.trades.len();
        for (a, level) in w.iter().enumerate() {
            for c in 0..ell {
                clearing[c] = clearing[c].clone() + level.clone() * t.trades[a][c].clone();
            }
        }
        let surplus = |a: usize| -> T {
            let net: Vec<T> = t.values.iter().zip(&prices).map(|(v, p)| v.clone() - p.clone()).collect();
            dot(&net, &t.trades[a])
        };
        let best = (0..t.trades.len()).map(surplus).fold(None::<T>, |acc, s| match acc {
            Some(b) if b >= s => Some(b),
            _ => Some(s),
        });
        for (a, level) in w.iter().enumerate() {
            if level.is_pos() && !best.as_ref().is_some_and(|b| b.approx_eq(&surplus(a))) {
                return Err(Error::Invariant(format!(
                    "type {} uses trade {a}, which is not a best response at the prices",
                    i + 1
                )));
            }
        }
        if x.get(i).is_pos() {
            z.push(Some(w.iter().map(|v| v.clone() / x.get(i).clone()).collect()));
            r.push(Some(sp.r[i].clone()));
            m.push(Some(sp.m[i].clone()));
        } else {
            z.push(None);
            r.push(None);
            m.push(None);
        }
    }
    if clearing.iter().any(|v| !v.is_negligible()) {
        return Err(Error::Invariant("market does not clear".into()));
    }
    Ok(WalrasOutcome { value, z, prices, r, m })
}

/// Range of the price of commodity `c` over the whole dual optimal face
/// (`None` for an unbounded side).
pub fn price_range<T: Scalar>(
    econ: &ExchangeEconomy<T>,
    x: &PopulationVector<T>,
    c: usize,
) -> Result<(Option<T>, Option<T>)> {
    if c >= econ.commodities {
        return Err(domain("commodity index out of range"));
    }
    let sub = subdifferential_f(econ, x)?;
    let p = sub.polytope();
    let mut f = vec![T::zero(); p.dim() + p.hidden()];
    f[p.dim() + c] = T::one();
    let unbounded_ok = |e: crate::lp::Extremum<T>| match e {
        crate::lp::Extremum::Value(v) => Ok(Some(v)),
        crate::lp::Extremum::Unbounded => Ok(None),
        crate::lp::Extremum::Empty => Err(domain("dual face is empty")),
    };
    // Probe the hidden coordinate through an equivalent visible program.
    let mut lifted = crate::lp::Polytope::new(p.dim() + p.hidden());
    for row in p.rows() {
        lifted.add(row.coeffs.clone(), row.relation, row.rhs.clone())?;
    }
    Ok((
        unbounded_ok(lifted.optimize(Sense::Minimize, &f)?)?,
        unbounded_ok(lifted.optimize(Sense::Maximize, &f)?)?,
    ))
}

/// Coalition game `v(S) = F_V(1_S)`: trades clear among members of `S`.
pub fn exchange_characteristic<T: Scalar>(econ: &ExchangeEconomy<T>) -> Result<CoalitionGame<T>> {
    restricted_game(econ)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeAnalysis<T = Rational> {
    pub gaps: EulerReport<T>,
    pub coalition_game: CoalitionGame<T>,
    pub totally_balanced: bool,
    /// Core equivalence at replication `k` for the derived coalition game.
    pub core_equivalent: bool,
}

pub fn exchange_euler_analysis<T: Scalar>(
    econ: &ExchangeEconomy<T>,
    x: &PopulationVector<T>,
    k: u64,
) -> Result<ExchangeAnalysis<T>> {
    let gaps = euler_report(econ, x, k)?;
    let coalition_game = exchange_characteristic(econ)?;
    let totally_balanced = is_totally_balanced(&coalition_game)?;
    let community = CommunityGame::from_coalition_game(&coalition_game)?;
    let core_equivalent = core_equivalence(&community, k)?;
    Ok(ExchangeAnalysis {
        gaps,
        coalition_game,
        totally_balanced,
        core_equivalent,
    })
}
