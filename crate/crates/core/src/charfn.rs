//! Characteristic functions derived from normal-form games, superadditive
//! covers and structural predicates on coalition games.
//!
//! The minimax value of a coalition `S` is the value of the zero-sum matrix
//! game in which `S` (correlating over its joint actions) plays against the
//! complement. In property-rights mode coalitions of three or more members
//! instead get exclusive access to their own activities, and the outsiders'
//! actions are resolved by an [`OutsiderRule`].

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::game::{
    profile_from_index, Coalition, CoalitionGame, Community, CommunityGame, NormalFormGame,
    Profile,
};
use crate::lp::{lexicographic_min_point, optimal_face_program, solve, LinearProgram, Relation, Sense};
use crate::scalar::{dot, Scalar};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CharFnMode {
    /// Minimax value for every coalition.
    #[default]
    Standard,
    /// Minimax for `|S| <= 2`, exclusive-access value for larger coalitions.
    PropertyRights,
}

/// How outsiders' actions are fixed when a coalition of three or more is
/// evaluated in property-rights mode.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum OutsiderRule {
    /// Outsiders play their minimax strategy against the coalition.
    Minimax,
    /// Outsiders play the profile most favourable to the coalition (lowest
    /// flat index among ties).
    #[default]
    Optimistic,
    /// Outsiders play their component of a fixed full profile.
    Baseline(Vec<usize>),
}

/// Optimal strategies of a zero-sum matrix game, row player maximizing.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGameSolution<T = Rational> {
    pub value: T,
    pub row_strategy: Vec<T>,
    pub col_strategy: Vec<T>,
}

/// Solve `max_p min_q p' M q` exactly. Both strategies are the
/// lexicographically smallest optimal ones.
pub fn solve_matrix_game<T: Scalar>(payoff: &[Vec<T>]) -> Result<MatrixGameSolution<T>> {
    let rows = payoff.len();
    let cols = payoff.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || payoff.iter().any(|r| r.len() != cols) {
        return Err(domain("payoff matrix must be nonempty and rectangular"));
    }

    // Row player: variables (p, v).
    let mut obj = vec![T::zero(); rows + 1];
    obj[rows] = T::one();
    let mut lp = LinearProgram::new(Sense::Maximize, obj)?;
    lp.set_free(rows)?;
    for b in 0..cols {
        let mut row: Vec<T> = (0..rows).map(|a| payoff[a][b].clone()).collect();
        row.push(-T::one());
        lp.add_constraint(row, Relation::Ge, T::zero())?;
    }
    let mut simplex = vec![T::one(); rows];
    simplex.push(T::zero());
    lp.add_constraint(simplex, Relation::Eq, T::one())?;
    let face = optimal_face_program(&lp)?;
    let mut p = lexicographic_min_point(&face, &(0..rows).collect::<Vec<_>>())?
        .ok_or_else(|| domain("matrix game has no optimal row strategy"))?;
    let value = p.pop().expect("value variable");

    // Column player: variables (q, w).
    let mut obj = vec![T::zero(); cols + 1];
    obj[cols] = T::one();
    let mut lp = LinearProgram::new(Sense::Minimize, obj)?;
    lp.set_free(cols)?;
    for a in 0..rows {
        let mut row = payoff[a].clone();
        row.push(-T::one());
        lp.add_constraint(row, Relation::Le, T::zero())?;
    }
    let mut simplex = vec![T::one(); cols];
    simplex.push(T::zero());
    lp.add_constraint(simplex, Relation::Eq, T::one())?;
    let face = optimal_face_program(&lp)?;
    let mut q = lexicographic_min_point(&face, &(0..cols).collect::<Vec<_>>())?
        .ok_or_else(|| domain("matrix game has no optimal column strategy"))?;
    q.pop();

    Ok(MatrixGameSolution {
        value,
        row_strategy: p,
        col_strategy: q,
    })
}

fn complement(g_n: usize, s: Coalition) -> Coalition {
    Coalition::grand(g_n).intersection(Coalition(!s.0))
}

fn joint_count<T: Scalar>(g: &NormalFormGame<T>, s: Coalition) -> usize {
    s.members().map(|i| g.action_counts()[i]).product()
}

/// Payoff matrix of `S` against its complement (rows: joint actions of `S`).
fn coalition_matrix<T: Scalar>(g: &NormalFormGame<T>, s: Coalition) -> Vec<Vec<T>> {
    let rest = complement(g.n(), s);
    let (r, c) = (joint_count(g, s), joint_count(g, rest));
    (0..r)
        .map(|a| (0..c).map(|b| g.coalition_payoff(s, g.merge(s, a, b))).collect())
        .collect()
}

fn check_coalition<T: Scalar>(g: &NormalFormGame<T>, s: Coalition) -> Result<()> {
    if s.is_empty() || !s.is_subset_of(Coalition::grand(g.n())) {
        return Err(domain("coalition must be a nonempty set of existing players"));
    }
    Ok(())
}

/// Minimax value of `S`. For the grand coalition this is the largest total
/// utility over all profiles; the returned strategies are then a pure
/// maximizing profile and an empty outsider strategy.
pub fn minimax_value<T: Scalar>(g: &NormalFormGame<T>, s: Coalition) -> Result<MatrixGameSolution<T>> {
    check_coalition(g, s)?;
    if s == Coalition::grand(g.n()) {
        let (best, value) = (0..g.num_profiles())
            .map(|k| (k, g.coalition_payoff(s, k)))
            .fold(None::<(usize, T)>, |acc, (k, v)| match acc {
                Some((bk, bv)) if bv >= v => Some((bk, bv)),
                _ => Some((k, v)),
            })
            .expect("at least one profile");
        let mut row = vec![T::zero(); g.num_profiles()];
        row[best] = T::one();
        return Ok(MatrixGameSolution {
            value,
            row_strategy: row,
            col_strategy: Vec::new(),
        });
    }
    solve_matrix_game(&coalition_matrix(g, s))
}

/// Characteristic function of `g`; `v(S)` is the best profile total of the
/// community `S` in [`community_from_normal_form`].
pub fn characteristic_function<T: Scalar>(
    g: &NormalFormGame<T>,
    mode: CharFnMode,
    rule: &OutsiderRule,
) -> Result<CoalitionGame<T>> {
    let cg = community_from_normal_form(g, mode, rule)?;
    let mut values = vec![T::zero(); 1 << g.n()];
    for com in cg.communities() {
        let best = com
            .profiles
            .iter()
            .map(Profile::total)
            .fold(T::zero(), T::max_of);
        values[com.members.index()] = best;
    }
    CoalitionGame::new(g.n(), values)
}

/// Community game of `g`: one community per nonempty coalition.
///
/// * `|S| <= 2` with outsiders: one profile, the members' expected utilities
///   at the lexicographically smallest minimax pair (sum `φ(S)`).
/// * Grand coalition of at most two players: one profile, a total-maximizing
///   lottery that splits the total as evenly as possible.
/// * Grand coalition of three or more: the raw utility table.
/// * Other coalitions of three or more: one profile per joint action, with
///   outsiders resolved by `rule` (property rights) or by their minimax
///   strategy (standard).
pub fn community_from_normal_form<T: Scalar>(
    g: &NormalFormGame<T>,
    mode: CharFnMode,
    rule: &OutsiderRule,
) -> Result<CommunityGame<T>> {
    let n = g.n();
    if let OutsiderRule::Baseline(b) = rule {
        if b.len() != n || b.iter().zip(g.action_counts()).any(|(a, m)| a >= m) {
            return Err(domain("baseline profile does not fit the game"));
        }
    }
    let grand = Coalition::grand(n);
    let communities: Result<Vec<Community<T>>> = grand
        .nonempty_subsets()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let profiles = if s == grand && n <= 2 {
                vec![balanced_grand_profile(g)?]
            } else if s == grand {
                (0..g.num_profiles())
                    .map(|k| lottery_profile(g, s, vec![(k, T::one())]))
                    .collect()
            } else if s.len() <= 2 {
                let sol = solve_matrix_game(&coalition_matrix(g, s))?;
                let mut lottery = Vec::new();
                for (a, pa) in sol.row_strategy.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                    for (b, qb) in sol.col_strategy.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
                        lottery.push((g.merge(s, a, b), pa.clone() * qb.clone()));
                    }
                }
                vec![lottery_profile(g, s, lottery)]
            } else {
                let effective = match mode {
                    CharFnMode::Standard => &OutsiderRule::Minimax,
                    CharFnMode::PropertyRights => rule,
                };
                resolved_profiles(g, s, effective)?
            };
            Ok(Community { members: s, profiles })
        })
        .collect();
    CommunityGame::new(n, communities?)
}

fn lottery_profile<T: Scalar>(g: &NormalFormGame<T>, s: Coalition, lottery: Vec<(usize, T)>) -> Profile<T> {
    let utilities = s
        .members()
        .map(|i| {
            lottery
                .iter()
                .fold(T::zero(), |acc, (k, p)| acc + p.clone() * g.utility(i, *k).clone())
        })
        .collect();
    Profile { utilities, lottery }
}

fn resolved_profiles<T: Scalar>(
    g: &NormalFormGame<T>,
    s: Coalition,
    rule: &OutsiderRule,
) -> Result<Vec<Profile<T>>> {
    let rest = complement(g.n(), s);
    let inside = joint_count(g, s);
    let outside = joint_count(g, rest);
    let minimax = match rule {
        OutsiderRule::Minimax => Some(solve_matrix_game(&coalition_matrix(g, s))?.col_strategy),
        _ => None,
    };
    let mut out = Vec::with_capacity(inside);
    for a in 0..inside {
        let lottery = match rule {
            OutsiderRule::Optimistic => {
                let mut best = 0;
                let mut best_value = g.coalition_payoff(s, g.merge(s, a, 0));
                for b in 1..outside {
                    let v = g.coalition_payoff(s, g.merge(s, a, b));
                    if v > best_value {
                        best = b;
                        best_value = v;
                    }
                }
                vec![(g.merge(s, a, best), T::one())]
            }
            OutsiderRule::Baseline(profile) => {
                let a_in = profile_from_index(&g.counts_of(s), a)?;
                let mut full = profile.clone();
                for (k, i) in s.members().enumerate() {
                    full[i] = a_in[k];
                }
                vec![(crate::game::profile_index(g.action_counts(), &full)?, T::one())]
            }
            OutsiderRule::Minimax => minimax
                .as_ref()
                .expect("computed above")
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(b, q)| (g.merge(s, a, b), q.clone()))
                .collect(),
        };
        out.push(lottery_profile(g, s, lottery));
    }
    Ok(out)
}

/// Total-maximizing lottery over full profiles whose expected utilities are
/// as equal as possible (lexicographically smallest among those).
fn balanced_grand_profile<T: Scalar>(g: &NormalFormGame<T>) -> Result<Profile<T>> {
    let grand = Coalition::grand(g.n());
    let k = g.num_profiles();
    let totals: Vec<T> = (0..k).map(|p| g.coalition_payoff(grand, p)).collect();
    // Variables: (t, π_0..π_{k-1}).
    let mut obj = vec![T::zero()];
    obj.extend(totals.iter().cloned());
    let mut lp = LinearProgram::new(Sense::Maximize, obj)?;
    let mut simplex = vec![T::zero()];
    simplex.extend(std::iter::repeat_n(T::one(), k));
    lp.add_constraint(simplex, Relation::Eq, T::one())?;
    if g.n() == 2 {
        let diff: Vec<T> = (0..k)
            .map(|p| g.utility(0, p).clone() - g.utility(1, p).clone())
            .collect();
        for sign in [T::one(), -T::one()] {
            let mut row = vec![T::one()];
            row.extend(diff.iter().map(|d| -(sign.clone() * d.clone())));
            lp.add_constraint(row, Relation::Ge, T::zero())?;
        }
    }
    let face = optimal_face_program(&lp)?;
    let point = lexicographic_min_point(&face, &(0..=k).collect::<Vec<_>>())?
        .ok_or_else(|| domain("no optimal lottery"))?;
    let lottery = point[1..]
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i, p.clone()))
        .collect();
    Ok(lottery_profile(g, grand, lottery))
}

/// `sup { Σ α_T v(T) : α >= 0, Σ α_T 1_T = 1_S }` over nonempty `T ⊆ S`.
pub fn superadditive_cover_value<T: Scalar>(cg: &CoalitionGame<T>, s: Coalition) -> Result<T> {
    if s.is_empty() {
        return Ok(T::zero());
    }
    if !s.is_subset_of(cg.grand()) {
        return Err(domain("coalition contains types outside the game"));
    }
    let columns: Vec<Coalition> = s.nonempty_subsets().collect();
    let obj = columns.iter().map(|t| cg.value(*t).clone()).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, obj)?;
    for i in s.members() {
        let row = columns
            .iter()
            .map(|t| if t.contains(i) { T::one() } else { T::zero() })
            .collect();
        lp.add_constraint(row, Relation::Eq, T::one())?;
    }
    Ok(solve(&lp)?.optimal()?.objective_value)
}

/// The superadditive cover as a coalition game.
pub fn cover<T: Scalar>(cg: &CoalitionGame<T>) -> Result<CoalitionGame<T>> {
    let values: Result<Vec<T>> = (0..1u32 << cg.n())
        .into_par_iter()
        .map(|s| superadditive_cover_value(cg, Coalition(s)))
        .collect();
    CoalitionGame::new(cg.n(), values?)
}

/// First disjoint pair `(S, T)` with `v(S ∪ T) < v(S) + v(T)`.
pub fn superadditivity_violation<T: Scalar>(cg: &CoalitionGame<T>) -> Option<(Coalition, Coalition)> {
    let grand = cg.grand();
    for s in grand.nonempty_subsets() {
        let rest = grand.intersection(Coalition(!s.0));
        for t in rest.nonempty_subsets() {
            if t.0 < s.0 {
                continue;
            }
            let joint = cg.value(s.union(t)).clone();
            if joint < cg.value(s).clone() + cg.value(t).clone() {
                return Some((s, t));
            }
        }
    }
    None
}

pub fn is_superadditive<T: Scalar>(cg: &CoalitionGame<T>) -> bool {
    superadditivity_violation(cg).is_none()
}

/// Coalitions where the cover strictly exceeds the game.
pub fn cover_gaps<T: Scalar>(cg: &CoalitionGame<T>) -> Result<Vec<Coalition>> {
    let cov = cover(cg)?;
    Ok(cg
        .grand()
        .nonempty_subsets()
        .filter(|s| !cov.value(*s).approx_eq(cg.value(*s)))
        .collect())
}

/// `true` iff the game equals its cover everywhere (totally balanced).
pub fn is_self_concavifying<T: Scalar>(cg: &CoalitionGame<T>) -> Result<bool> {
    Ok(cover_gaps(cg)?.is_empty())
}

/// The constant `c` when `Σ_i u_i(a) = c` for every profile.
pub fn is_constant_sum<T: Scalar>(g: &NormalFormGame<T>) -> Option<T> {
    let grand = Coalition::grand(g.n());
    let c = g.coalition_payoff(grand, 0);
    (1..g.num_profiles())
        .all(|k| g.coalition_payoff(grand, k).approx_eq(&c))
        .then_some(c)
}

/// Expected utility of each player under a lottery over profiles.
pub fn expected_utilities<T: Scalar>(g: &NormalFormGame<T>, lottery: &[(usize, T)]) -> Vec<T> {
    (0..g.n())
        .map(|i| {
            let probs: Vec<T> = lottery.iter().map(|(_, p)| p.clone()).collect();
            let utils: Vec<T> = lottery.iter().map(|(k, _)| g.utility(i, *k).clone()).collect();
            dot(&probs, &utils)
        })
        .collect()
}
