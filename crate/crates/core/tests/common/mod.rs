#![allow(dead_code)]

use coopeuler::charfn::{CharFnMode, OutsiderRule};
use coopeuler::exchange::{ExchangeEconomy, TraderType};
use coopeuler::game::{Coalition, CoalitionGame, Community, CommunityGame, NormalFormGame};
use coopeuler::incentives::MechanismGame;
use coopeuler::scalar::Scalar;
use coopeuler::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn qr(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn qs(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&a| q(a)).collect()
}

pub fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| qs(r)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn glove() -> CoalitionGame {
    CoalitionGame::new(2, qs(&[0, 0, 0, 1])).unwrap()
}

pub fn majority() -> CoalitionGame {
    CoalitionGame::from_fn(3, |s| q((s.len() >= 2) as i64)).unwrap()
}

pub fn unanimity_12() -> CoalitionGame {
    CoalitionGame::from_fn(3, |s| q(Coalition::from_members([0, 1]).is_subset_of(s) as i64)).unwrap()
}

pub fn additive() -> CoalitionGame {
    CoalitionGame::from_fn(3, |s| s.members().map(|i| q(i as i64 + 1)).sum()).unwrap()
}

/// Three types: pairs {1,2}, {2,3}, {1,3} worth 2, 4, 4 (equal split), and
/// a grand activity paying (1, 1, 1).
pub fn three_type() -> CommunityGame {
    let one = |i| Community::new(Coalition::singleton(i), vec![qs(&[0])]);
    CommunityGame::new(
        3,
        vec![
            one(0),
            one(1),
            one(2),
            Community::new(Coalition::from_members([0, 1]), vec![qs(&[1, 1])]),
            Community::new(Coalition::from_members([1, 2]), vec![qs(&[2, 2])]),
            Community::new(Coalition::from_members([0, 2]), vec![qs(&[2, 2])]),
            Community::new(Coalition::grand(3), vec![qs(&[1, 1, 1])]),
        ],
    )
    .unwrap()
}

/// Two types who only gain together, with utilities `(u1, u2)`.
pub fn pair(u1: i64, u2: i64) -> CommunityGame {
    CommunityGame::new(
        2,
        vec![
            Community::new(Coalition::singleton(0), vec![qs(&[0])]),
            Community::new(Coalition::singleton(1), vec![qs(&[0])]),
            Community::new(Coalition::grand(2), vec![qs(&[u1, u2])]),
        ],
    )
    .unwrap()
}

pub fn pennies() -> NormalFormGame {
    NormalFormGame::bimatrix(mat(&[&[1, 0], &[0, 1]]), mat(&[&[0, 1], &[1, 0]])).unwrap()
}

pub fn battle() -> NormalFormGame {
    NormalFormGame::bimatrix(mat(&[&[1, 0], &[0, 0]]), mat(&[&[1, 0], &[0, 0]])).unwrap()
}

pub fn nf(g: NormalFormGame) -> MechanismGame {
    MechanismGame::NormalForm { game: g, mode: CharFnMode::Standard, rule: OutsiderRule::default() }
}

pub fn exchange_two_type() -> ExchangeEconomy {
    ExchangeEconomy::new(
        2,
        vec![
            TraderType { trades: vec![qs(&[0, 0]), qs(&[-1, 1])], values: qs(&[1, 3]) },
            TraderType { trades: vec![qs(&[0, 0]), qs(&[1, -1])], values: qs(&[3, 1]) },
        ],
    )
    .unwrap()
}

pub fn coalition_fixtures() -> Vec<(&'static str, CoalitionGame)> {
    vec![
        ("glove", glove()),
        ("majority", majority()),
        ("unanimity", unanimity_12()),
        ("additive", additive()),
    ]
}

pub fn community_fixtures() -> Vec<(&'static str, CommunityGame)> {
    let mut out: Vec<(&'static str, CommunityGame)> = coalition_fixtures()
        .into_iter()
        .map(|(name, g)| (name, CommunityGame::from_coalition_game(&g).unwrap()))
        .collect();
    out.push(("three-type", three_type()));
    out.push(("battle-pair", pair(1, 1)));
    out.push(("lopsided-pair", pair(1, 2)));
    out
}

pub fn random_coalition_game(rng: &mut ChaCha8Rng, n: usize) -> CoalitionGame {
    CoalitionGame::from_fn(n, |s| if s.is_empty() { q(0) } else { q(rng.gen_range(0..=6)) }).unwrap()
}

/// Community game with random profiles on a random family of coalitions
/// (singletons always present).
pub fn random_community_game(rng: &mut ChaCha8Rng, n: usize) -> CommunityGame {
    let mut coms = Vec::new();
    for s in Coalition::grand(n).nonempty_subsets() {
        if s.len() > 1 && rng.gen_bool(0.4) {
            continue;
        }
        let profiles = rng.gen_range(1..=2);
        let rows = (0..profiles)
            .map(|_| (0..s.len()).map(|_| qr(rng.gen_range(0..=8), rng.gen_range(1..=2))).collect())
            .collect();
        coms.push(Community::new(s, rows));
    }
    CommunityGame::new(n, coms).unwrap()
}

pub fn random_bimatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, constant_sum: bool) -> NormalFormGame {
    let mut u1 = vec![vec![q(0); cols]; rows];
    let mut u2 = vec![vec![q(0); cols]; rows];
    let total = rng.gen_range(4..=8);
    for a in 0..rows {
        for b in 0..cols {
            let x = rng.gen_range(0..=4);
            u1[a][b] = q(x);
            u2[a][b] = if constant_sum { q(total - x) } else { q(rng.gen_range(0..=6)) };
        }
    }
    NormalFormGame::bimatrix(u1, u2).unwrap()
}

pub fn random_exchange(rng: &mut ChaCha8Rng, types: usize, goods: usize) -> ExchangeEconomy {
    let traders = (0..types)
        .map(|_| {
            let mut trades = vec![vec![q(0); goods]];
            for _ in 0..rng.gen_range(1..=3) {
                trades.push((0..goods).map(|_| q(rng.gen_range(-2..=2))).collect());
            }
            TraderType { trades, values: (0..goods).map(|_| q(rng.gen_range(0..=4))).collect() }
        })
        .collect();
    ExchangeEconomy::new(goods, traders).unwrap()
}

pub fn random_population(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| qr(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect()
}
