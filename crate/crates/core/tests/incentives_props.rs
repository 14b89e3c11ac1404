mod common;

use common::*;
use coopeuler::game::{CommunityGame, PopulationVector};
use coopeuler::homog::discrete_euler_gap;
use coopeuler::incentives::{
    best_misreport, is_incentive_compatible, misreport_candidates, ntu_fixed_point, ntu_map, truthful_outcome,
    MechanismGame, NtuOptions, NtuStatus, PaymentRule, WeightVector,
};
use coopeuler::scalar::{dot, sum};
use coopeuler::Rational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn rules() -> [PaymentRule; 3] {
    [PaymentRule::MarginalContribution(1), PaymentRule::ShapleyOfCover, PaymentRule::CoreSelection]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn budget_identity(seed in any::<u64>(), n in 2usize..=3) {
        let g = MechanismGame::Community(random_community_game(&mut rng(seed), n));
        let x = PopulationVector::ones(n);
        for rule in rules() {
            let o = truthful_outcome(&g, rule, &x).unwrap();
            prop_assert!(o.budget_residual(&x).is_zero());
            prop_assert_eq!(dot(&o.reported, x.as_slice()), o.value.clone());
            // truthful reports: realized utility is the payoff
            prop_assert_eq!(&o.realized, &o.r);
        }
    }

    #[test]
    fn marginal_deficit_is_the_gap(seed in any::<u64>(), n in 2usize..=3, k in 1u64..=3) {
        let cg = random_community_game(&mut rng(seed), n);
        let x = PopulationVector::ones(n);
        let o = truthful_outcome(&MechanismGame::Community(cg.clone()), PaymentRule::MarginalContribution(k), &x).unwrap();
        prop_assert_eq!(o.deficit, discrete_euler_gap(&cg, &x, k).unwrap());
    }

    #[test]
    fn weight_map_preserves_the_simplex(raw in prop::collection::vec(0i64..=9, 2..=5), m in prop::collection::vec(-9i64..=9, 5)) {
        prop_assume!(raw.iter().any(|&v| v > 0));
        let total: i64 = raw.iter().sum();
        let gamma: Vec<Rational> = raw.iter().map(|&v| qr(v, total)).collect();
        let m: Vec<Rational> = m.into_iter().take(gamma.len()).map(|v| qr(v, 3)).collect();
        let next = ntu_map(&gamma, &m);
        prop_assert_eq!(sum(&next), q(1));
        prop_assert!(next.iter().all(|v| !v.is_negative()));
        prop_assert!(WeightVector::new(next).is_ok());
    }
}

#[test]
fn zero_gap_games_resist_misreports_under_marginals() {
    let additive = MechanismGame::Community(CommunityGame::from_coalition_game(&additive()).unwrap());
    for (name, g, n) in [("pennies", nf(pennies()), 2), ("additive", additive, 3)] {
        let x = PopulationVector::ones(n);
        let cg = g.community().unwrap();
        assert!(discrete_euler_gap(&cg, &x, 1).unwrap().is_zero(), "{name}");
        for s in is_incentive_compatible(&g, PaymentRule::MarginalContribution(1), &[], &x).unwrap() {
            assert!(s.compatible_within_family(), "{name}: player {} gains {}", s.player, s.gain);
        }
    }
}

#[test]
fn underpaid_player_finds_a_profitable_report() {
    // Core payments give player 1 nothing although its marginal is 2.
    let g = nf(battle());
    let x = PopulationVector::ones(2);
    let o = truthful_outcome(&g, PaymentRule::CoreSelection, &x).unwrap();
    assert_eq!(o.r, qs(&[0, 2]));
    let family = misreport_candidates(&g.utility_row(0), &[]);
    let s = best_misreport(&g, 0, PaymentRule::CoreSelection, &family, &x).unwrap();
    assert!(s.gain.is_positive());
    assert_eq!(s.witness.as_ref().map(Vec::len), Some(4));
}

#[test]
fn user_rows_are_searched() {
    let g = nf(battle());
    let x = PopulationVector::ones(2);
    let user = vec![vec![qs(&[0, 0, 0, 0])]];
    let v = is_incentive_compatible(&g, PaymentRule::CoreSelection, &user, &x).unwrap();
    assert_eq!(v[0].candidates, 21);
    assert_eq!(v[1].candidates, 20);
}

#[test]
fn ntu_random_runs_never_claim_false_convergence() {
    let mut r = rng(99);
    for _ in 0..10 {
        let n = r.gen_range(2..=3);
        let g = random_community_game(&mut r, n);
        let opts = NtuOptions { max_iter: 30, ..NtuOptions::default() };
        let out = ntu_fixed_point(&g, &PopulationVector::ones(n), &WeightVector::uniform(n), &opts).unwrap();
        let worst = out.m.iter().map(|v| v.abs()).max().unwrap();
        match out.status {
            NtuStatus::Converged => assert!(worst <= opts.tol),
            _ => assert!(worst > opts.tol),
        }
        assert_eq!(sum(&out.gamma), q(1));
    }
}
