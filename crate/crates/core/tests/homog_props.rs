mod common;

use common::*;
use coopeuler::exchange::{exchange_f_value, walras};
use coopeuler::game::{CommunityGame, PopulationVector};
use coopeuler::homog::{
    discrete_euler_gap, f_value, first_valid_scale, infinitesimal_euler_gap, is_differentiable,
    one_sided_euler_test, saddle_equality_check, saddle_point, stabilization_index, subdifferential_f,
    GainsModel,
};
use coopeuler::scalar::dot;
use coopeuler::Rational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn pop(v: Vec<Rational>) -> PopulationVector {
    PopulationVector::new(v).unwrap()
}

fn game_and_x(seed: u64) -> (CommunityGame, PopulationVector) {
    let mut r = rng(seed);
    let n = 2 + (seed % 2) as usize;
    let g = random_community_game(&mut r, n);
    let x = pop(random_population(&mut r, n));
    (g, x)
}

/// One-sided derivative `F'(x; d)` from difference quotients only. For
/// polyhedral `F` the quotient is constant once the step is small enough;
/// the two steps must agree.
fn quotient_derivative<M: GainsModel<Rational>>(model: &M, x: &PopulationVector, d: &[Rational]) -> Rational {
    let f0 = f_value(model, x).unwrap();
    let quotient = |h: Rational| {
        let moved: Vec<Rational> = x.as_slice().iter().zip(d).map(|(a, b)| a.clone() + b.clone() * h.clone()).collect();
        (f_value(model, &pop(moved)).unwrap() - f0.clone()) / h
    };
    let (a, b) = (quotient(qr(1, 1 << 12)), quotient(qr(1, 1 << 13)));
    assert_eq!(a, b, "step not yet in the linear regime");
    a
}

fn unit(n: usize, i: usize, s: i64) -> Vec<Rational> {
    let mut e = vec![q(0); n];
    e[i] = q(s);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn positive_homogeneity(seed in any::<u64>(), lam in prop::sample::select(vec![(1, 1), (2, 1), (3, 1), (5, 1), (1, 2)])) {
        let (g, x) = game_and_x(seed);
        let l = qr(lam.0, lam.1);
        let fx = f_value(&g, &x).unwrap();
        prop_assert_eq!(f_value(&g, &x.scaled(&l).unwrap()).unwrap(), fx * l);
    }

    #[test]
    fn subadditivity(seed in any::<u64>()) {
        let (g, x) = game_and_x(seed);
        let mut r = rng(seed ^ 0x5eed);
        let y = pop(random_population(&mut r, x.len()));
        let sum = pop(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a.clone() + b.clone()).collect());
        prop_assert!(f_value(&g, &sum).unwrap() >= f_value(&g, &x).unwrap() + f_value(&g, &y).unwrap());
    }

    #[test]
    fn gaps_are_ordered(seed in any::<u64>()) {
        let (g, x) = game_and_x(seed);
        let inf = infinitesimal_euler_gap(&g, &x).unwrap();
        prop_assert!(!inf.is_negative());
        let k0 = first_valid_scale(&x);
        let gaps: Vec<Rational> = (k0..k0 + 4).map(|k| discrete_euler_gap(&g, &x, k).unwrap()).collect();
        for w in gaps.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(gaps.last().unwrap() >= &inf);
        if gaps.iter().any(|e| e.is_zero()) {
            prop_assert!(inf.is_zero());
            prop_assert!(subdifferential_f(&g, &x).unwrap().is_singleton().unwrap());
        }
    }

    #[test]
    fn smoothness_by_two_routes(seed in any::<u64>()) {
        let (g, x) = game_and_x(seed);
        let n = x.len();
        // route 1: coordinate probes of the dual face
        let probes = is_differentiable(&g, &x).unwrap();
        let inf = infinitesimal_euler_gap(&g, &x).unwrap();
        // route 2: difference quotients of F alone
        let mut smooth = true;
        let mut left_total = q(0);
        for i in x.support() {
            let right = quotient_derivative(&g, &x, &unit(n, i, 1));
            let left = -quotient_derivative(&g, &x, &unit(n, i, -1));
            smooth &= right == left;
            left_total += x.get(i).clone() * left;
        }
        prop_assert_eq!(probes.differentiable, smooth);
        prop_assert_eq!(inf.is_zero(), smooth);
        prop_assert_eq!(inf, left_total - f_value(&g, &x).unwrap());
        prop_assert_eq!(one_sided_euler_test(&g, &x).unwrap(), smooth);
    }

    #[test]
    fn stabilization_matches_smoothness(seed in any::<u64>()) {
        let (g, x) = game_and_x(seed);
        let inf = infinitesimal_euler_gap(&g, &x).unwrap();
        match stabilization_index(&g, &x, 1 << 12).unwrap() {
            Some(k) => {
                prop_assert_eq!(discrete_euler_gap(&g, &x, k).unwrap(), inf.clone());
                prop_assert_eq!(discrete_euler_gap(&g, &x, 2 * k + 1).unwrap(), inf);
            }
            None => prop_assert!(false, "no stabilization below the search limit"),
        }
    }

    #[test]
    fn saddle_identities(seed in any::<u64>()) {
        let (g, x) = game_and_x(seed);
        let sp = saddle_point(&g, &x).unwrap();
        prop_assert_eq!(dot(&sp.r, x.as_slice()), sp.value.clone());
        prop_assert_eq!(dot(&sp.direct, x.as_slice()), sp.value.clone());
        prop_assert!(sp.transfer_balance().is_zero());
        prop_assert!(subdifferential_f(&g, &x).unwrap().contains(&sp.r).unwrap());
        let (rx, f, h) = saddle_equality_check(&g, &x).unwrap();
        prop_assert!(rx == f && f == h);
    }

    #[test]
    fn exchange_homogeneity_and_subadditivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let types = 2 + (seed % 2) as usize;
        let e = random_exchange(&mut r, types, 2);
        let x = pop(random_population(&mut r, types));
        let y = pop(random_population(&mut r, types));
        let fx = exchange_f_value(&e, &x).unwrap();
        prop_assert!(!fx.is_negative());
        for l in [q(2), q(3), qr(1, 2)] {
            prop_assert_eq!(exchange_f_value(&e, &x.scaled(&l).unwrap()).unwrap(), fx.clone() * l);
        }
        let sum = pop(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a.clone() + b.clone()).collect());
        prop_assert!(exchange_f_value(&e, &sum).unwrap() >= fx.clone() + exchange_f_value(&e, &y).unwrap());
        // walras checks clearing and best responses itself
        let w = walras(&e, &x).unwrap();
        prop_assert_eq!(w.value, fx);
    }
}

#[test]
fn glove_at_two_one() {
    let g = CommunityGame::from_coalition_game(&glove()).unwrap();
    let x = pop(qs(&[2, 1]));
    assert_eq!(infinitesimal_euler_gap(&g, &x).unwrap(), q(0));
    let d = is_differentiable(&g, &x).unwrap();
    assert_eq!(d.gradient, Some(qs(&[0, 1])));
    assert_eq!(dot(&qs(&[0, 1]), x.as_slice()), f_value(&g, &x).unwrap());
}

#[test]
fn fixtures_keep_saddle_identities() {
    for (name, g) in community_fixtures() {
        for x in [vec![1, 1, 1], vec![2, 1, 3], vec![1, 0, 2]] {
            let x = pop(qs(&x[..g.n()]));
            let sp = saddle_point(&g, &x).unwrap();
            assert_eq!(dot(&sp.r, x.as_slice()), sp.value, "{name}");
            assert!(sp.transfer_balance().is_zero(), "{name}");
        }
    }
}
