use std::collections::BTreeSet;

use fairgame::arith::{factorize_big, factorize_u64, is_prime_u64, sqrts_mod};
use fairgame::games::{eval_fair_poly, extend_game, is_half, simulate_game, win_probability};
use fairgame::ternary::{
    c3_contains, count_max_coordinate, games_with_max_coordinate, to_lorentz, TernaryGame,
};
use fairgame::tree::{self, EnumerationBound};
use fairgame::verify::{scanned_roots, vertex_violation};
use fairgame::{Exec, GameBag, SolutionVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

/// Follows `path` down from a root, taking child `i mod #children` at each step.
fn descend(root: &SolutionVector, path: &[usize]) -> SolutionVector {
    let mut x = root.clone();
    for &i in path {
        let kids = tree::children(&x);
        if kids.is_empty() {
            break;
        }
        x = kids[i % kids.len()].clone();
    }
    x
}

fn random_vertex() -> impl Strategy<Value = SolutionVector> {
    (
        3usize..=5,
        any::<prop::sample::Index>(),
        prop::collection::vec(0usize..8, 0..7),
    )
        .prop_map(|(n, pick, path)| {
            let roots = scanned_roots(n, 2);
            descend(&roots[pick.index(roots.len())], &path)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moves_are_involutions(x in random_vertex()) {
        let sign = x.sign();
        for k in 0..x.len() {
            let (y, back) = x.neighbor_move(k).unwrap();
            prop_assert_eq!(y.neighbor(back).unwrap(), x.clone());
            prop_assert_eq!(y.sign(), sign);
            prop_assert!((&x.coords()[k] + x.jump_value(k).unwrap()).is_odd());
        }
        prop_assert_eq!(vertex_violation(&x), None);
    }

    #[test]
    fn parent_child_consistency(x in random_vertex()) {
        for c in tree::children(&x) {
            prop_assert_eq!(tree::parent(&c), Some(x.clone()));
            prop_assert!(c.height() > x.height());
        }
    }

    #[test]
    fn half_probability_iff_fair(counts in prop::collection::vec(0u64..40, 2..6)) {
        prop_assume!(counts.iter().sum::<u64>() >= 2);
        let bag = GameBag::from_u64(&counts);
        let p = win_probability(&bag).unwrap();
        let f = eval_fair_poly(&ints(&counts.iter().map(|&c| c as i64).collect::<Vec<_>>())).unwrap();
        prop_assert_eq!(is_half(&p), f.is_zero());
    }

    #[test]
    fn modular_roots_match_scan(half in 0u64..5000, a in -20_000i64..20_000) {
        let n = 2 * half + 1;
        let mut want: Vec<u64> = (0..n)
            .filter(|&x| (x as i128 * x as i128 - a as i128).rem_euclid(n as i128) == 0)
            .collect();
        want.sort();
        let mut got = sqrts_mod(a, n).unwrap();
        got.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn factorizations_multiply_back(n in 1u64..u64::MAX) {
        let f = factorize_u64(n).unwrap();
        prop_assert_eq!(f.product(), BigUint::from(n));
        for (p, _) in f.to_u64_factors().unwrap() {
            prop_assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn big_factorizations_multiply_back(a in 2u64..1 << 40, b in 2u64..1 << 40, c in 2u64..1 << 20) {
        let n = BigUint::from(a) * b * c;
        let f = factorize_big(&n);
        prop_assert_eq!(f.product(), n);
    }

    #[test]
    fn reflection_commutes_with_children(path in prop::collection::vec(0usize..2, 0..8)) {
        let x = descend(&SolutionVector::zero(3), &path);
        let y = tree::reflect(&x);
        prop_assert_eq!(tree::reflect(&y), x.clone());
        let mut mapped: Vec<_> = tree::children(&x).iter().map(tree::reflect).collect();
        mapped.sort();
        prop_assert_eq!(tree::children(&y), mapped);
    }

    #[test]
    fn lorentz_images_are_congruent(path in prop::collection::vec(0usize..2, 0..10), neg in any::<bool>()) {
        let mut x = descend(&SolutionVector::zero(3), &path);
        if neg {
            x = tree::reflect(&x);
        }
        let w = to_lorentz(&x).unwrap();
        prop_assert_eq!(w.structural_failure(), None);
        prop_assert_eq!(fairgame::ternary::from_lorentz(&w).unwrap(), x);
    }

    #[test]
    fn addresses_round_trip(path in "[LR]{0,12}") {
        let g = TernaryGame::from_address(&path).unwrap();
        prop_assert_eq!(g.address().unwrap(), path.clone());
        prop_assert_eq!(g.depth(), Some(path.len() as u32));
    }
}

#[test]
fn extensions() {
    let (a, b) = extend_game(&ints(&[1, 3])).unwrap();
    assert_eq!(a, SolutionVector::from_i64(&[0, 1, 3]).unwrap());
    assert_eq!(b, SolutionVector::from_i64(&[1, 3, 9]).unwrap());
    let (a, b) = extend_game(&ints(&[3, 6])).unwrap();
    assert_eq!(a, SolutionVector::from_i64(&[0, 3, 6]).unwrap());
    assert_eq!(b, SolutionVector::from_i64(&[3, 6, 19]).unwrap());
}

#[test]
fn positive_roots_are_distinct_and_apart() {
    let roots: Vec<SolutionVector> = (0..100).map(|a| tree::r_plus(&ints(&[a]))).collect();
    let set: BTreeSet<_> = roots.iter().cloned().collect();
    assert_eq!(set.len(), roots.len());
    for r in &roots {
        assert!(tree::is_root(r), "{r}");
        for nb in r.neighbors() {
            assert!(!set.contains(&nb), "{r} is adjacent to {nb}");
        }
    }
    for a in 0..20 {
        let r = tree::r_minus(&ints(&[a]));
        assert!(tree::is_root(&r) && r.sum() < &BigInt::from(-1), "{r}");
    }
}

#[test]
fn fair_games_are_parametrized() {
    let bound = EnumerationBound::max_depth(8);
    for node in tree::enumerate_component(&SolutionVector::zero(3), bound) {
        let t: Vec<u64> = node
            .vector
            .coords()
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect();
        for &c in &t {
            assert!(c3_contains(c), "{c} from {}", node.vector);
        }
        if t[2] > 1 && t[1] != t[2] {
            let game = TernaryGame::from_solution(&node.vector).unwrap();
            assert!(
                games_with_max_coordinate(t[2]).unwrap().contains(&game),
                "{}",
                node.vector
            );
        }
    }
}

#[test]
fn nontrivial_tree_is_full_binary() {
    let bound = EnumerationBound::max_depth(10);
    for node in tree::enumerate_component(&SolutionVector::from_i64(&[0, 1, 3]).unwrap(), bound) {
        let kids = tree::children(&node.vector);
        assert_eq!(kids.len(), 2, "{}", node.vector);
        for k in kids {
            let c = k.coords();
            assert!(c[0] < c[1] && c[1] < c[2], "{k}");
        }
    }
}

#[test]
fn harvested_coordinates() {
    let mut seen = BTreeSet::new();
    seen.extend([0u64, 1]);
    for c in 2..=200 {
        if c3_contains(c) {
            for g in games_with_max_coordinate(c).unwrap() {
                seen.extend(g.triple().iter().map(|v| v.to_u64().unwrap()));
            }
        }
    }
    let members: BTreeSet<u64> = (0..=200).filter(|&c| c3_contains(c)).collect();
    assert_eq!(seen, members);
}

#[test]
fn fixmax_against_listing() {
    for c in 2..=3000 {
        if c3_contains(c) {
            let listed = games_with_max_coordinate(c).unwrap().len() as u64;
            assert_eq!(count_max_coordinate(c).unwrap(), listed, "c = {c}");
        }
    }
}

#[test]
fn simulation_independent_of_execution() {
    let bag = GameBag::from_u64(&[1, 3, 9]);
    let a = simulate_game(&bag, 300_000, 7, Exec::Sequential).unwrap();
    let b = simulate_game(&bag, 300_000, 7, Exec::Parallel).unwrap();
    assert_eq!(a.wins, b.wins);
}

#[test]
fn parallel_and_sequential_collections_agree() {
    for root in scanned_roots(4, 2) {
        let bound = EnumerationBound::max_height(2000u32);
        let seq = tree::collect_component(&root, &bound, Exec::Sequential);
        let par = tree::collect_component(&root, &bound, Exec::Parallel);
        let iter: Vec<_> = tree::enumerate_component(&root, bound.clone()).collect();
        assert_eq!(seq, par);
        assert_eq!(seq, iter);
    }
}
