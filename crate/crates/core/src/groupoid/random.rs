//! Seeded random finite groupoids for property tests and sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{FiniteGroupoid, GroupAction, GroupSpec};

/// A permutation of `0..m` whose cycle lengths all divide `n`.
fn permutation_of_order_dividing<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut points: Vec<usize> = (0..m).collect();
    points.shuffle(rng);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut rest = &points[..];
    while !rest.is_empty() {
        let fits: Vec<usize> = divisors.iter().copied().filter(|&d| d <= rest.len()).collect();
        let len = *fits.choose(rng).unwrap();
        let (cycle, tail) = rest.split_at(len);
        for i in 0..len {
            perm[cycle[i]] = cycle[(i + 1) % len];
        }
        rest = tail;
    }
    perm
}

/// `Z_n` acting on `m` points through a random permutation, `n·m ≤ max_arrows`.
pub fn random_action_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FiniteGroupoid {
    let max_arrows = max_arrows.max(1);
    let n = rng.gen_range(1..=max_arrows.min(4));
    let m = rng.gen_range(1..=(max_arrows / n).max(1));
    let sigma = permutation_of_order_dividing(rng, n, m);
    let mut act = vec![(0..m).collect::<Vec<_>>()];
    for a in 1..n {
        let prev: &Vec<usize> = &act[a - 1];
        act.push(prev.iter().map(|&p| sigma[p]).collect());
    }
    let carrier = (0..m).map(|p| format!("p{p}")).collect();
    let action = GroupAction::new(GroupSpec::cyclic(n), carrier, act).expect("cyclic permutation action");
    FiniteGroupoid::action_groupoid(&action).expect("valid action")
}

/// A disjoint union of one or two random pieces, each an action groupoid or
/// a pair groupoid, with at most `max_arrows` arrows in total.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FiniteGroupoid {
    let piece = |rng: &mut R, budget: usize| {
        if budget >= 4 && rng.gen_bool(0.25) {
            let k = if budget >= 9 && rng.gen_bool(0.5) { 3 } else { 2 };
            let pts: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
            FiniteGroupoid::pair_groupoid(&pts)
        } else {
            random_action_groupoid(rng, budget)
        }
    };
    let first = piece(rng, max_arrows);
    let left = max_arrows.saturating_sub(first.n_arrows());
    if left >= 1 && rng.gen_bool(0.4) {
        first.disjoint_union(&piece(rng, left))
    } else {
        first
    }
}
