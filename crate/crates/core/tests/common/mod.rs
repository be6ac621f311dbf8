#![allow(dead_code)]

use std::sync::Arc;

use grouplike::bibundle::Bibundle;
use grouplike::groupoid::random::random_groupoid;
use grouplike::groupoid::{FiniteGroupoid, GroupoidMorphism};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> Arc<FiniteGroupoid> {
    Arc::new(random_groupoid(rng, max_arrows))
}

/// A right principal `G`-`H` bibundle: the graph of a random functor with
/// its carrier shuffled. Every right principal bibundle is isomorphic to
/// one of these.
pub fn principal<R: Rng>(rng: &mut R, g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>) -> Bibundle {
    let functors = GroupoidMorphism::enumerate(g, h, 256);
    let phi = functors.choose(rng).expect("a constant functor always exists");
    let b = Bibundle::from_functor(g, h, phi).unwrap();
    let mut perm: Vec<usize> = (0..b.len()).collect();
    perm.shuffle(rng);
    b.permute(&perm)
}
