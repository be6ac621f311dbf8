use std::collections::HashMap;
use std::sync::Arc;

use super::Bibundle;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupAction, GroupSpec, GroupoidMorphism};

/// A groupoid with multiplication, unit and inverse bibundles.
#[derive(Clone, Debug)]
pub struct StackyData {
    pub name: String,
    pub g: Arc<FiniteGroupoid>,
    pub em: Bibundle,
    pub ee: Bibundle,
    pub einv: Bibundle,
}

/// The group's elements as a groupoid with identities only; the structure
/// bibundles are graphs of the group maps.
pub fn trivial_group_family(group: &GroupSpec) -> StackyData {
    let n = group.order();
    let g = Arc::new(FiniteGroupoid::trivial_groupoid(group.labels()));
    let gg = Arc::new(g.product(&g));
    let one = Arc::new(FiniteGroupoid::terminal());
    let mul: Vec<usize> = (0..n * n).map(|i| group.mul(i / n, i % n)).collect();
    let m = GroupoidMorphism { on_objects: mul.clone(), on_arrows: mul };
    let e = GroupoidMorphism { on_objects: vec![group.identity()], on_arrows: vec![group.identity()] };
    let inv: Vec<usize> = (0..n).map(|a| group.inverse(a)).collect();
    let i = GroupoidMorphism { on_objects: inv.clone(), on_arrows: inv };
    StackyData {
        name: format!("trivial groupoid on {}", group.summary()),
        em: Bibundle::from_functor(&gg, &g, &m).expect("multiplication is a functor"),
        ee: Bibundle::from_functor(&one, &g, &e).expect("unit is a functor"),
        einv: Bibundle::from_functor(&g, &g, &i).expect("inverse is a functor"),
        g,
    }
}

/// An abelian group over a point. Multiplication and inversion are functors
/// only in the abelian case; otherwise `NotAFunctor`.
pub fn group_family(group: &GroupSpec) -> Result<StackyData> {
    let n = group.order();
    let g = Arc::new(FiniteGroupoid::group_as_groupoid(group));
    let gg = Arc::new(g.product(&g));
    let one = Arc::new(FiniteGroupoid::terminal());
    let m = GroupoidMorphism::from_group_hom((0..n * n).map(|i| group.mul(i / n, i % n)).collect());
    let e = GroupoidMorphism::from_group_hom(vec![group.identity()]);
    let i = GroupoidMorphism::from_group_hom((0..n).map(|a| group.inverse(a)).collect());
    Ok(StackyData {
        name: format!("B{}", group.summary()),
        em: Bibundle::from_functor(&gg, &g, &m)?,
        ee: Bibundle::from_functor(&one, &g, &e)?,
        einv: Bibundle::from_functor(&g, &g, &i)?,
        g,
    })
}

/// `Z3` acting on `Z6` by `k·p = p + 2k`, a finite stand-in for a quotient
/// stack that is a group only after passing to orbits (`Z6/2Z6 = Z2`).
///
/// `Em` has carrier `{(x, y, z) : x + y − z ∈ {0, 2, 4}}`, the fibered
/// product over the quotient; `Ee` is `{z ∈ {0, 2, 4}}`; `Einv` is
/// `{(x, z) : x + z ∈ {0, 2, 4}}`.
pub fn cyclic_quotient_family() -> StackyData {
    const N: usize = 6;
    let action = GroupAction::cyclic_translation(3, N, 2);
    let g = Arc::new(FiniteGroupoid::action_groupoid(&action).expect("translation action"));
    let gg = Arc::new(g.product(&g));
    let one = Arc::new(FiniteGroupoid::terminal());
    // Arrow (a, p) of the action groupoid has index a·6 + p, l = p + 2a, r = p.
    let arrow = |a: usize, p: usize| a * N + p;
    let even = |v: usize| v % 2 == 0;

    let em = {
        let triples: Vec<(usize, usize, usize)> = (0..N)
            .flat_map(|x| (0..N).flat_map(move |y| (0..N).map(move |z| (x, y, z))))
            .filter(|&(x, y, z)| even((x + y + N - z) % N))
            .collect();
        let index: HashMap<_, _> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        let na = g.n_arrows();
        for (i, &(x, y, z)) in triples.iter().enumerate() {
            for a in 0..3 {
                for b in 0..3 {
                    let pair = arrow(a, x) * na + arrow(b, y);
                    act_l.insert((pair, i), index[&((x + 2 * a) % N, (y + 2 * b) % N, z)]);
                }
            }
            for c in 0..3 {
                let w = (z + N - (2 * c) % N) % N;
                act_r.insert((i, arrow(c, w)), index[&(x, y, w)]);
            }
        }
        Bibundle::from_parts(
            gg.clone(),
            g.clone(),
            triples.iter().map(|&(x, y, z)| format!("({x},{y},{z})")).collect(),
            triples.iter().map(|&(x, y, _)| x * N + y).collect(),
            triples.iter().map(|&(_, _, z)| z).collect(),
            act_l,
            act_r,
        )
        .expect("Em tables in range")
    };

    let ee = {
        let points: Vec<usize> = (0..N).filter(|&z| even(z)).collect();
        let pos = |z: usize| points.iter().position(|&p| p == z).unwrap();
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        for (i, &z) in points.iter().enumerate() {
            act_l.insert((0, i), i);
            for c in 0..3 {
                let w = (z + N - (2 * c) % N) % N;
                act_r.insert((i, arrow(c, w)), pos(w));
            }
        }
        Bibundle::from_parts(
            one.clone(),
            g.clone(),
            points.iter().map(|z| z.to_string()).collect(),
            vec![0; points.len()],
            points.clone(),
            act_l,
            act_r,
        )
        .expect("Ee tables in range")
    };

    let einv = {
        let pairs: Vec<(usize, usize)> =
            (0..N).flat_map(|x| (0..N).map(move |z| (x, z))).filter(|&(x, z)| even(x + z)).collect();
        let index: HashMap<_, _> = pairs.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut act_l = HashMap::new();
        let mut act_r = HashMap::new();
        for (i, &(x, z)) in pairs.iter().enumerate() {
            for a in 0..3 {
                act_l.insert((arrow(a, x), i), index[&((x + 2 * a) % N, z)]);
            }
            for c in 0..3 {
                let w = (z + N - (2 * c) % N) % N;
                act_r.insert((i, arrow(c, w)), index[&(x, w)]);
            }
        }
        Bibundle::from_parts(
            g.clone(),
            g.clone(),
            pairs.iter().map(|&(x, z)| format!("({x},{z})")).collect(),
            pairs.iter().map(|&(x, _)| x).collect(),
            pairs.iter().map(|&(_, z)| z).collect(),
            act_l,
            act_r,
        )
        .expect("Einv tables in range")
    };

    StackyData { name: "Z3 acting on Z6 by translation by 2".into(), g, em, ee, einv }
}

/// Single-entry corruption of one of the bibundle's tables, chosen by
/// `seed`. Returns the mutated bibundle and a description of the change.
pub fn mutate_entry(b: &Bibundle, seed: u64) -> Result<(Bibundle, String)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = b.len();
    if n < 2 {
        return Err(Error::InvalidBibundle("carrier too small to mutate".into()));
    }
    let (left, right, carrier, mut lm, mut rm, mut act_l, mut act_r) = b.clone().into_parts();
    let description;
    match rng.gen_range(0..4) {
        0 if left.n_objects() > 1 => {
            let m = rng.gen_range(0..n);
            let old = lm[m];
            lm[m] = (old + rng.gen_range(1..left.n_objects())) % left.n_objects();
            description = format!("lM({}) changed", carrier[m]);
        }
        1 if right.n_objects() > 1 => {
            let m = rng.gen_range(0..n);
            let old = rm[m];
            rm[m] = (old + rng.gen_range(1..right.n_objects())) % right.n_objects();
            description = format!("rM({}) changed", carrier[m]);
        }
        2 => {
            let mut keys: Vec<_> = act_l.keys().copied().collect();
            keys.sort_unstable();
            let key = keys[rng.gen_range(0..keys.len())];
            let old = act_l[&key];
            act_l.insert(key, (old + rng.gen_range(1..n)) % n);
            description = format!("left action at ({}, {}) changed", left.arrow_label(key.0), carrier[key.1]);
        }
        _ => {
            let mut keys: Vec<_> = act_r.keys().copied().collect();
            keys.sort_unstable();
            let key = keys[rng.gen_range(0..keys.len())];
            let old = act_r[&key];
            act_r.insert(key, (old + rng.gen_range(1..n)) % n);
            description = format!("right action at ({}, {}) changed", carrier[key.0], right.arrow_label(key.1));
        }
    }
    Ok((Bibundle::from_parts(left, right, carrier, lm, rm, act_l, act_r)?, description))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bibundle::stacky_group_check;

    #[test]
    fn trivial_z2_passes() {
        let d = trivial_group_family(&GroupSpec::cyclic(2));
        let r = stacky_group_check(&d.g, &d.em, &d.ee, &d.einv).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn bz3_passes() {
        let d = group_family(&GroupSpec::cyclic(3)).unwrap();
        let r = stacky_group_check(&d.g, &d.em, &d.ee, &d.einv).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn cyclic_quotient_passes() {
        let d = cyclic_quotient_family();
        assert_eq!(d.em.len(), 108);
        let r = stacky_group_check(&d.g, &d.em, &d.ee, &d.einv).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn wrong_inverse_fails() {
        // Identity in place of inversion on Z3.
        let d = trivial_group_family(&GroupSpec::cyclic(3));
        let bad = Bibundle::identity(&d.g);
        let r = stacky_group_check(&d.g, &d.em, &d.ee, &bad).unwrap();
        assert!(!r.passed());
        let names: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["left inverse", "right inverse"]);
    }

    #[test]
    fn mutated_em_fails() {
        let d = trivial_group_family(&GroupSpec::cyclic(3));
        for seed in 0..5 {
            let (em, what) = mutate_entry(&d.em, seed).unwrap();
            let r = stacky_group_check(&d.g, &em, &d.ee, &d.einv).unwrap();
            assert!(!r.passed(), "mutation {what} went unnoticed");
            assert!(r.failures().all(|c| c.witness.is_some()));
        }
    }
}
