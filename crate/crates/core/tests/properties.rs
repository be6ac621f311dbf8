mod common;

use grouplike::bibundle::{find_biequivariant_iso, Bibundle};
use grouplike::circlegeom::{bisection_translate, compose_circles, TorusCircle};
use grouplike::convalg::{random_element, AlgebraElement};
use grouplike::nctorus::{class_canonicalize, random_nct_element, tensor_classify, zero_branch, ModuleClass};
use grouplike::scalars::{rat, Angle};
use grouplike::symprel::{random_lagrangian, random_symplectic_space, SympSpace};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_angle<R: Rng>(rng: &mut R) -> Angle {
    let r = |rng: &mut R| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let mut a = Angle::new(r(rng), r(rng), r(rng));
    for name in ["a1", "a2"] {
        if rng.gen_bool(0.5) {
            a = a.with_symbol(name, r(rng));
        }
    }
    a
}

fn random_class<R: Rng>(rng: &mut R) -> ModuleClass {
    loop {
        let p = rng.gen_range(-6i64..=6);
        let q = rng.gen_range(-6i64..=6);
        if p.gcd(&q) == 1 {
            let alpha = Angle::lambda(rat(rng.gen_range(-3..=3), 1))
                + Angle::two_pi(rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
                + Angle::symbol(if rng.gen_bool(0.5) { "a1" } else { "a2" });
            return ModuleClass::new(p, q, alpha);
        }
    }
}

fn canonical_components(c1: &TorusCircle, c2: &TorusCircle) -> Vec<(ModuleClass, u64)> {
    let mut out: Vec<(ModuleClass, u64)> = compose_circles(c1, c2)
        .into_iter()
        .map(|c| (class_canonicalize(&c.circle.class()).unwrap(), c.winding_multiplicity))
        .collect();
    out.sort_by_key(|(c, m)| (c.p, c.q, c.alpha.to_string(), *m));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bibundle_composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h, k, l) = (common::groupoid(&mut r, 6), common::groupoid(&mut r, 6), common::groupoid(&mut r, 6), common::groupoid(&mut r, 6));
        let a = common::principal(&mut r, &g, &h);
        let b = common::principal(&mut r, &h, &k);
        let c = common::principal(&mut r, &k, &l);
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        let iso = find_biequivariant_iso(&lhs, &rhs).unwrap().expect("associator");
        prop_assert!(iso.verify(&lhs, &rhs));
    }

    #[test]
    fn identity_bibundles_are_units(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h) = (common::groupoid(&mut r, 8), common::groupoid(&mut r, 8));
        let m = common::principal(&mut r, &g, &h);
        let left = Bibundle::identity(&g).compose(&m).unwrap();
        let right = m.compose(&Bibundle::identity(&h)).unwrap();
        prop_assert!(find_biequivariant_iso(&left, &m).unwrap().is_some());
        prop_assert!(find_biequivariant_iso(&right, &m).unwrap().is_some());
    }

    #[test]
    fn principal_bibundles_compose_to_principal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h, k) = (common::groupoid(&mut r, 8), common::groupoid(&mut r, 8), common::groupoid(&mut r, 8));
        let mn = common::principal(&mut r, &g, &h).compose(&common::principal(&mut r, &h, &k)).unwrap();
        prop_assert!(mn.validate().is_valid());
        prop_assert!(mn.is_right_principal().unwrap().principal);
    }

    #[test]
    fn convolution_is_associative_and_unital(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::groupoid(&mut r, 10);
        let (a, b, c) = (random_element(&mut r, &g), random_element(&mut r, &g), random_element(&mut r, &g));
        let lhs = a.convolve(&b).unwrap().convolve(&c).unwrap();
        let rhs = a.convolve(&b.convolve(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let one = AlgebraElement::unit(&g);
        prop_assert_eq!(one.convolve(&a).unwrap(), a.clone());
        prop_assert_eq!(a.convolve(&one).unwrap(), a);
    }

    #[test]
    fn star_reverses_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::groupoid(&mut r, 10);
        let (a, b) = (random_element(&mut r, &g), random_element(&mut r, &g));
        prop_assert_eq!(a.convolve(&b).unwrap().star(), b.star().convolve(&a.star()).unwrap());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn relation_composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dims: Vec<usize> = (0..4).map(|_| 2 * r.gen_range(0..=2)).collect();
        let spaces: Vec<SympSpace> = dims.iter().map(|&d| random_symplectic_space(&mut r, d)).collect();
        let a = random_lagrangian(&mut r, &spaces[0], &spaces[1]);
        let b = random_lagrangian(&mut r, &spaces[1], &spaces[2]);
        let c = random_lagrangian(&mut r, &spaces[2], &spaces[3]);
        let ab = a.compose(&b).unwrap();
        let lhs = ab.compose(&c).unwrap();
        prop_assert_eq!(&lhs, &a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert!(ab.is_lagrangian());
        prop_assert!(lhs.is_lagrangian());
        prop_assert_eq!(ab.transpose(), b.transpose().compose(&a.transpose()).unwrap());
    }

    #[test]
    fn nct_product_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (random_nct_element(&mut r, 3, 4), random_nct_element(&mut r, 3, 4), random_nct_element(&mut r, 3, 4));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y).star(), y.star().mul(&x.star()));
        prop_assert_eq!(x.star().star(), x);
    }

    #[test]
    fn classifier_is_commutative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c1, c2) = (random_class(&mut r), random_class(&mut r));
        let ab = tensor_classify(&c1, &c2).unwrap();
        let ba = tensor_classify(&c2, &c1).unwrap();
        prop_assert_eq!(ab.multiplicity, ba.multiplicity);
        prop_assert_eq!(ab.class, ba.class);
    }

    #[test]
    fn zero_branch_ignores_the_bezout_choice(seed in any::<u64>(), related in any::<bool>()) {
        let mut r = rng(seed);
        let a1 = random_angle(&mut r);
        let c1 = class_canonicalize(&ModuleClass::new(0, if r.gen_bool(0.5) { 1 } else { -1 }, a1)).unwrap();
        let a2 = if related {
            &c1.alpha + &(Angle::lambda(rat(r.gen_range(-4..=4), 1)) + Angle::two_pi(rat(r.gen_range(-4..=4), 1)))
        } else {
            random_angle(&mut r)
        };
        let c2 = class_canonicalize(&ModuleClass::new(0, 1, a2)).unwrap();
        let reference = tensor_classify(&c1, &c2).unwrap();
        if related {
            prop_assert_eq!(reference.multiplicity, 1);
        }
        for s2 in -10i64..=9 {
            let s = (s2 + 1, s2);
            let got = zero_branch(&c1, &c2, s);
            prop_assert_eq!(got.multiplicity, reference.multiplicity);
            prop_assert_eq!(&got.class, &reference.class);
        }
    }

    #[test]
    fn observation_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c1, c2) = (random_class(&mut r), random_class(&mut r));
        let (k1, k2) = (class_canonicalize(&c1).unwrap(), class_canonicalize(&c2).unwrap());
        prop_assume!(k1.p != 0 && k2.p != 0);
        let out = tensor_classify(&c1, &c2).unwrap();
        let raw = out.raw.unwrap();
        prop_assert_eq!(
            rat(raw.q, raw.p),
            rat(k1.q, k1.p) + rat(k2.q, k2.p)
        );
        prop_assert_eq!(
            raw.alpha.scale(&rat(1, raw.p)),
            &k1.alpha.scale(&rat(1, k1.p)) + &k2.alpha.scale(&rat(1, k2.p))
        );
    }

    #[test]
    fn bisection_translations_add(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = TorusCircle::from(&random_class(&mut r));
        let (m1, n1, m2, n2) = (r.gen_range(-5..=5), r.gen_range(-5..=5), r.gen_range(-5..=5), r.gen_range(-5..=5));
        prop_assert_eq!(
            bisection_translate(&bisection_translate(&c, m1, n1), m2, n2),
            bisection_translate(&c, m1 + m2, n1 + n2)
        );
        prop_assert_eq!(bisection_translate(&c, 0, 0), c);
    }

    #[test]
    fn orbit_count_matches_branch_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c1, c2) = (random_class(&mut r), random_class(&mut r));
        prop_assume!(c1.p != 0 && c2.p != 0);
        let comps = compose_circles(&TorusCircle::from(&c1), &TorusCircle::from(&c2));
        // With gcd(p_i, q_i) = 1 each monodromy orbit has length lcm(|p1|, |p2|).
        let order = c1.p.abs().lcm(&c2.p.abs());
        prop_assert_eq!(comps.len() as i64, (c1.p * c2.p).abs() / order);
    }

    #[test]
    fn circle_composition_is_commutative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c1, c2) = (TorusCircle::from(&random_class(&mut r)), TorusCircle::from(&random_class(&mut r)));
        prop_assert_eq!(canonical_components(&c1, &c2), canonical_components(&c2, &c1));
    }

    #[test]
    fn angle_display_parses_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_angle(&mut r);
        let back: Angle = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

