use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chowtree::chow::{orbit_class, orbit_class_deterministic, tree_class};
use chowtree::contraction::configuration_cycle;
use chowtree::curves::{stabilize, triple_invariant, triples};
use chowtree::degeneration::{check_limit_compatibility, limit_tree, limit_tree_with, random_family};
use chowtree::group::random_rational;
use chowtree::trees::random_tree;
use chowtree::{
    AffinePoint, ConfigPoint, Configuration, GroupElement, HyperplaneDirection, Rational, RationalPoly, StableTree,
    StratumShape, Valuation,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..60).prop_map(|(n, d)| Rational::new(n, d))
}

fn poly() -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(RationalPoly::new)
}

fn tree(d: usize, n: usize, pick: usize, seed: u64) -> StableTree {
    let shapes = StratumShape::enumerate(n);
    random_tree(d, n, &shapes[pick % shapes.len()], seed).unwrap()
}

fn scramble(t: &StableTree, seed: u64) -> StableTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = t.clone();
    for id in t.preorder() {
        out.transform_vertex(id, &GroupElement::random(t.d, &mut rng)).unwrap();
    }
    out
}

/// Configuration with deliberate coincidences and points on `H`.
fn clumpy_config(d: usize, n: usize, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<AffinePoint> = (0..3).map(|_| AffinePoint((0..d).map(|_| random_rational(&mut rng, 4, 2)).collect())).collect();
    let points = (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                let v: Vec<i64> = (0..d).map(|j| if j == 0 { 1 } else { rng.gen_range(-2..=2) }).collect();
                ConfigPoint::AtInfinity(HyperplaneDirection::from_ints(&v).unwrap())
            } else {
                ConfigPoint::Affine(pool[rng.gen_range(0..pool.len())].clone())
            }
        })
        .collect();
    Configuration::new(d, points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = b.recip() {
            prop_assert_eq!(&(&a * &b) * &inv, a.clone());
        }
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn valuation_of_products_adds(p in poly(), q in poly()) {
        let v = match (p.valuation(), q.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        };
        prop_assert_eq!(p.mul(&q).valuation(), v);
        if let Valuation::Finite(k) = p.valuation() {
            let (shifted, value) = p.shift_eval(k).unwrap();
            prop_assert_eq!(shifted.mul(&RationalPoly::monomial(Rational::one(), k)), p.clone());
            prop_assert!(!value.is_zero());
        }
    }

    #[test]
    fn action_law_and_orbit_constancy(d in 1usize..=3, n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (GroupElement::random(d, &mut rng), GroupElement::random(d, &mut rng));
        let c = clumpy_config(d, n, seed);
        prop_assert_eq!(g.compose(&h).unwrap().act(&c).unwrap(), g.act(&h.act(&c).unwrap()).unwrap());
        prop_assert_eq!(g.inverse().act(&g.act(&c).unwrap()).unwrap(), c.clone());
        prop_assert_eq!(g.act(&c).unwrap().stabilizer_dimension(), c.stabilizer_dimension());
        if c.is_full_dimensional() {
            prop_assert!(c.same_orbit(&g.act(&c).unwrap()).unwrap());
        }
    }

    #[test]
    fn randomized_and_closed_form_classes_agree(d in 1usize..=3, n in 2usize..=5, seed in any::<u64>()) {
        let c = clumpy_config(d, n, seed);
        if c.is_full_dimensional() {
            let k = orbit_class(&c, 3, seed).unwrap();
            prop_assert_eq!(&k, &orbit_class_deterministic(&c).unwrap());
            prop_assert!(k.iter().all(|(_, x)| x == 0 || x == 1));
        }
    }

    #[test]
    fn trees_are_valid_and_scrambling_keeps_their_class(d in 1usize..=3, n in 2usize..=5, pick in any::<usize>(), seed in any::<u64>()) {
        let t = tree(d, n, pick, seed);
        prop_assert!(t.is_valid());
        let s = scramble(&t, seed ^ 1);
        prop_assert!(t.canonically_equal(&s).unwrap());
        prop_assert_eq!(
            configuration_cycle(&t).unwrap().orbit_multiset().unwrap(),
            configuration_cycle(&s).unwrap().orbit_multiset().unwrap()
        );
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<StableTree>(&json).unwrap(), t);
    }

    #[test]
    fn cycle_classes_are_all_ones(d in 1usize..=2, n in 2usize..=5, pick in any::<usize>(), seed in any::<u64>()) {
        prop_assert!(tree_class(&tree(d, n, pick, seed), 3, seed).unwrap().is_all_ones());
    }

    #[test]
    fn limits_are_stable_compatible_and_base_free(d in 1usize..=3, n in 2usize..=6, seed in any::<u64>()) {
        let f = random_family(d, n, 4, seed).unwrap();
        let t = limit_tree(&f).unwrap();
        prop_assert!(t.is_valid());
        prop_assert!(check_limit_compatibility(&f).unwrap());
        let top = limit_tree_with(&f, |s| *s.iter().next_back().unwrap()).unwrap();
        prop_assert!(t.canonically_equal(&top).unwrap());
        let g = GroupElement::random(d, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(t.canonically_equal(&limit_tree(&f.act(&g).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn triple_invariants_are_group_invariant(n in 3usize..=6, pick in any::<usize>(), seed in any::<u64>()) {
        let t = tree(1, n, pick, seed);
        let s = scramble(&t, seed ^ 2);
        for tr in triples(n) {
            prop_assert_eq!(triple_invariant(&t, tr).unwrap(), triple_invariant(&s, tr).unwrap());
        }
    }

    #[test]
    fn stabilization_is_confluent(n in 4usize..=6, pick in any::<usize>(), seed in any::<u64>(), drop in 0usize..6) {
        // forgetting one label first, then the rest, matches forgetting all at once
        let t = tree(1, n, pick, seed);
        let dropped = 1 + drop % n;
        let kept: Vec<usize> = (1..=n).filter(|&l| l != dropped).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut subset: Vec<usize> = kept.clone();
        while subset.len() > 3 {
            subset.remove(rng.gen_range(0..subset.len()));
        }
        let direct = stabilize(&t, &subset).unwrap();
        let first = stabilize(&t, &kept).unwrap();
        let relabeled: Vec<usize> = subset.iter().map(|l| kept.iter().position(|k| k == l).unwrap() + 1).collect();
        let staged = stabilize(&first, &relabeled).unwrap();
        prop_assert!(direct.canonically_equal(&staged).unwrap());
    }
}
