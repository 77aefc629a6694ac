use h1lab::abelian::oracle::{divisibility_witnesses, SummandOracle};
use h1lab::abelian::random::{random_embedding, random_group, random_hom, random_torsion_group};
use h1lab::abelian::{
    ab_group_new, is_direct_summand, is_divisible, is_pure_subgroup, preserves_divisibility,
    preserves_n_divisibility, preserves_n_divisibility_prime_powers, pushout, quotient, AbHom, FinAbGroup,
    GroupElement, Subgroup,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_summand_criteria_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_group(64, &mut r);
        let (_, f) = random_embedding(&b, &mut r);
        let n = b.exponent();
        let img = f.image();
        let by_oracle = SummandOracle::new(&b).unwrap().complement(&img).is_some();
        let by_n = preserves_n_divisibility(&f, n).preserves;
        let by_pp = preserves_n_divisibility_prime_powers(&f, n).preserves;
        let by_all = preserves_divisibility(&f).preserves;
        prop_assert_eq!(by_oracle, by_n);
        prop_assert_eq!(by_n, by_pp);
        prop_assert_eq!(by_n, by_all);
        prop_assert_eq!(is_pure_subgroup(&b, &img, n).unwrap(), by_n);
        let fast = is_direct_summand(&b, &img).unwrap();
        prop_assert_eq!(fast.is_some(), by_oracle);
        if let Some(c) = fast {
            prop_assert_eq!(img.intersect(&c).unwrap().order(), 1);
            prop_assert_eq!(img.order() * c.order(), b.order());
        }
    }

    #[test]
    fn counterexamples_are_genuine(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_group(32, &mut r);
        let b = random_group(32, &mut r);
        let f = random_hom(&a, &b, &mut r);
        let v = preserves_n_divisibility(&f, a.exponent() * b.exponent());
        if let Some((m, x)) = v.counterexample {
            prop_assert!(divisibility_witnesses(&a, &x, m).is_empty());
            let fx = f.apply(&x).unwrap();
            prop_assert!(!divisibility_witnesses(&b, &fx, m).is_empty());
        }
    }

    #[test]
    fn divisibility_witness_soundness(seed in any::<u64>(), m in 1u64..13) {
        let mut r = rng(seed);
        let a = random_group(200, &mut r);
        let x = h1lab::abelian::random::random_element(&a, &mut r);
        let x2 = a.scale(&h1lab::abelian::random::random_element(&a, &mut r), m);
        for target in [x, x2] {
            match is_divisible(&a, &target, m) {
                Some(w) => prop_assert_eq!(a.scale(&w, m), target),
                None => prop_assert!(divisibility_witnesses(&a, &target, m).is_empty()),
            }
        }
    }

    #[test]
    fn quotient_order_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_group(500, &mut r);
        let (_, inc) = random_embedding(&b, &mut r);
        let s = inc.image();
        let (q, proj) = quotient(&b, &s).unwrap();
        prop_assert_eq!(b.order(), s.order() * q.order());
        prop_assert!(proj.kernel().same_set(&s));
        prop_assert!(proj.is_surjective());
    }

    #[test]
    fn kernel_and_image_orders(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_group(200, &mut r);
        let b = random_group(200, &mut r);
        let f = random_hom(&a, &b, &mut r);
        prop_assert_eq!(f.kernel().order() * f.image().order(), a.order());
        for g in &f.kernel().generators {
            prop_assert!(b.is_zero(&f.apply(g).unwrap()));
        }
    }

    #[test]
    fn composition_preserves_n_divisibility(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = [4u64, 6, 8, 9, 12][seed as usize % 5];
        let a = random_torsion_group(32, n, &mut r);
        let b = random_torsion_group(32, n, &mut r);
        let c = random_torsion_group(32, n, &mut r);
        let f = random_hom(&a, &b, &mut r);
        let h = random_hom(&b, &c, &mut r);
        if preserves_n_divisibility(&f, n).preserves && preserves_n_divisibility(&h, n).preserves {
            prop_assert!(preserves_n_divisibility(&f.then(&h).unwrap(), n).preserves);
        }
    }

    #[test]
    fn preimage_inverts_apply(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_group(100, &mut r);
        let b = random_group(100, &mut r);
        let f = random_hom(&a, &b, &mut r);
        let x = h1lab::abelian::random::random_element(&a, &mut r);
        let y = f.apply(&x).unwrap();
        let back = f.preimage(&y).unwrap().expect("image element");
        prop_assert_eq!(f.apply(&back).unwrap(), y);
        let z = h1lab::abelian::random::random_element(&b, &mut r);
        prop_assert_eq!(f.preimage(&z).unwrap().is_some(), f.image().contains(&z));
    }

    #[test]
    fn pushout_square_commutes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_group(30, &mut r);
        let b = random_group(30, &mut r);
        let c = random_group(30, &mut r);
        let f1 = random_hom(&a, &b, &mut r);
        let f2 = random_hom(&a, &c, &mut r);
        let (p, i1, i2) = pushout(&f1, &f2).unwrap();
        prop_assert_eq!(f1.then(&i1).unwrap(), f2.then(&i2).unwrap());
        // |P| = |B||C| / |{(f1 a, -f2 a)}| and the relation subgroup is a quotient of A
        let rel = a.order() / f1.kernel().intersect(&f2.kernel()).unwrap().order();
        prop_assert_eq!(p.order() * rel, b.order() * c.order());
        // the two maps jointly generate P
        let joint = i1.image().join(&i2.image()).unwrap();
        prop_assert_eq!(joint.order(), p.order());
    }

    #[test]
    fn decomposition_round_trip(orders in prop::collection::vec(2u64..20, 0..4)) {
        let dec = ab_group_new(&orders).unwrap();
        let total: u128 = orders.iter().map(|&o| o as u128).product();
        prop_assert_eq!(dec.group.order(), total);
        for w in dec.group.invariant_factors().windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        // additive on the product generators
        let k = orders.len();
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = 1;
            let img = dec.to_canonical(&e).unwrap();
            prop_assert_eq!(dec.group.element_order(&img), orders[i]);
            prop_assert_eq!(dec.from_canonical(&img).unwrap(), e);
        }
    }
}

#[test]
fn lemma_examples_from_the_text() {
    let z2 = FinAbGroup::cyclic(2).unwrap();
    let z4 = FinAbGroup::cyclic(4).unwrap();
    let f = AbHom::new(z2.clone(), z4.clone(), vec![GroupElement(vec![2])]).unwrap();
    let v = preserves_n_divisibility(&f, 4);
    assert!(!v.preserves);
    assert_eq!(v.counterexample, Some((2, GroupElement(vec![1]))));
    let s = Subgroup::new(z4.clone(), vec![GroupElement(vec![2])]).unwrap();
    assert!(SummandOracle::new(&z4).unwrap().complement(&s).is_none());
}
