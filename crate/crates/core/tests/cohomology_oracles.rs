use std::sync::Arc;

use h1lab::cohomology::oracle::{
    brute_force_counts, expand_to_tables, h1_cyc_cocycles_aux, is_locally_trivial, multiplication_table,
    pairwise_z1,
};
use h1lab::cohomology::*;
use h1lab::matgroup::*;
use h1lab::modmat::ZModMatrix;
use num_bigint::BigUint;
use proptest::prelude::*;

fn cyclic(m: u64, rows: &[&[i64]]) -> GroupAction {
    let g = ZModMatrix::from_rows(m, rows).unwrap();
    GroupAction::natural(Arc::new(closure(m, g.rows(), &[g], 256).unwrap()))
}

fn corpus() -> Vec<(String, GroupAction)> {
    let mut out = vec![
        ("-1 on Z/4".to_string(), cyclic(4, &[&[3]])),
        ("3 on Z/8".into(), cyclic(8, &[&[3]])),
        ("5 on Z/8".into(), cyclic(8, &[&[5]])),
        ("2 on Z/9".into(), cyclic(9, &[&[2]])),
        ("4 on Z/9".into(), cyclic(9, &[&[4]])),
        ("7 on Z/25".into(), cyclic(25, &[&[7]])),
        ("rotation on (Z/4)^2".into(), cyclic(4, &[&[0, 3], &[1, 0]])),
        ("unipotent on (Z/8)^2".into(), cyclic(8, &[&[1, 1], &[0, 1]])),
        ("g on (Z/25)^2".into(), cyclic(25, &[&[1, -3], &[1, -2]])),
        ("h on (Z/25)^2".into(), GroupAction::natural(Arc::new(
            closure(25, 2, &[h2_element(5, 1, 2).unwrap()], 256).unwrap(),
        ))),
    ];
    let g2 = Arc::new(build_g2(2).unwrap());
    let n = Arc::new(build_n(2).unwrap());
    let g3 = Arc::new(build_g3(2, DEFAULT_CAP).unwrap());
    out.push(("G2 at p=2".into(), GroupAction::natural(g2)));
    out.push(("N at p=2".into(), GroupAction::natural(n)));
    out.push(("G3 at p=2".into(), GroupAction::natural(g3)));
    out
}

#[test]
fn generator_propagation_matches_pairwise_constraints() {
    for (name, a) in corpus() {
        let s = cocycle_space(&a).unwrap();
        let expanded = expand_to_tables(&a, &s.z1).unwrap();
        assert_eq!(expanded.basis(), pairwise_z1(&a).unwrap().basis(), "{name}");
    }
}

#[test]
fn cyclic_formula_matches_h1() {
    for (name, a) in corpus() {
        if a.group().ngens() != 1 {
            continue;
        }
        let c = cyclic_h1_action(&a).unwrap();
        let h = h1(&a).unwrap();
        assert_eq!(c.factors(), h.factors(), "{name}");
        assert_eq!(c.cocycles(), h.cocycles(), "{name}");
        assert_eq!(c.coboundaries(), h.coboundaries(), "{name}");
        assert!(h1_cyc(&a).unwrap().is_trivial(), "{name}");
    }
}

#[test]
fn counting_identity() {
    for (name, a) in corpus() {
        let s = cocycle_space(&a).unwrap();
        let h = h1(&a).unwrap();
        assert_eq!(s.z1.order(), s.b1.order() * h.order(), "{name}");
        assert!(s.z1.contains_span(&s.b1), "{name}");
    }
}

#[test]
fn brute_force_small_counts() {
    let a = cyclic(4, &[&[3]]);
    assert_eq!(brute_force_counts(&a).unwrap(), (4, 2));
    for (name, a) in corpus().into_iter().take(6) {
        let (z, b) = brute_force_counts(&a).unwrap();
        let s = cocycle_space(&a).unwrap();
        assert_eq!(BigUint::from(z), s.z1.order(), "{name}");
        assert_eq!(BigUint::from(b), s.b1.order(), "{name}");
    }
}

#[test]
fn locally_trivial_matches_auxiliary_unknowns() {
    let mut cases = corpus();
    cases.push(("G2 at p=5".into(), GroupAction::natural(Arc::new(build_g2(5).unwrap()))));
    for (name, a) in cases {
        assert_eq!(locally_trivial_cocycles(&a).unwrap(), h1_cyc_cocycles_aux(&a).unwrap(), "{name}");
    }
}

#[test]
fn h1_cyc_classes_restrict_trivially() {
    for p in [2u64, 5] {
        let a = GroupAction::natural(Arc::new(build_g2(p).unwrap()));
        let hc = h1_cyc(&a).unwrap();
        assert!(!hc.is_trivial());
        for z in hc.representatives() {
            assert!(z.is_cocycle(&a));
            assert!(is_locally_trivial(&a, z).unwrap());
            assert!(is_coboundary(&a, z).unwrap().is_none());
        }
    }
    let a = GroupAction::natural(Arc::new(build_g3(2, DEFAULT_CAP).unwrap()));
    for z in h1_cyc(&a).unwrap().representatives() {
        assert!(is_locally_trivial(&a, z).unwrap());
    }
}

#[test]
fn representatives_satisfy_the_pair_identity() {
    for (name, a) in corpus() {
        let mul = multiplication_table(&a);
        let m = a.modulus();
        for z in h1(&a).unwrap().representatives() {
            let t = z.table(&a);
            for x in 0..a.group().order() {
                for y in 0..a.group().order() {
                    let moved = a.act(x).apply(&t[y]).unwrap();
                    let rhs: Vec<u64> = t[x].iter().zip(&moved).map(|(u, v)| (u + v) % m).collect();
                    assert_eq!(t[mul[x][y]], rhs, "{name}");
                }
            }
        }
    }
}

fn g3_inflation(p: u64) -> (Inflation, Arc<MatGroup>) {
    let g2 = Arc::new(build_g2(p).unwrap());
    let g3 = Arc::new(build_g3(p, DEFAULT_CAP).unwrap());
    let proj = g3.reduction_map(&g2).unwrap();
    let iota = ModuleMap::scaled_lift(p * p, p * p * p, 2, p).unwrap();
    let inf = Inflation::new(
        GroupAction::natural(g2),
        GroupAction::natural(g3),
        proj,
        iota,
    )
    .unwrap();
    (inf, Arc::new(build_n(p).unwrap()))
}

#[test]
fn exactness_cyclic_four_over_two() {
    // G = <2> in (Z/5)^*, N = <4>, Q = G/N realized as <4> via x -> x^2
    let g = Arc::new(closure(5, 1, &[ZModMatrix::from_rows(5, &[[2i64]]).unwrap()], 10).unwrap());
    let q = Arc::new(closure(5, 1, &[ZModMatrix::from_rows(5, &[[4i64]]).unwrap()], 10).unwrap());
    let n = q.clone();
    let proj: Vec<usize> = g
        .elements()
        .iter()
        .map(|x| q.index_of(&x.mul(x).unwrap()).unwrap())
        .collect();
    let ga = GroupAction::new(g.clone(), GModule::trivial(&g, 4, 1).unwrap()).unwrap();
    let qa = GroupAction::new(q.clone(), GModule::trivial(&q, 4, 1).unwrap()).unwrap();
    let inf = Inflation::new(qa, ga, proj, ModuleMap::identity(4, 1).unwrap()).unwrap();
    let r = verify_inf_res_exactness(&inf, &n).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.group_h1, vec![4]);
}

#[test]
fn exactness_with_trivial_kernel() {
    let g = Arc::new(build_g2(2).unwrap());
    let a = GroupAction::natural(g.clone());
    let proj: Vec<usize> = (0..g.order()).collect();
    let inf = Inflation::new(a.clone(), a.clone(), proj, ModuleMap::identity(4, 2).unwrap()).unwrap();
    let r = verify_inf_res_exactness(&inf, &Arc::new(MatGroup::trivial(4, 2).unwrap())).unwrap();
    assert!(r.holds());
    assert!(r.normal_h1.is_empty());
    let h = h1(&a).unwrap();
    let f = inf.on_cohomology(&h, &h).unwrap();
    assert_eq!(f, h1lab::abelian::AbHom::identity(&h.as_abelian_group()));
    let zero = Cocycle::zero(&a);
    assert_eq!(inf.inflate(&zero).unwrap(), zero);
}

#[test]
fn exactness_for_g3_at_two() {
    let (inf, n) = g3_inflation(2);
    let r = verify_inf_res_exactness(&inf, &n).unwrap();
    assert!(r.holds(), "{r:?}");
}

#[test]
fn non_equivariant_identification_is_rejected() {
    let g2 = Arc::new(build_g2(5).unwrap());
    let g3 = Arc::new(build_g3(5, DEFAULT_CAP).unwrap());
    let proj = g3.reduction_map(&g2).unwrap();
    let twist = ZModMatrix::from_rows(125, &[[5i64, 5], [0, 5]]).unwrap();
    let iota = ModuleMap::new(25, twist).unwrap();
    let r = Inflation::new(GroupAction::natural(g2), GroupAction::natural(g3), proj, iota);
    assert!(matches!(r, Err(h1lab::Error::NotEquivariant(_))));
    assert!(ModuleMap::new(25, ZModMatrix::identity(125, 2).unwrap()).is_err());
}

#[test]
fn inflation_on_locally_trivial_classes() {
    // bijective at p = 5; at p = 2 injective with a strictly larger target
    for (p, bijective) in [(5u64, true), (2, false)] {
        let (inf, n) = g3_inflation(p);
        let hc2 = h1_cyc(inf.quotient()).unwrap();
        let hc3 = h1_cyc(inf.group()).unwrap();
        let f = inf.on_cohomology(&hc2, &hc3).unwrap();
        assert!(f.is_injective());
        assert_eq!(f.is_surjective(), bijective, "p = {p}");
        // restricted to N every locally trivial cocycle takes values in p^2 M3
        let na = inf.group().restrict_to(n).unwrap();
        for row in hc3.cocycles().basis().row_iter() {
            let z = Cocycle { values: row.to_vec() };
            let r = restrict(inf.group(), &z, &na).unwrap();
            for v in r.table(&na) {
                assert!(v.iter().all(|&x| x % (p * p) == 0));
            }
        }
    }
}

fn small_action() -> impl Strategy<Value = Option<GroupAction>> {
    (prop::sample::select(vec![4u64, 8, 9, 25, 27]), 1usize..3, 1usize..3, any::<u64>()).prop_map(
        |(m, dim, ngens, seed)| {
            let mut s = seed;
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 33) % m
            };
            let mut gens = Vec::new();
            while gens.len() < ngens {
                let e: Vec<u64> = (0..dim * dim).map(|_| next()).collect();
                let x = ZModMatrix::from_flat(m, dim, dim, e).unwrap();
                if x.is_invertible().unwrap() {
                    gens.push(x);
                }
            }
            closure(m, dim, &gens, 256).ok().map(|g| GroupAction::natural(Arc::new(g)))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_groups_agree_with_oracles(a in small_action()) {
        prop_assume!(a.is_some());
        let a = a.unwrap();
        let s = cocycle_space(&a).unwrap();
        prop_assert_eq!(expand_to_tables(&a, &s.z1).unwrap(), pairwise_z1(&a).unwrap());
        let h = h1(&a).unwrap();
        prop_assert_eq!(s.z1.order(), s.b1.order() * h.order());
        prop_assert_eq!(locally_trivial_cocycles(&a).unwrap(), h1_cyc_cocycles_aux(&a).unwrap());
        for z in h1_cyc(&a).unwrap().representatives() {
            prop_assert!(is_locally_trivial(&a, z).unwrap());
        }
        for z in h.representatives() {
            prop_assert!(z.is_cocycle(&a));
        }
    }
}
