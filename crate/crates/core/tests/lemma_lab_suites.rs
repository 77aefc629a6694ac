use std::collections::HashSet;

use h1lab::abelian::random::{random_element, random_embedding, random_hom, random_torsion_group};
use h1lab::abelian::{AbHom, FinAbGroup, GroupElement};
use h1lab::lemma_lab::campaign::trial_rng;
use h1lab::lemma_lab::sweep::{sweep_homs, sweep_subgroups};
use h1lab::lemma_lab::{
    check_lemma_diagramme, check_lemma_equiv_divisibilite, check_lemma_pasinjectif, run_campaign, sample_diagram,
    CampaignConfig, DiagramInstance, Lemma, OracleCache, Sampler, DIAGRAM_HYPOTHESES,
};
use h1lab::modmat::ring::divisors;
use proptest::prelude::*;

/// Elements as a set, by enumeration.
fn multiples(g: &FinAbGroup, m: u64) -> HashSet<GroupElement> {
    g.elements().map(|x| g.scale(&x, m)).collect()
}

fn image_set(f: &AbHom) -> HashSet<GroupElement> {
    f.domain().elements().map(|x| f.apply(&x).unwrap()).collect()
}

fn kernel_set(f: &AbHom) -> HashSet<GroupElement> {
    f.domain()
        .elements()
        .filter(|x| f.codomain().is_zero(&f.apply(x).unwrap()))
        .collect()
}

fn preserves_n_by_enumeration(f: &AbHom, n: u64) -> bool {
    divisors(n).into_iter().all(|m| {
        let (ma, mb) = (multiples(f.domain(), m), multiples(f.codomain(), m));
        f.domain()
            .elements()
            .all(|x| !mb.contains(&f.apply(&x).unwrap()) || ma.contains(&x))
    })
}

/// The six hypotheses by element enumeration only.
fn hypotheses_by_enumeration(d: &DiagramInstance) -> Vec<bool> {
    let n = d.n();
    let c = d.c();
    let c_n: HashSet<GroupElement> = c.elements().filter(|x| c.is_zero(&c.scale(x, n))).collect();
    let beta_f = d.f().then(d.beta()).unwrap();
    vec![
        d.b().elements().all(|x| d.b().is_zero(&d.b().scale(&x, n)))
            && d.b_prime().elements().all(|x| d.b_prime().is_zero(&d.b_prime().scale(&x, n))),
        kernel_set(d.beta()).len() == 1,
        preserves_n_by_enumeration(d.gamma(), n),
        c_n.is_subset(&image_set(d.g())),
        kernel_set(d.g()).is_subset(&image_set(d.f())),
        preserves_n_by_enumeration(&beta_f, n),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructive_sampler_is_sound(seed in any::<u64>(), n in prop::sample::select(vec![2u64, 4, 6, 8, 12])) {
        let mut rng = trial_rng(seed, 0);
        if let Some(d) = sample_diagram(&mut rng, 32, n, Sampler::S2) {
            prop_assert!(hypotheses_by_enumeration(&d).iter().all(|&h| h));
            prop_assert_eq!(kernel_set(d.g()), image_set(d.f()));
            let lhs = d.beta().then(d.g_prime()).unwrap();
            let rhs = d.g().then(d.gamma()).unwrap();
            for x in d.b().elements() {
                prop_assert_eq!(lhs.apply(&x).unwrap(), rhs.apply(&x).unwrap());
            }
            let r = check_lemma_diagramme(&d, &OracleCache::new());
            prop_assert!(r.applicable && r.holds);
        }
    }

    #[test]
    fn hypothesis_flags_match_enumeration(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let n = 4;
        let b = random_torsion_group(16, n, &mut rng);
        let (_, f) = random_embedding(&b, &mut rng);
        let c = random_torsion_group(16, n, &mut rng);
        let g = random_hom(&b, &c, &mut rng);
        let beta = AbHom::identity(&b);
        let gamma = AbHom::identity(&c);
        let d = DiagramInstance::new(n, f, g.clone(), beta, gamma, g).unwrap();
        let r = check_lemma_diagramme(&d, &OracleCache::new());
        let flags: Vec<bool> = r.hypotheses.iter().map(|c| c.holds).collect();
        prop_assert_eq!(flags, hypotheses_by_enumeration(&d));
        prop_assert!(r.holds);
    }

    #[test]
    fn not_summand_reports_hold(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let n = 8;
        let a = random_torsion_group(32, n, &mut rng);
        let b = random_torsion_group(32, n, &mut rng);
        let f = random_hom(&a, &b, &mut rng);
        let cache = OracleCache::new();
        for m in [2, 4] {
            let p = random_element(&a, &mut rng);
            let r = check_lemma_pasinjectif(&f, n, m, &p, &cache);
            prop_assert!(r.holds, "{:?}", r.counterexample);
        }
    }

    #[test]
    fn random_embeddings_agree(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 3);
        let b = random_torsion_group(64, 24, &mut rng);
        let (_, f) = random_embedding(&b, &mut rng);
        let r = check_lemma_equiv_divisibilite(&f, 24, &OracleCache::new());
        prop_assert!(r.applicable && r.holds);
    }
}

#[test]
fn exhaustive_sweeps_up_to_sixteen() {
    let cache = OracleCache::new();
    let s = sweep_subgroups(16, &cache).unwrap();
    assert!(s.passed(), "{s:?}");
    let h = sweep_homs(16, &cache).unwrap();
    assert!(h.passed(), "{h:?}");
    assert!(h.not_summand_non_injective > 0);
}

#[test]
fn campaigns_are_thread_count_independent() {
    let config = CampaignConfig {
        lemma: Lemma::DiagramSummand,
        trials: 40,
        seed: 5,
        max_order: 64,
        n: 12,
        sampler: Sampler::S2,
    };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&run_campaign(&config, &OracleCache::new()).unwrap()).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn diagram_hypotheses_are_named_in_order() {
    let r = check_lemma_diagramme(&DiagramInstance::trivial(2), &OracleCache::new());
    let names: Vec<&str> = r.hypotheses.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, DIAGRAM_HYPOTHESES);
}
