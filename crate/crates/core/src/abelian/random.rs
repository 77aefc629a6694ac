//! Seeded samplers for groups, homomorphisms and embeddings.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{AbHom, FinAbGroup, GroupElement, Subgroup};
use crate::modmat::ring::{divisors, factorize, gcd};

/// Group of order uniform in `1..=max_order`, with a random partition of
/// each prime exponent.
pub fn random_group<R: Rng + ?Sized>(max_order: u64, rng: &mut R) -> FinAbGroup {
    if max_order <= 1 {
        return FinAbGroup::trivial();
    }
    let n = rng.gen_range(1..=max_order);
    let mut orders = Vec::new();
    for (p, e) in factorize(n) {
        for part in random_partition(e, rng) {
            orders.push(p.pow(part));
        }
    }
    FinAbGroup::from_orders(&orders).expect("prime powers are valid orders")
}

fn random_partition<R: Rng + ?Sized>(mut e: u32, rng: &mut R) -> Vec<u32> {
    let mut parts = Vec::new();
    while e > 0 {
        let k = rng.gen_range(1..=e);
        parts.push(k);
        e -= k;
    }
    parts
}

/// Group of order at most `max_order` whose exponent divides `n`.
pub fn random_torsion_group<R: Rng + ?Sized>(max_order: u64, n: u64, rng: &mut R) -> FinAbGroup {
    let mut orders = Vec::new();
    let mut size = 1u64;
    loop {
        let choices: Vec<u64> = divisors(n)
            .into_iter()
            .filter(|&d| d > 1 && size * d <= max_order)
            .collect();
        if choices.is_empty() || rng.gen_range(0..4) == 0 {
            break;
        }
        let d = *choices.choose(rng).expect("nonempty");
        orders.push(d);
        size *= d;
    }
    FinAbGroup::from_orders(&orders).expect("divisors above 1 are valid orders")
}

pub fn random_element<R: Rng + ?Sized>(g: &FinAbGroup, rng: &mut R) -> GroupElement {
    GroupElement(g.invariant_factors().iter().map(|&d| rng.gen_range(0..d)).collect())
}

/// Each generator image is uniform in `B[d_j]`.
pub fn random_hom<R: Rng + ?Sized>(a: &FinAbGroup, b: &FinAbGroup, rng: &mut R) -> AbHom {
    let images = a
        .invariant_factors()
        .iter()
        .map(|&dj| {
            GroupElement(
                b.invariant_factors()
                    .iter()
                    .map(|&bi| {
                        let g = gcd(bi, dj);
                        rng.gen_range(0..g) * (bi / g)
                    })
                    .collect(),
            )
        })
        .collect();
    AbHom::new(a.clone(), b.clone(), images).expect("images are d_j-torsion")
}

/// Subgroup generated by up to `rank + 1` random elements, returned in
/// abstract form with its inclusion.
pub fn random_embedding<R: Rng + ?Sized>(b: &FinAbGroup, rng: &mut R) -> (FinAbGroup, AbHom) {
    let k = rng.gen_range(0..=b.rank() + 1);
    let gens = (0..k).map(|_| random_element(b, rng)).collect();
    let s = Subgroup::new(b.clone(), gens).expect("sampled elements are reduced");
    s.abstract_form()
}
