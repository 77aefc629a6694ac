//! Exhaustive sweeps over every small group, every subgroup and every
//! homomorphism, evaluated on Cayley tables with bitmasks and judged
//! against the subgroup-lattice oracle.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{check_lemma_equiv_divisibilite, check_lemma_pasinjectif, OracleCache, IMAGE_SUMMAND};
use crate::abelian::oracle::SmallGroup;
use crate::abelian::{all_groups, AbHom, FinAbGroup, GroupElement};
use crate::error::Result;
use crate::modmat::ring::{divisors, lcm};

/// Every subgroup `S` of every `B` with `|B| <= max_order`, as an
/// embedding of `n`-torsion groups with `n = exponent(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSweep {
    pub max_order: u64,
    pub groups: u64,
    pub subgroups: u64,
    pub violations: u64,
    /// Subgroups where the table-based purity test disagrees with the
    /// lattice oracle.
    pub purity_disagreements: u64,
}

impl SubgroupSweep {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.purity_disagreements == 0
    }
}

pub fn sweep_subgroups(max_order: u64, cache: &OracleCache) -> Result<SubgroupSweep> {
    let groups = all_groups(max_order);
    let per_group: Vec<(u64, u64, u64)> = groups
        .par_iter()
        .map(|b| -> Result<(u64, u64, u64)> {
            let oracle = cache.get(b)?;
            let table = oracle.table();
            let n = b.exponent().max(1);
            let mut counts = (0, 0, 0);
            for &mask in oracle.lattice() {
                let s = table.to_subgroup(mask);
                let (_, inc) = s.abstract_form();
                let report = check_lemma_equiv_divisibilite(&inc, n, cache);
                counts.0 += 1;
                if !report.applicable || !report.holds {
                    counts.1 += 1;
                }
                let summand = oracle.complement_mask(mask).is_some();
                if summand != is_pure_by_table(table, mask, n) {
                    counts.2 += 1;
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    Ok(SubgroupSweep {
        max_order,
        groups: groups.len() as u64,
        subgroups: per_group.iter().map(|c| c.0).sum(),
        violations: per_group.iter().map(|c| c.1).sum(),
        purity_disagreements: per_group.iter().map(|c| c.2).sum(),
    })
}

/// `S ∩ mB ⊆ mS` for every `m | n`, on element masks.
fn is_pure_by_table(table: &SmallGroup, s: u64, n: u64) -> bool {
    divisors(n).into_iter().all(|m| {
        let mb = table.multiples_mask(m);
        let ms = SmallGroup::members(s).fold(0u64, |acc, x| acc | 1 << table.scale(x, m));
        (s & mb) & !ms == 0
    })
}

/// Every homomorphism `A -> B` with `|A|, |B| <= max_order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSweep {
    pub max_order: u64,
    pub pairs: u64,
    pub homs: u64,
    /// Injective maps, checked for summand iff `n`-divisibility preserved.
    pub embeddings: u64,
    pub embedding_violations: u64,
    /// Maps admitting `m | n` and `P` with (i) and (ii).
    pub not_summand_applicable: u64,
    pub not_summand_non_injective: u64,
    pub not_summand_violations: u64,
    /// Instances re-run through the full report-producing checks.
    pub full_checks: u64,
    pub full_check_violations: u64,
    /// First non-injective instance with (i) and (ii), in sweep order.
    pub non_injective_example: Option<Value>,
}

impl HomSweep {
    pub fn passed(&self) -> bool {
        self.embedding_violations == 0 && self.not_summand_violations == 0 && self.full_check_violations == 0
    }
}

/// Full checks per pair and kind.
const FULL_CHECKS_PER_PAIR: usize = 2;

pub fn sweep_homs(max_order: u64, cache: &OracleCache) -> Result<HomSweep> {
    let groups = all_groups(max_order);
    let tables: Vec<SmallGroup> = groups.iter().map(SmallGroup::new).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..groups.len())
        .flat_map(|i| (0..groups.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<PairResult> = pairs
        .par_iter()
        .map(|&(i, j)| sweep_pair(&tables[i], &tables[j], cache))
        .collect::<Result<_>>()?;
    let mut out = HomSweep {
        max_order,
        pairs: pairs.len() as u64,
        homs: 0,
        embeddings: 0,
        embedding_violations: 0,
        not_summand_applicable: 0,
        not_summand_non_injective: 0,
        not_summand_violations: 0,
        full_checks: 0,
        full_check_violations: 0,
        non_injective_example: None,
    };
    for r in results {
        out.homs += r.homs;
        out.embeddings += r.embeddings;
        out.embedding_violations += r.embedding_violations;
        out.not_summand_applicable += r.applicable;
        out.not_summand_non_injective += r.non_injective;
        out.not_summand_violations += r.violations;
        out.full_checks += r.full_checks;
        out.full_check_violations += r.full_check_violations;
        if out.non_injective_example.is_none() {
            out.non_injective_example = r.example;
        }
    }
    Ok(out)
}

#[derive(Default)]
struct PairResult {
    homs: u64,
    embeddings: u64,
    embedding_violations: u64,
    applicable: u64,
    non_injective: u64,
    violations: u64,
    full_checks: u64,
    full_check_violations: u64,
    example: Option<Value>,
}

/// For each element, bit `k` is set when it is divisible by `ms[k]`.
fn profiles(t: &SmallGroup, ms: &[u64]) -> Vec<u64> {
    let masks: Vec<u64> = ms.iter().map(|&m| t.multiples_mask(m)).collect();
    (0..t.order())
        .map(|x| {
            masks
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &mask)| acc | (mask >> x & 1) << k)
        })
        .collect()
}

fn sweep_pair(ta: &SmallGroup, tb: &SmallGroup, cache: &OracleCache) -> Result<PairResult> {
    let (a, b) = (ta.group(), tb.group());
    let n = lcm(a.exponent().max(1), b.exponent().max(1));
    let ms: Vec<u64> = divisors(n).into_iter().filter(|&m| m > 1).collect();
    let all_ms = (1u64 << ms.len()) - 1;
    let (pa, pb) = (profiles(ta, &ms), profiles(tb, &ms));
    let oracle = cache.get(b)?;

    // element x is reached from prev[x] by adding generator step[x]
    let factors = a.invariant_factors();
    let mut strides = vec![1usize; factors.len()];
    for j in 1..factors.len() {
        strides[j] = strides[j - 1] * factors[j - 1] as usize;
    }
    let order_a = ta.order();
    let mut prev = vec![0usize; order_a];
    let mut step = vec![0usize; order_a];
    for x in 1..order_a {
        let j = (0..factors.len())
            .find(|&j| (x / strides[j]) % factors[j] as usize != 0)
            .expect("nonzero element");
        prev[x] = x - strides[j];
        step[x] = j;
    }
    let candidates: Vec<Vec<usize>> = factors
        .iter()
        .map(|&d| (0..tb.order()).filter(|&y| tb.scale(y, d) == 0).collect())
        .collect();

    let mut res = PairResult::default();
    let mut summand_memo: HashMap<u64, bool> = HashMap::new();
    let mut choice = vec![0usize; factors.len()];
    let mut img = vec![0usize; order_a];
    let (mut full_embed, mut full_not) = (0usize, 0usize);
    loop {
        let gens: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cand)| cand[c]).collect();
        let mut image_mask = 1u64;
        let mut kernel_size = 1u64;
        let mut kernel_bad = 0u64;
        let mut cond_i = 0u64;
        for x in 1..order_a {
            let y = tb.sum(img[prev[x]], gens[step[x]]);
            img[x] = y;
            image_mask |= 1 << y;
            if y == 0 {
                kernel_size += 1;
                kernel_bad |= !pa[x];
            }
            cond_i |= pb[y] & !pa[x];
        }
        res.homs += 1;
        let mut summand = |mask: u64| *summand_memo.entry(mask).or_insert_with(|| oracle.complement_mask(mask).is_some());

        if kernel_size == 1 {
            res.embeddings += 1;
            let preserves = cond_i & all_ms == 0;
            if summand(image_mask) != preserves {
                res.embedding_violations += 1;
            }
            if full_embed < FULL_CHECKS_PER_PAIR {
                full_embed += 1;
                res.full_checks += 1;
                let f = to_hom(ta, tb, &gens)?;
                let r = check_lemma_equiv_divisibilite(&f, n, cache);
                let agrees = r.observation(IMAGE_SUMMAND) == Some(summand(image_mask));
                if !(r.applicable && r.holds && agrees) {
                    res.full_check_violations += 1;
                }
            }
        }

        let applicable = cond_i & !kernel_bad & all_ms;
        if applicable != 0 {
            res.applicable += 1;
            if kernel_size > 1 {
                res.non_injective += 1;
            }
            if summand(image_mask) {
                res.violations += 1;
            }
            let want_example = kernel_size > 1 && res.example.is_none();
            if full_not < FULL_CHECKS_PER_PAIR || want_example {
                full_not += 1;
                res.full_checks += 1;
                let k = applicable.trailing_zeros() as usize;
                let m = ms[k];
                let p = (1..order_a)
                    .find(|&x| (pb[img[x]] & !pa[x]) >> k & 1 == 1)
                    .expect("condition (i) has a witness");
                let f = to_hom(ta, tb, &gens)?;
                let r = check_lemma_pasinjectif(&f, n, m, ta.element(p), cache);
                if !(r.applicable && r.holds) {
                    res.full_check_violations += 1;
                }
                if want_example {
                    res.example = Some(json!({ "f": f, "n": n, "m": m, "P": ta.element(p) }));
                }
            }
        }

        // next choice of generator images
        let mut j = 0;
        loop {
            if j == choice.len() {
                return Ok(res);
            }
            choice[j] += 1;
            if choice[j] < candidates[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

fn to_hom(ta: &SmallGroup, tb: &SmallGroup, gens: &[usize]) -> Result<AbHom> {
    let images: Vec<GroupElement> = gens.iter().map(|&y| tb.element(y).clone()).collect();
    AbHom::new(ta.group().clone(), tb.group().clone(), images)
}

/// Count of homomorphisms `A -> B`, `prod_j |B[d_j]|`.
pub fn hom_count(a: &FinAbGroup, b: &FinAbGroup) -> u128 {
    a.invariant_factors()
        .iter()
        .map(|&d| {
            b.invariant_factors()
                .iter()
                .map(|&e| crate::modmat::ring::gcd(d, e) as u128)
                .product::<u128>()
        })
        .product()
}
