//! Ground-truth answers for small groups by brute force: element tables,
//! the full subgroup lattice as bitmasks, and complement search.

use std::collections::{HashMap, HashSet};

use super::{FinAbGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};

/// Largest group the oracle will materialize (subsets fit in a `u64`).
pub const MAX_ORDER: u128 = 64;

/// Cayley table of a group with at most 64 elements.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    group: FinAbGroup,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    add: Vec<u8>,
}

impl SmallGroup {
    pub fn new(group: &FinAbGroup) -> Result<SmallGroup> {
        if group.order() > MAX_ORDER {
            return Err(Error::CapExceeded(MAX_ORDER as usize));
        }
        let elements: Vec<GroupElement> = group.elements().collect();
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut add = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = index[&group.add(&elements[i], &elements[j])] as u8;
            }
        }
        Ok(SmallGroup {
            group: group.clone(),
            elements,
            index,
            add,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &GroupElement) -> usize {
        self.index[x]
    }

    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.add[i * self.order() + j] as usize
    }

    /// Elements in the mask, by index.
    pub fn members(mut mask: u64) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            (mask != 0).then(|| {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                i
            })
        })
    }

    /// `m x` by repeated addition.
    pub fn scale(&self, x: usize, m: u64) -> usize {
        let k = m % self.group.exponent().max(1);
        (0..k).fold(0, |acc, _| self.sum(acc, x))
    }

    /// `mB` as a mask.
    pub fn multiples_mask(&self, m: u64) -> u64 {
        (0..self.order()).fold(0u64, |acc, x| acc | 1 << self.scale(x, m))
    }

    pub fn cyclic_mask(&self, x: usize) -> u64 {
        let mut mask = 1u64;
        let mut cur = x;
        while cur != 0 {
            mask |= 1 << cur;
            cur = self.sum(cur, x);
        }
        mask
    }

    /// `H + K` for subgroups given as masks.
    pub fn join(&self, h: u64, k: u64) -> u64 {
        let mut out = 0u64;
        for a in Self::members(h) {
            for b in Self::members(k) {
                out |= 1 << self.sum(a, b);
            }
        }
        out
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[GroupElement]) -> u64 {
        gens.iter()
            .fold(1u64, |acc, g| self.join(acc, self.cyclic_mask(self.index_of(g))))
    }

    pub fn mask_of(&self, s: &Subgroup) -> u64 {
        self.generated(&s.generators)
    }

    /// Every subgroup, sorted by (order, mask), built by cyclic extensions
    /// starting from the trivial subgroup.
    pub fn subgroup_lattice(&self) -> Vec<u64> {
        let mut seen: HashSet<u64> = HashSet::new();
        let cyclic: Vec<u64> = (0..self.order()).map(|x| self.cyclic_mask(x)).collect();
        let mut stack = vec![1u64];
        seen.insert(1);
        while let Some(h) = stack.pop() {
            for x in 0..self.order() {
                if h >> x & 1 == 1 {
                    continue;
                }
                let ext = self.join(h, cyclic[x]);
                if seen.insert(ext) {
                    stack.push(ext);
                }
            }
        }
        let mut all: Vec<u64> = seen.into_iter().collect();
        all.sort_by_key(|&m| (m.count_ones(), m));
        all
    }

    pub fn to_subgroup(&self, mask: u64) -> Subgroup {
        Subgroup {
            ambient: self.group.clone(),
            generators: Self::members(mask)
                .filter(|&i| i != 0)
                .map(|i| self.elements[i].clone())
                .collect(),
        }
    }
}

/// Exhaustive direct-summand oracle over the full subgroup lattice.
#[derive(Clone, Debug)]
pub struct SummandOracle {
    table: SmallGroup,
    lattice: Vec<u64>,
}

impl SummandOracle {
    pub fn new(group: &FinAbGroup) -> Result<SummandOracle> {
        let table = SmallGroup::new(group)?;
        let lattice = table.subgroup_lattice();
        Ok(SummandOracle { table, lattice })
    }

    pub fn table(&self) -> &SmallGroup {
        &self.table
    }

    pub fn lattice(&self) -> &[u64] {
        &self.lattice
    }

    /// First subgroup `C` in lattice order with `S ∩ C = 0` and `|S||C| = |B|`.
    pub fn complement_mask(&self, s: u64) -> Option<u64> {
        let target = self.table.order() as u32 / s.count_ones();
        self.lattice
            .iter()
            .copied()
            .find(|&c| c.count_ones() == target && c & s == 1)
    }

    pub fn complement(&self, s: &Subgroup) -> Option<Subgroup> {
        let mask = self.table.mask_of(s);
        self.complement_mask(mask).map(|c| self.table.to_subgroup(c))
    }
}

/// One-shot summand check by exhaustive search.
pub fn find_complement(b: &FinAbGroup, s: &Subgroup) -> Result<Option<Subgroup>> {
    Ok(SummandOracle::new(b)?.complement(s))
}

/// Every `a'` with `m a' = a`, by scanning the group.
pub fn divisibility_witnesses(a_group: &FinAbGroup, a: &GroupElement, m: u64) -> Vec<GroupElement> {
    a_group
        .elements()
        .filter(|x| &a_group.scale(x, m) == a)
        .collect()
}
