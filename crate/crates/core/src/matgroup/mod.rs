//! Finite subgroups of `GL_n(Z/m)` with complete element tables, modules
//! they act on, and the congruence-subgroup family `H2`, `G2`, `N`, `G3`.

mod family;

pub use family::{
    build_g, build_g2, build_g3, build_h2, build_n, check_prime, h2_element, h2_parameters,
    m_ab, norm_matrix,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmat::{kernel, RowSpan, ZModMatrix};

/// Default limit on the number of elements produced by [`closure`].
pub const DEFAULT_CAP: usize = 1_000_000;

/// A finite matrix group with its full element table.
///
/// Element 0 is the identity. Every other element `j` was first reached as
/// `elements[parent[j]] * generators[via[j]]`.
#[derive(Clone, Debug)]
pub struct MatGroup {
    modulus: u64,
    dim: usize,
    generators: Vec<ZModMatrix>,
    elements: Vec<ZModMatrix>,
    index: HashMap<Vec<u64>, u32>,
    parent: Vec<u32>,
    via: Vec<u32>,
    /// `succ[i * ngens + s]` = index of `elements[i] * generators[s]`.
    succ: Vec<u32>,
}

/// JSON description: `{"modulus", "dim", "generators"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub modulus: u64,
    pub dim: usize,
    pub generators: Vec<ZModMatrix>,
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<MatGroup> {
        closure(self.modulus, self.dim, &self.generators, cap)
    }
}

/// Breadth-first closure of the generators. Fails rather than truncating
/// once more than `cap` elements appear.
pub fn closure(modulus: u64, dim: usize, generators: &[ZModMatrix], cap: usize) -> Result<MatGroup> {
    let id = ZModMatrix::identity(modulus, dim)?;
    for g in generators {
        if g.modulus() != modulus {
            return Err(Error::ModulusMismatch(g.modulus(), modulus));
        }
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, expected {dim}x{dim}",
                g.rows(),
                g.cols()
            )));
        }
        if !g.is_invertible()? {
            return Err(Error::NotInvertible);
        }
    }
    let ngens = generators.len();
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id.entries().to_vec(), 0u32);
    let mut parent = vec![0u32];
    let mut via = vec![0u32];
    let mut succ: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (s, g) in generators.iter().enumerate() {
            let y = elements[head].mul(g)?;
            let j = match index.get(y.entries()) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    let j = elements.len() as u32;
                    index.insert(y.entries().to_vec(), j);
                    elements.push(y);
                    parent.push(head as u32);
                    via.push(s as u32);
                    j
                }
            };
            succ.push(j);
        }
        head += 1;
    }
    debug_assert_eq!(succ.len(), elements.len() * ngens);
    Ok(MatGroup {
        modulus,
        dim,
        generators: generators.to_vec(),
        elements,
        index,
        parent,
        via,
        succ,
    })
}

impl MatGroup {
    pub fn trivial(modulus: u64, dim: usize) -> Result<MatGroup> {
        closure(modulus, dim, &[], 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[ZModMatrix] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn elements(&self) -> &[ZModMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ZModMatrix {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &ZModMatrix) -> Option<usize> {
        if x.modulus() != self.modulus || x.rows() != self.dim || x.cols() != self.dim {
            return None;
        }
        self.index.get(x.entries()).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &ZModMatrix) -> bool {
        self.index_of(x).is_some()
    }

    /// Index of `elements[i] * generators[s]`.
    pub fn succ(&self, i: usize, s: usize) -> usize {
        self.succ[i * self.ngens() + s] as usize
    }

    /// BFS tree edge into `j`: `(parent, generator)`; `None` for the identity.
    pub fn tree_edge(&self, j: usize) -> Option<(usize, usize)> {
        (j != 0).then(|| (self.parent[j] as usize, self.via[j] as usize))
    }

    /// Generator word `w` with `elements[j] = g_{w_0} g_{w_1} ...`.
    pub fn word(&self, mut j: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, s)) = self.tree_edge(j) {
            w.push(s);
            j = p;
        }
        w.reverse();
        w
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        self.word(j).into_iter().fold(i, |acc, s| self.succ(acc, s))
    }

    pub fn inverse_idx(&self, i: usize) -> usize {
        let inv = self.elements[i].inverse().expect("group elements are invertible");
        self.index_of(&inv).expect("closed under inverses")
    }

    /// Indices of `<elements[i]>`, in power order starting at the identity.
    pub fn cyclic_indices(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut cur = i;
        while cur != 0 {
            out.push(cur);
            cur = self.mul_idx(cur, i);
        }
        out
    }

    pub fn element_order_idx(&self, i: usize) -> u64 {
        self.cyclic_indices(i).len() as u64
    }

    /// One representative per distinct cyclic subgroup, as `(generator index,
    /// sorted element indices)`, in order of first appearance.
    pub fn cyclic_subgroup_sets(&self) -> Vec<(usize, Vec<usize>)> {
        let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
        let mut out = Vec::new();
        for i in 0..self.order() {
            let mut set = self.cyclic_indices(i);
            set.sort_unstable();
            if seen.insert(set.clone(), ()).is_none() {
                out.push((i, set));
            }
        }
        out
    }

    /// Every distinct cyclic subgroup as a group generated by one element.
    pub fn cyclic_subgroups(&self) -> Result<Vec<MatGroup>> {
        self.cyclic_subgroup_sets()
            .into_iter()
            .map(|(i, _)| self.cyclic_subgroup(i))
            .collect()
    }

    pub fn cyclic_subgroup(&self, i: usize) -> Result<MatGroup> {
        closure(self.modulus, self.dim, &[self.elements[i].clone()], self.order())
    }

    /// Subgroup generated by the given elements of `self`.
    pub fn subgroup(&self, generators: &[ZModMatrix]) -> Result<MatGroup> {
        if generators.iter().any(|g| !self.contains(g)) {
            return Err(Error::NotASubgroup);
        }
        closure(self.modulus, self.dim, generators, self.order())
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// Index map of the elements of `self` inside `ambient`.
    pub fn embedding_into(&self, ambient: &MatGroup) -> Result<Vec<usize>> {
        self.elements
            .iter()
            .map(|x| ambient.index_of(x).ok_or(Error::NotASubgroup))
            .collect()
    }

    /// Whether `h` is a normal subgroup of `self`.
    pub fn is_normal(&self, h: &MatGroup) -> Result<bool> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotASubgroup);
        }
        for g in &self.generators {
            let gi = g.inverse()?;
            for x in &h.generators {
                if !h.contains(&g.mul(x)?.mul(&gi)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_abelian(&self) -> Result<bool> {
        for a in &self.generators {
            for b in &self.generators {
                if a.mul(b)? != b.mul(a)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Entrywise reduction into `target`, as an index map.
    pub fn reduction_map(&self, target: &MatGroup) -> Result<Vec<usize>> {
        if self.modulus % target.modulus != 0 || self.dim != target.dim {
            return Err(Error::ModulusMismatch(self.modulus, target.modulus));
        }
        self.elements
            .iter()
            .map(|x| {
                let r = x.reduce_modulus(target.modulus)?;
                target.index_of(&r).ok_or(Error::NotASubgroup)
            })
            .collect()
    }

    /// Full preimage of `self` under reduction `Z/modulus -> Z/self.modulus`,
    /// built from generator lifts and the congruence kernel `1 + m E_ij`.
    /// Requires `self.modulus | modulus | self.modulus^2`; the order is
    /// checked against `|self| * (modulus / self.modulus)^(dim^2)`.
    pub fn preimage_under_reduction(&self, modulus: u64, cap: usize) -> Result<MatGroup> {
        let m = self.modulus;
        if modulus % m != 0 || (m as u128 * m as u128) % modulus as u128 != 0 || modulus == m {
            return Err(Error::Invalid(format!(
                "cannot lift from Z/{m} to Z/{modulus}"
            )));
        }
        let mut gens: Vec<ZModMatrix> = self
            .generators
            .iter()
            .map(|g| g.lift_to(modulus))
            .collect::<Result<_>>()?;
        gens.extend(congruence_kernel_generators(modulus, m, self.dim)?);
        let big = closure(modulus, self.dim, &gens, cap)?;
        let ratio = (modulus / m) as u128;
        let expected = self.order() as u128 * ratio.pow((self.dim * self.dim) as u32);
        if big.order() as u128 != expected {
            return Err(Error::Invalid(format!(
                "preimage has {} elements, expected {expected}",
                big.order()
            )));
        }
        Ok(big)
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            modulus: self.modulus,
            dim: self.dim,
            generators: self.generators.clone(),
        }
    }
}

/// Generators `1 + step * E_ij` of the kernel of reduction mod `step`.
pub fn congruence_kernel_generators(modulus: u64, step: u64, dim: usize) -> Result<Vec<ZModMatrix>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let mut x = ZModMatrix::identity(modulus, dim)?;
            x.set(i, j, (x.get(i, j) + step) % modulus);
            out.push(x);
        }
    }
    Ok(out)
}

/// Order of an invertible matrix, by iteration.
pub fn element_order(x: &ZModMatrix) -> Result<u64> {
    if !x.is_invertible()? {
        return Err(Error::NotInvertible);
    }
    let mut cur = x.clone();
    let mut k = 1;
    while !cur.is_identity() {
        cur = cur.mul(x)?;
        k += 1;
    }
    Ok(k)
}

/// The module `(Z/modulus)^rank` with an action given on the generators of
/// some group; actions are column-vector: `g . v = rho(g) v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GModule {
    pub modulus: u64,
    pub rank: usize,
    pub generator_action: Vec<ZModMatrix>,
}

impl GModule {
    /// The defining representation.
    pub fn natural(g: &MatGroup) -> GModule {
        GModule {
            modulus: g.modulus,
            rank: g.dim,
            generator_action: g.generators.clone(),
        }
    }

    pub fn trivial(g: &MatGroup, modulus: u64, rank: usize) -> Result<GModule> {
        let id = ZModMatrix::identity(modulus, rank)?;
        Ok(GModule {
            modulus,
            rank,
            generator_action: vec![id; g.ngens()],
        })
    }

    /// Validates that the generator images extend to a homomorphism.
    pub fn from_generator_action(g: &MatGroup, modulus: u64, rank: usize, action: Vec<ZModMatrix>) -> Result<GModule> {
        let m = GModule {
            modulus,
            rank,
            generator_action: action,
        };
        m.action_table(g)?;
        Ok(m)
    }

    /// Action matrix of every element of `g`, checking every relation
    /// `elements[i] * gen_s = elements[succ]` seen during closure.
    pub fn action_table(&self, g: &MatGroup) -> Result<Vec<ZModMatrix>> {
        if self.generator_action.len() != g.ngens() {
            return Err(Error::BadAction(format!(
                "{} action matrices for {} generators",
                self.generator_action.len(),
                g.ngens()
            )));
        }
        for a in &self.generator_action {
            if a.modulus() != self.modulus || a.rows() != self.rank || a.cols() != self.rank {
                return Err(Error::BadAction("action matrix has the wrong shape or modulus".into()));
            }
            if !a.is_invertible()? {
                return Err(Error::BadAction("action matrix is not invertible".into()));
            }
        }
        let mut table = vec![ZModMatrix::identity(self.modulus, self.rank)?; g.order()];
        for j in 1..g.order() {
            let (p, s) = g.tree_edge(j).expect("non-identity");
            table[j] = table[p].mul(&self.generator_action[s])?;
        }
        for i in 0..g.order() {
            for s in 0..g.ngens() {
                let j = g.succ(i, s);
                if table[i].mul(&self.generator_action[s])? != table[j] {
                    return Err(Error::BadAction(format!(
                        "relation through element {i} and generator {s} fails"
                    )));
                }
            }
        }
        Ok(table)
    }

    /// The same module viewed over a subgroup `h` of `g`.
    pub fn restrict(&self, g: &MatGroup, h: &MatGroup) -> Result<GModule> {
        let table = self.action_table(g)?;
        let generator_action = h
            .generators()
            .iter()
            .map(|x| g.index_of(x).map(|i| table[i].clone()).ok_or(Error::NotASubgroup))
            .collect::<Result<_>>()?;
        Ok(GModule {
            modulus: self.modulus,
            rank: self.rank,
            generator_action,
        })
    }
}

/// `M^G`: joint kernel of `rho(s) - 1` over the generators, as a span of
/// vectors in `(Z/m)^rank`.
pub fn fixed_points(module: &GModule) -> Result<RowSpan> {
    let (m, n) = (module.modulus, module.rank);
    let mut stacked = ZModMatrix::zeros(m, n, 0)?;
    for a in &module.generator_action {
        stacked = stacked.hstack(&a.minus_identity()?.transpose())?;
    }
    Ok(RowSpan::of(&kernel(&stacked)))
}
