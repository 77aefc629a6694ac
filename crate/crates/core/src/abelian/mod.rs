//! Finite abelian groups in invariant-factor form, their homomorphisms and
//! subgroups, and the divisibility vocabulary: `m`-divisible elements,
//! maps preserving (`n`-)divisibility, pure subgroups, direct summands.
//!
//! A group `Z/d_1 + ... + Z/d_r` is handled as `(Z/e)^r` modulo the
//! relations `diag(d_1, ..., d_r)`, where `e` is a multiple of the
//! exponent, so every question reduces to Howell-form linear algebra.

pub mod oracle;
pub mod random;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::modmat::ring::{divisors, factorize, lcm};
use crate::modmat::{kernel, solve, RowSpan, Subquotient, ZModMatrix};

/// Finite abelian group `Z/d_1 + ... + Z/d_r` with `d_1 | d_2 | ... | d_r`
/// and every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupLiteral", into = "GroupLiteral")]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupLiteral {
    invariant_factors: Vec<u64>,
}

impl TryFrom<GroupLiteral> for FinAbGroup {
    type Error = Error;
    fn try_from(l: GroupLiteral) -> Result<Self> {
        FinAbGroup::from_invariant_factors(l.invariant_factors)
    }
}

impl From<FinAbGroup> for GroupLiteral {
    fn from(g: FinAbGroup) -> Self {
        GroupLiteral {
            invariant_factors: g.factors,
        }
    }
}

/// Coordinates of an element against the invariant-factor generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

/// Result of canonicalizing a product of cyclic groups.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    pub group: FinAbGroup,
    /// Orders of the input cyclic factors.
    pub orders: Vec<u64>,
    forward: ZModMatrix,
    backward: ZModMatrix,
}

impl CyclicDecomposition {
    /// Maps an element of `Z/o_1 + ... + Z/o_k` to invariant-factor coordinates.
    pub fn to_canonical(&self, x: &[u64]) -> Result<GroupElement> {
        if x.len() != self.orders.len() {
            return Err(Error::DimensionMismatch("product coordinates".into()));
        }
        if self.group.rank() == 0 {
            return Ok(self.group.zero());
        }
        let y = self.forward.vec_mul(&lift(x, self.forward.modulus()))?;
        Ok(self.group.reduce(&y))
    }

    /// Maps invariant-factor coordinates back to the product coordinates.
    pub fn from_canonical(&self, x: &GroupElement) -> Result<Vec<u64>> {
        self.group.check(x)?;
        if self.orders.is_empty() {
            return Ok(vec![]);
        }
        if self.group.rank() == 0 {
            return Ok(vec![0; self.orders.len()]);
        }
        let y = self.backward.vec_mul(&lift(&x.0, self.backward.modulus()))?;
        Ok(y.iter().zip(&self.orders).map(|(&v, &o)| v % o).collect())
    }
}

fn lift(x: &[u64], modulus: u64) -> Vec<u64> {
    x.iter().map(|&v| v % modulus).collect()
}

/// Canonical invariant-factor form of `Z/o_1 + ... + Z/o_k`.
pub fn ab_group_new(orders: &[u64]) -> Result<CyclicDecomposition> {
    if let Some(&o) = orders.iter().find(|&&o| o < 2) {
        return Err(Error::InvalidOrder(o));
    }
    let e = orders.iter().fold(1, |acc, &o| lcm(acc, o)).max(2);
    let rel = ZModMatrix::diagonal(e, orders)?;
    let sup = RowSpan::full(e, orders.len())?;
    let sub = RowSpan::of(&rel);
    let q = Subquotient::new(&sup, &sub)?;
    let group = FinAbGroup {
        factors: q.factors(),
    };
    // forward: e_i -> coordinates of e_i; backward: generator j -> rep
    let mut fwd = Vec::with_capacity(orders.len());
    for i in 0..orders.len() {
        let mut v = vec![0; orders.len()];
        v[i] = 1;
        fwd.push(q.coordinates(&v)?.expect("full span"));
    }
    let r = group.rank();
    let forward = ZModMatrix::from_reduced_rows(e, r, fwd)?;
    let backward = ZModMatrix::from_reduced_rows(e, orders.len(), q.generators().to_vec())?;
    Ok(CyclicDecomposition {
        group,
        orders: orders.to_vec(),
        forward,
        backward,
    })
}

impl FinAbGroup {
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<FinAbGroup> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidOrder(d));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid(format!(
                "invariant factors {factors:?} do not form a divisibility chain"
            )));
        }
        Ok(FinAbGroup { factors })
    }

    /// Any list of cyclic orders, canonicalized.
    pub fn from_orders(orders: &[u64]) -> Result<FinAbGroup> {
        Ok(ab_group_new(orders)?.group)
    }

    pub fn trivial() -> FinAbGroup {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Result<FinAbGroup> {
        if n == 1 {
            return Ok(Self::trivial());
        }
        Self::from_invariant_factors(vec![n])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_n_torsion(&self, n: u64) -> bool {
        n % self.exponent() == 0
    }

    /// Modulus used to embed the group in `(Z/e)^r`; at least 2 so the
    /// trivial group still has a valid (zero-dimensional) ambient.
    pub fn work_modulus(&self) -> u64 {
        self.exponent().max(2)
    }

    /// `diag(d_i)` over `Z/modulus`; `modulus` must be a multiple of the exponent.
    pub fn relations(&self, modulus: u64) -> ZModMatrix {
        debug_assert_eq!(modulus % self.exponent(), 0);
        ZModMatrix::diagonal(modulus, &self.factors).expect("valid modulus")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        GroupElement(v)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.0.len() != self.rank() || x.0.iter().zip(&self.factors).any(|(&v, &d)| v >= d) {
            return Err(Error::NotAnElement(x.0.clone()));
        }
        Ok(())
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.check(x).is_ok()
    }

    /// Reduces arbitrary residues coordinate-wise.
    pub fn reduce(&self, v: &[u64]) -> GroupElement {
        GroupElement(v.iter().zip(&self.factors).map(|(&x, &d)| x % d).collect())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.factors)
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &d)| (d - a) % d)
                .collect(),
        )
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &GroupElement, k: u64) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &d)| ((a as u128 * (k % d) as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub fn is_zero(&self, x: &GroupElement) -> bool {
        x.0.iter().all(|&v| v == 0)
    }

    pub fn element_order(&self, x: &GroupElement) -> u64 {
        x.0.iter()
            .zip(&self.factors)
            .fold(1, |acc, (&a, &d)| lcm(acc, d / crate::modmat::ring::gcd(a, d)))
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let n = self.order() as u64;
        (0..n).map(move |mut idx| {
            let mut v = Vec::with_capacity(self.rank());
            for &d in &self.factors {
                v.push(idx % d);
                idx /= d;
            }
            GroupElement(v)
        })
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup {
            ambient: self.clone(),
            generators: (0..self.rank()).map(|i| self.generator(i)).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            ambient: self.clone(),
            generators: vec![],
        }
    }

    /// `self + other` with the two coordinate inclusions.
    pub fn direct_sum(&self, other: &FinAbGroup) -> Result<(FinAbGroup, AbHom, AbHom)> {
        let orders: Vec<u64> = self.factors.iter().chain(&other.factors).copied().collect();
        let dec = ab_group_new(&orders)?;
        let sum = dec.group.clone();
        let (r1, r2) = (self.rank(), other.rank());
        let mut left = Vec::new();
        for i in 0..r1 {
            let mut v = vec![0; r1 + r2];
            v[i] = 1;
            left.push(dec.to_canonical(&v)?);
        }
        let mut right = Vec::new();
        for i in 0..r2 {
            let mut v = vec![0; r1 + r2];
            v[r1 + i] = 1;
            right.push(dec.to_canonical(&v)?);
        }
        Ok((
            sum.clone(),
            AbHom::new(self.clone(), sum.clone(), left)?,
            AbHom::new(other.clone(), sum, right)?,
        ))
    }

    /// Span of the given elements plus the relations, in `(Z/modulus)^r`.
    fn lifted_span(&self, gens: &[GroupElement], modulus: u64) -> RowSpan {
        let rows: Vec<Vec<u64>> = gens.iter().map(|g| lift(&g.0, modulus)).collect();
        let g = ZModMatrix::from_reduced_rows(modulus, self.rank(), rows).expect("reduced");
        RowSpan::of(&g.vstack(&self.relations(modulus)).expect("shape"))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Homomorphism given by the images of the domain's generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HomLiteral", into = "HomLiteral")]
pub struct AbHom {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    images: Vec<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct HomLiteral {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    matrix: Vec<Vec<u64>>,
}

impl TryFrom<HomLiteral> for AbHom {
    type Error = Error;
    fn try_from(l: HomLiteral) -> Result<Self> {
        AbHom::new(
            l.domain,
            l.codomain,
            l.matrix.into_iter().map(GroupElement).collect(),
        )
    }
}

impl From<AbHom> for HomLiteral {
    fn from(h: AbHom) -> Self {
        HomLiteral {
            domain: h.domain,
            codomain: h.codomain,
            matrix: h.images.into_iter().map(|g| g.0).collect(),
        }
    }
}

impl AbHom {
    /// Rejects image lists that are not elements of the codomain or that
    /// violate `d_j * f(e_j) = 0`.
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, images: Vec<GroupElement>) -> Result<AbHom> {
        if images.len() != domain.rank() {
            return Err(Error::IllDefinedHom(format!(
                "{} generator images for a domain of rank {}",
                images.len(),
                domain.rank()
            )));
        }
        for (j, img) in images.iter().enumerate() {
            if !codomain.contains(img) {
                return Err(Error::IllDefinedHom(format!(
                    "image {:?} of generator {j} is not a reduced element of {codomain}",
                    img.0
                )));
            }
            let d = domain.factors[j];
            if !codomain.is_zero(&codomain.scale(img, d)) {
                return Err(Error::IllDefinedHom(format!(
                    "generator {j} has order {d} but {d} * {:?} != 0",
                    img.0
                )));
            }
        }
        Ok(AbHom {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(g: &FinAbGroup) -> AbHom {
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            images: (0..g.rank()).map(|i| g.generator(i)).collect(),
        }
    }

    pub fn zero(a: &FinAbGroup, b: &FinAbGroup) -> AbHom {
        AbHom {
            domain: a.clone(),
            codomain: b.clone(),
            images: vec![b.zero(); a.rank()],
        }
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.domain.check(x)?;
        let b = &self.codomain;
        let mut acc = b.zero();
        for (&c, img) in x.0.iter().zip(&self.images) {
            acc = b.add(&acc, &b.scale(img, c));
        }
        Ok(acc)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &AbHom) -> Result<AbHom> {
        if self.codomain != then.domain {
            return Err(Error::IllDefinedHom("composition of non-composable maps".into()));
        }
        let images = self
            .images
            .iter()
            .map(|x| then.apply(x))
            .collect::<Result<Vec<_>>>()?;
        AbHom::new(self.domain.clone(), then.codomain.clone(), images)
    }

    /// Modulus under which both groups embed.
    fn common_modulus(&self) -> u64 {
        lcm(self.domain.exponent(), self.codomain.exponent()).max(2)
    }

    fn image_matrix(&self, modulus: u64) -> ZModMatrix {
        let rows = self.images.iter().map(|g| lift(&g.0, modulus)).collect();
        ZModMatrix::from_reduced_rows(modulus, self.codomain.rank(), rows).expect("reduced")
    }

    /// Generators of `{a : f(a) ∈ extra}` where `extra` is spanned by the
    /// given codomain rows (over the common modulus) plus the relations.
    fn preimage_generators(&self, extra: &[Vec<u64>]) -> Vec<GroupElement> {
        let l = self.common_modulus();
        let rb = self.codomain.rank();
        let mut stacked = self.image_matrix(l);
        if !extra.is_empty() {
            let e = ZModMatrix::from_reduced_rows(l, rb, extra.to_vec()).expect("reduced");
            stacked = stacked.vstack(&e).expect("shape");
        }
        stacked = stacked.vstack(&self.codomain.relations(l)).expect("shape");
        let ker = kernel(&stacked);
        let ra = self.domain.rank();
        let mut out: Vec<GroupElement> = ker
            .row_iter()
            .map(|row| self.domain.reduce(&row[..ra]))
            .filter(|g| !self.domain.is_zero(g))
            .collect();
        out.dedup();
        out
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup {
            ambient: self.domain.clone(),
            generators: self.preimage_generators(&[]),
        }
    }

    pub fn image(&self) -> Subgroup {
        Subgroup {
            ambient: self.codomain.clone(),
            generators: self.images.clone(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.codomain.order()
    }

    /// Generators of `f^{-1}(mB)`.
    fn preimage_of_multiples(&self, m: u64) -> Vec<GroupElement> {
        let l = self.common_modulus();
        let rb = self.codomain.rank();
        let extra: Vec<Vec<u64>> = (0..rb)
            .map(|i| {
                let mut v = vec![0; rb];
                v[i] = m % l;
                v
            })
            .collect();
        self.preimage_generators(&extra)
    }

    /// Checks injectivity of `A/m -> B/m` for one `m`; returns a witness
    /// `a` with `f(a)` m-divisible and `a` not.
    pub fn divisibility_witness(&self, m: u64) -> Option<GroupElement> {
        self.preimage_of_multiples(m)
            .into_iter()
            .find(|a| is_divisible(&self.domain, a, m).is_none())
    }

    /// Some `x` with `f(x) = y`, or `None` if `y` is not in the image.
    pub fn preimage(&self, y: &GroupElement) -> Result<Option<GroupElement>> {
        self.codomain.check(y)?;
        if self.codomain.is_zero(y) {
            return Ok(Some(self.domain.zero()));
        }
        let l = self.common_modulus();
        let stacked = self
            .image_matrix(l)
            .vstack(&self.codomain.relations(l))?;
        let Some(x) = solve(&stacked, &lift(&y.0, l))? else {
            return Ok(None);
        };
        let x = self.domain.reduce(&x[..self.domain.rank()]);
        debug_assert_eq!(&self.apply(&x)?, y);
        Ok(Some(x))
    }
}

/// Verdict of a divisibility-preservation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityVerdict {
    pub preserves: bool,
    /// `(m, a)` with `f(a)` divisible by `m` in the codomain but `a` not.
    pub counterexample: Option<(u64, GroupElement)>,
}

fn verdict_over(f: &AbHom, ms: impl IntoIterator<Item = u64>) -> DivisibilityVerdict {
    for m in ms {
        if let Some(a) = f.divisibility_witness(m) {
            return DivisibilityVerdict {
                preserves: false,
                counterexample: Some((m, a)),
            };
        }
    }
    DivisibilityVerdict {
        preserves: true,
        counterexample: None,
    }
}

/// Whether `f` preserves `n`-divisibility, checking every divisor `m | n`.
pub fn preserves_n_divisibility(f: &AbHom, n: u64) -> DivisibilityVerdict {
    verdict_over(f, divisors(n).into_iter().filter(|&m| m > 1))
}

/// Same as [`preserves_n_divisibility`] but only over prime-power divisors.
pub fn preserves_n_divisibility_prime_powers(f: &AbHom, n: u64) -> DivisibilityVerdict {
    let mut ms = Vec::new();
    for (p, e) in factorize(n) {
        let mut q = 1;
        for _ in 0..e {
            q *= p;
            ms.push(q);
        }
    }
    ms.sort_unstable();
    verdict_over(f, ms)
}

/// Whether `f` preserves divisibility for every `m >= 1`. Only
/// `gcd(m, lcm(exponents))` matters, so `m` up to that lcm suffices.
pub fn preserves_divisibility(f: &AbHom) -> DivisibilityVerdict {
    let l = lcm(f.domain.exponent(), f.codomain.exponent());
    verdict_over(f, 2..=l)
}

/// Some `a'` with `m a' = a`, or `None` if `a` is not divisible by `m` in `A`.
pub fn is_divisible(a_group: &FinAbGroup, a: &GroupElement, m: u64) -> Option<GroupElement> {
    if a_group.check(a).is_err() {
        return None;
    }
    if a_group.is_zero(a) {
        return Some(a_group.zero());
    }
    let e = a_group.work_modulus();
    let r = a_group.rank();
    let scaled = ZModMatrix::identity(e, r).expect("modulus").scale(m % e);
    let stacked = scaled.vstack(&a_group.relations(e)).expect("shape");
    let x = solve(&stacked, &lift(&a.0, e)).expect("dimensions")?;
    let w = a_group.reduce(&x[..r]);
    debug_assert_eq!(&a_group.scale(&w, m), a);
    Some(w)
}

/// Subgroup given by generators inside an ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub ambient: FinAbGroup,
    pub generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(ambient: FinAbGroup, generators: Vec<GroupElement>) -> Result<Subgroup> {
        for g in &generators {
            ambient.check(g)?;
        }
        Ok(Subgroup {
            ambient,
            generators,
        })
    }

    fn span(&self) -> RowSpan {
        self.ambient
            .lifted_span(&self.generators, self.ambient.work_modulus())
    }

    pub fn order(&self) -> u128 {
        let e = self.ambient.work_modulus();
        let rel = RowSpan::of(&self.ambient.relations(e));
        let q = Subquotient::new(&self.span(), &rel).expect("relations inside span");
        u128::try_from(q.order()).expect("order fits in u128")
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.ambient.contains(x) && self.span().contains(&lift(&x.0, self.ambient.work_modulus()))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_set(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.span() == other.span()
    }

    /// `mS`.
    pub fn multiple(&self, m: u64) -> Subgroup {
        Subgroup {
            ambient: self.ambient.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| self.ambient.scale(g, m))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::NotASubgroup);
        }
        let s = self.span().intersect(&other.span())?;
        Ok(Subgroup {
            ambient: self.ambient.clone(),
            generators: s
                .basis()
                .row_iter()
                .map(|r| self.ambient.reduce(r))
                .filter(|g| !self.ambient.is_zero(g))
                .collect(),
        })
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::NotASubgroup);
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Subgroup {
            ambient: self.ambient.clone(),
            generators,
        })
    }

    /// The subgroup as an abstract group with its inclusion map.
    pub fn abstract_form(&self) -> (FinAbGroup, AbHom) {
        let e = self.ambient.work_modulus();
        let rel = RowSpan::of(&self.ambient.relations(e));
        let q = Subquotient::new(&self.span(), &rel).expect("relations inside span");
        let group = FinAbGroup {
            factors: q.factors(),
        };
        let images = q
            .generators()
            .iter()
            .map(|g| self.ambient.reduce(g))
            .collect();
        let inc = AbHom::new(group.clone(), self.ambient.clone(), images)
            .expect("subquotient generators have the reported orders");
        (group, inc)
    }
}

pub fn kernel_subgroup(f: &AbHom) -> Subgroup {
    f.kernel()
}

pub fn image_subgroup(f: &AbHom) -> Subgroup {
    f.image()
}

/// `B/S` in invariant-factor form with the projection `B -> B/S`.
pub fn quotient(b: &FinAbGroup, s: &Subgroup) -> Result<(FinAbGroup, AbHom)> {
    if &s.ambient != b {
        return Err(Error::NotASubgroup);
    }
    let e = b.work_modulus();
    let sup = RowSpan::full(e, b.rank())?;
    let q = Subquotient::new(&sup, &s.span())?;
    let qg = FinAbGroup {
        factors: q.factors(),
    };
    let mut images = Vec::with_capacity(b.rank());
    for i in 0..b.rank() {
        let mut v = vec![0; b.rank()];
        v[i] = 1;
        images.push(GroupElement(q.coordinates(&v)?.expect("full span")));
    }
    let proj = AbHom::new(b.clone(), qg.clone(), images)?;
    Ok((qg, proj))
}

/// Pushout of `f1: A -> B` and `f2: A -> C`: the group
/// `(B + C) / {(f1(a), -f2(a))}` with its two canonical maps.
pub fn pushout(f1: &AbHom, f2: &AbHom) -> Result<(FinAbGroup, AbHom, AbHom)> {
    if f1.domain() != f2.domain() {
        return Err(Error::IllDefinedHom("pushout of maps with different domains".into()));
    }
    let (b, c) = (f1.codomain(), f2.codomain());
    let (sum, i1, i2) = b.direct_sum(c)?;
    let relations = (0..f1.domain().rank())
        .map(|j| {
            let x = i1.apply(&f1.images()[j])?;
            let y = i2.apply(&f2.images()[j])?;
            Ok(sum.sub(&x, &y))
        })
        .collect::<Result<Vec<_>>>()?;
    let (p, proj) = quotient(&sum, &Subgroup::new(sum.clone(), relations)?)?;
    Ok((p, i1.then(&proj)?, i2.then(&proj)?))
}

/// One representative of every isomorphism class of order `1..=max_order`,
/// ordered by order and then by invariant factors.
pub fn all_groups(max_order: u64) -> Vec<FinAbGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        let mut choices: Vec<Vec<u64>> = vec![vec![]];
        for (p, e) in factorize(n) {
            let mut next = Vec::new();
            for part in partitions(e) {
                for prev in &choices {
                    let mut orders = prev.clone();
                    orders.extend(part.iter().map(|&k| p.pow(k)));
                    next.push(orders);
                }
            }
            choices = next;
        }
        let mut groups: Vec<FinAbGroup> = choices
            .iter()
            .map(|o| FinAbGroup::from_orders(o).expect("prime powers"))
            .collect();
        groups.sort_by(|x, y| x.factors.cmp(&y.factors));
        out.extend(groups);
    }
    out
}

/// Partitions of `e` into positive parts, each in non-increasing order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// `C[n] = {c : n c = 0}`.
pub fn torsion_subgroup(c: &FinAbGroup, n: u64) -> Subgroup {
    let generators = c
        .invariant_factors()
        .iter()
        .enumerate()
        .filter_map(|(i, &d)| {
            let g = crate::modmat::ring::gcd(d, n);
            (g > 1).then(|| {
                let mut v = vec![0; c.rank()];
                v[i] = d / g;
                GroupElement(v)
            })
        })
        .collect();
    Subgroup {
        ambient: c.clone(),
        generators,
    }
}

/// Whether `S ∩ mB = mS` for every `m | n`. Requires `exponent(B) | n`.
pub fn is_pure_subgroup(b: &FinAbGroup, s: &Subgroup, n: u64) -> Result<bool> {
    if &s.ambient != b {
        return Err(Error::NotASubgroup);
    }
    if !b.is_n_torsion(n) {
        return Err(Error::Invalid(format!("{b} is not {n}-torsion")));
    }
    for m in divisors(n) {
        let mb = b.whole().multiple(m);
        let cap = s.intersect(&mb)?;
        let ms = s.multiple(m);
        if !cap.is_subgroup_of(&ms) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A complement `C` with `B = S ⊕ C`, or `None` if `S` is not a summand.
///
/// Existence is decided by divisibility preservation of the inclusion at
/// `n = exponent(B)`; the complement is then built by lifting each cyclic
/// generator of `B/S` to an element of the same order, using purity.
pub fn is_direct_summand(b: &FinAbGroup, s: &Subgroup) -> Result<Option<Subgroup>> {
    if &s.ambient != b {
        return Err(Error::NotASubgroup);
    }
    let (_, inc) = s.abstract_form();
    if !preserves_n_divisibility(&inc, b.exponent()).preserves {
        return Ok(None);
    }
    let e = b.work_modulus();
    let r = b.rank();
    let sup = RowSpan::full(e, r)?;
    let q = Subquotient::new(&sup, &s.span())?;
    let mut comp = Vec::new();
    for (g, &qj) in q.generators().iter().zip(q.factors().iter()) {
        let lift_b = b.reduce(g);
        let target = b.scale(&lift_b, qj);
        // find s in S with qj*s = qj*lift_b
        let gens_scaled: Vec<GroupElement> = s.generators.iter().map(|x| b.scale(x, qj)).collect();
        let t = gens_scaled.len();
        let mut rows: Vec<Vec<u64>> = gens_scaled.iter().map(|x| x.0.clone()).collect();
        rows.extend(b.relations(e).to_rows());
        let mat = ZModMatrix::from_reduced_rows(e, r, rows)?;
        let Some(x) = solve(&mat, &target.0)? else {
            return Err(Error::Invalid(
                "inclusion preserves divisibility but complement lift failed".into(),
            ));
        };
        let mut sv = b.zero();
        for (c, gen) in x[..t].iter().zip(&s.generators) {
            sv = b.add(&sv, &b.scale(gen, *c));
        }
        comp.push(b.sub(&lift_b, &sv));
    }
    let c = Subgroup::new(b.clone(), comp)?;
    let meet = s.intersect(&c)?;
    if meet.order() != 1 || s.order() * c.order() != b.order() {
        return Err(Error::Invalid("constructed complement failed verification".into()));
    }
    Ok(Some(c))
}
