//! First cohomology `H^1(G, M)` of a finite matrix group acting on
//! `M = (Z/m)^n`, its locally trivial part `H^1_cyc`, restriction and
//! inflation.
//!
//! A cocycle is stored by its values on the group's generators, flattened
//! into one vector of length `ngens * rank` (block `s` is `Z(g_s)`). The
//! value on any other element is a linear expression in these unknowns,
//! obtained along the breadth-first tree of the group closure.

mod inflation;
pub mod oracle;

pub use inflation::{verify_inf_res_exactness, ExactnessReport, Inflation, ModuleMap};

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbHom, FinAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::matgroup::{closure, GModule, MatGroup};
use crate::modmat::{kernel, solve, HowellBuilder, RowSpan, Subquotient, ZModMatrix};

/// A group together with a module it acts on and the action of every element.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: Arc<MatGroup>,
    module: GModule,
    table: Arc<Vec<ZModMatrix>>,
}

impl GroupAction {
    pub fn new(group: Arc<MatGroup>, module: GModule) -> Result<GroupAction> {
        let table = module.action_table(&group)?;
        Ok(GroupAction {
            group,
            module,
            table: Arc::new(table),
        })
    }

    /// The defining representation `(Z/m)^dim`.
    pub fn natural(group: Arc<MatGroup>) -> GroupAction {
        let module = GModule::natural(&group);
        let table = Arc::new(group.elements().to_vec());
        GroupAction {
            group,
            module,
            table,
        }
    }

    pub fn group(&self) -> &Arc<MatGroup> {
        &self.group
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn modulus(&self) -> u64 {
        self.module.modulus
    }

    pub fn rank(&self) -> usize {
        self.module.rank
    }

    /// Length of a generator-value vector.
    pub fn unknowns(&self) -> usize {
        self.group.ngens() * self.rank()
    }

    /// Action matrix of element `i`.
    pub fn act(&self, i: usize) -> &ZModMatrix {
        &self.table[i]
    }

    /// The same module over a subgroup whose elements lie in `self.group`.
    pub fn restrict_to(&self, h: Arc<MatGroup>) -> Result<GroupAction> {
        let idx: Vec<usize> = h
            .generators()
            .iter()
            .map(|x| self.group.index_of(x).ok_or(Error::NotASubgroup))
            .collect::<Result<_>>()?;
        let module = GModule {
            modulus: self.modulus(),
            rank: self.rank(),
            generator_action: idx.iter().map(|&i| self.table[i].clone()).collect(),
        };
        GroupAction::new(h, module)
    }
}

/// A 1-cocycle, stored by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocycle {
    pub values: Vec<u64>,
}

impl Cocycle {
    pub fn zero(action: &GroupAction) -> Cocycle {
        Cocycle {
            values: vec![0; action.unknowns()],
        }
    }

    pub fn on_generator(&self, action: &GroupAction, s: usize) -> &[u64] {
        let n = action.rank();
        &self.values[s * n..(s + 1) * n]
    }

    /// Values on every element, via `Z(x s) = Z(x) + x . Z(s)` along the
    /// closure tree.
    pub fn table(&self, action: &GroupAction) -> Vec<Vec<u64>> {
        let g = action.group();
        let r = ZModMatrix::identity(action.modulus(), 1).expect("modulus").ring();
        let mut out = vec![vec![0u64; action.rank()]; g.order()];
        for j in 1..g.order() {
            let (p, s) = g.tree_edge(j).expect("non-identity");
            let moved = action.act(p).apply(self.on_generator(action, s)).expect("shape");
            out[j] = out[p].iter().zip(&moved).map(|(&a, &b)| r.add(a, b)).collect();
        }
        out
    }

    /// Checks `Z(x s) = Z(x) + x . Z(s)` on every closure edge, which is
    /// equivalent to the full cocycle identity.
    pub fn is_cocycle(&self, action: &GroupAction) -> bool {
        let g = action.group();
        let t = self.table(action);
        let r = ZModMatrix::identity(action.modulus(), 1).expect("modulus").ring();
        for i in 0..g.order() {
            for s in 0..g.ngens() {
                let moved = action.act(i).apply(self.on_generator(action, s)).expect("shape");
                let rhs: Vec<u64> = t[i].iter().zip(&moved).map(|(&a, &b)| r.add(a, b)).collect();
                if t[g.succ(i, s)] != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &Cocycle, modulus: u64) -> Cocycle {
        Cocycle {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| (a + b) % modulus)
                .collect(),
        }
    }
}

/// `g -> (g - 1) m`.
pub fn coboundary(action: &GroupAction, m: &[u64]) -> Result<Cocycle> {
    if m.len() != action.rank() {
        return Err(Error::DimensionMismatch("module element length".into()));
    }
    let mut values = Vec::with_capacity(action.unknowns());
    for a in &action.module().generator_action {
        values.extend(a.minus_identity()?.apply(m)?);
    }
    Ok(Cocycle { values })
}

/// Some `m` with `Z = coboundary(m)`, or `None`.
pub fn is_coboundary(action: &GroupAction, z: &Cocycle) -> Result<Option<Vec<u64>>> {
    if z.values.len() != action.unknowns() {
        return Err(Error::DimensionMismatch("cocycle length".into()));
    }
    let (m, n) = (action.modulus(), action.rank());
    if z.values.is_empty() {
        return Ok(Some(vec![0; n]));
    }
    // m^T [ (g_1 - 1)^T | (g_2 - 1)^T | ... ] = Z^T
    let mut stacked = ZModMatrix::zeros(m, n, 0)?;
    for a in &action.module().generator_action {
        stacked = stacked.hstack(&a.minus_identity()?.transpose())?;
    }
    solve(&stacked, &z.values)
}

/// `Z` restricted to a subgroup (whose action is the restricted action).
pub fn restrict(action: &GroupAction, z: &Cocycle, sub: &GroupAction) -> Result<Cocycle> {
    if sub.modulus() != action.modulus() || sub.rank() != action.rank() {
        return Err(Error::DimensionMismatch("restriction to a different module".into()));
    }
    let table = z.table(action);
    let mut values = Vec::with_capacity(sub.unknowns());
    for x in sub.group().generators() {
        let i = action.group().index_of(x).ok_or(Error::NotASubgroup)?;
        values.extend_from_slice(&table[i]);
    }
    Ok(Cocycle { values })
}

/// Linear expressions of every element's cocycle value in the generator
/// unknowns, plus the Howell basis of all consistency constraints.
struct Propagation {
    width: usize,
    rank: usize,
    /// `exprs[j]` is a `rank x width` row-major matrix with `Z(x_j) = exprs[j] u`.
    exprs: Vec<Vec<u64>>,
    constraints: HowellBuilder,
}

impl Propagation {
    fn expr(&self, j: usize) -> &[u64] {
        &self.exprs[j]
    }
}

fn propagate(action: &GroupAction) -> Propagation {
    let g = action.group();
    let (m, n) = (action.modulus(), action.rank());
    let width = action.unknowns();
    let r = ZModMatrix::identity(m, 1).expect("modulus").ring();
    // exprs[x s] = exprs[x] + rho(x) E_s, with E_s selecting block s
    let step = |base: &[u64], x: usize, s: usize| -> Vec<u64> {
        let mut e = base.to_vec();
        let rho = action.act(x);
        for i in 0..n {
            for k in 0..n {
                let c = i * width + s * n + k;
                e[c] = r.add(e[c], rho.get(i, k));
            }
        }
        e
    };
    let mut exprs = vec![vec![0u64; n * width]; g.order()];
    for j in 1..g.order() {
        let (p, s) = g.tree_edge(j).expect("non-identity");
        exprs[j] = step(&exprs[p], p, s);
    }
    let mut constraints = HowellBuilder::new(m, width);
    let mut row = vec![0u64; width];
    for i in 0..g.order() {
        for s in 0..g.ngens() {
            let j = g.succ(i, s);
            if g.tree_edge(j) == Some((i, s)) {
                continue;
            }
            let via = step(&exprs[i], i, s);
            for a in 0..n {
                for (c, x) in row.iter_mut().enumerate() {
                    *x = r.sub(exprs[j][a * width + c], via[a * width + c]);
                }
                if row.iter().any(|&x| x != 0) {
                    constraints.insert(&row);
                }
            }
        }
    }
    Propagation {
        width,
        rank: n,
        exprs,
        constraints,
    }
}

/// `{u : C u = 0}` for the span of constraint rows `C`.
fn solution_span(constraints: &HowellBuilder) -> RowSpan {
    let c = constraints.to_matrix();
    RowSpan::of(&kernel(&c.transpose()))
}

/// `Z^1` and `B^1` as subgroups of generator-value space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSpace {
    pub z1: RowSpan,
    pub b1: RowSpan,
}

impl CocycleSpace {
    pub fn unknowns(&self) -> usize {
        self.z1.dim()
    }
}

/// Span of the coboundaries of the standard basis vectors.
pub fn coboundary_span(action: &GroupAction) -> Result<RowSpan> {
    let (m, n) = (action.modulus(), action.rank());
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1 % m;
        rows.push(coboundary(action, &e)?.values);
    }
    Ok(RowSpan::of(&ZModMatrix::from_reduced_rows(m, action.unknowns(), rows)?))
}

pub fn cocycle_space(action: &GroupAction) -> Result<CocycleSpace> {
    let prop = propagate(action);
    Ok(CocycleSpace {
        z1: solution_span(&prop.constraints),
        b1: coboundary_span(action)?,
    })
}

/// A cohomology group `sup / B^1` with chosen representative cocycles.
#[derive(Clone, Debug)]
pub struct H1Group {
    quotient: Subquotient,
    representatives: Vec<Cocycle>,
}

impl H1Group {
    fn from_spans(sup: &RowSpan, b1: &RowSpan) -> Result<H1Group> {
        let quotient = Subquotient::new(sup, b1)?;
        let representatives = quotient
            .generators()
            .iter()
            .map(|g| Cocycle { values: g.clone() })
            .collect();
        Ok(H1Group {
            quotient,
            representatives,
        })
    }

    /// Invariant factors in ascending divisibility order.
    pub fn factors(&self) -> Vec<u64> {
        self.quotient.factors()
    }

    pub fn representatives(&self) -> &[Cocycle] {
        &self.representatives
    }

    pub fn order(&self) -> BigUint {
        self.quotient.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors().is_empty()
    }

    /// The cocycles this group is a quotient of.
    pub fn cocycles(&self) -> &RowSpan {
        self.quotient.sup()
    }

    pub fn coboundaries(&self) -> &RowSpan {
        self.quotient.sub()
    }

    /// Coordinates of `[Z]`; `None` if `Z` is not among the cocycles.
    pub fn class_coordinates(&self, z: &Cocycle) -> Result<Option<Vec<u64>>> {
        self.quotient.coordinates(&z.values)
    }

    /// A cocycle whose class has the given coordinates.
    pub fn cocycle_of(&self, coords: &[u64]) -> Result<Cocycle> {
        Ok(Cocycle {
            values: self.quotient.element(coords)?,
        })
    }

    pub fn as_abelian_group(&self) -> FinAbGroup {
        FinAbGroup::from_invariant_factors(self.factors()).expect("subquotient factors form a chain")
    }

    /// Homomorphism `self -> target` induced by a map on cocycles.
    pub fn induced_hom(&self, target: &H1Group, f: impl Fn(&Cocycle) -> Result<Cocycle>) -> Result<AbHom> {
        let images = self
            .representatives
            .iter()
            .map(|z| {
                let w = f(z)?;
                target
                    .class_coordinates(&w)?
                    .map(GroupElement)
                    .ok_or_else(|| Error::Invalid("image is not a cocycle of the target".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        AbHom::new(self.as_abelian_group(), target.as_abelian_group(), images)
    }
}

pub fn h1(action: &GroupAction) -> Result<H1Group> {
    let space = cocycle_space(action)?;
    H1Group::from_spans(&space.z1, &space.b1)
}

/// `ker T_γ / (γ - 1) M` for a group with a single generator `γ`.
pub fn cyclic_h1_action(action: &GroupAction) -> Result<H1Group> {
    if action.group().ngens() != 1 {
        return Err(Error::Invalid("cyclic formula needs exactly one generator".into()));
    }
    let gamma = &action.module().generator_action[0];
    let t = crate::matgroup::norm_matrix(gamma)?;
    let ker_t = RowSpan::of(&kernel(&t.transpose()));
    let im = RowSpan::of(&gamma.minus_identity()?.transpose());
    H1Group::from_spans(&ker_t, &im)
}

/// `H^1(<γ>, M)` for `γ` acting on `M = (Z/m)^n` by itself.
pub fn cyclic_h1(gamma: &ZModMatrix) -> Result<H1Group> {
    let g = closure(gamma.modulus(), gamma.rows(), std::slice::from_ref(gamma), usize::MAX)?;
    cyclic_h1_action(&GroupAction::natural(Arc::new(g)))
}

/// Rows `w L_x` for every `w` with `w (x - 1) = 0`: a cocycle satisfies all
/// of them iff `Z(x) ∈ (x - 1) M` for every `x`.
fn cyclic_triviality_rows(action: &GroupAction, prop: &Propagation, into: &mut HowellBuilder) -> Result<()> {
    let r = ZModMatrix::identity(action.modulus(), 1)?.ring();
    let (n, width) = (prop.rank, prop.width);
    let mut row = vec![0u64; width];
    for x in 0..action.group().order() {
        let ann = kernel(&action.act(x).minus_identity()?);
        let e = prop.expr(x);
        for w in ann.row_iter() {
            row.iter_mut().for_each(|v| *v = 0);
            for (a, &wa) in w.iter().enumerate().take(n) {
                if wa == 0 {
                    continue;
                }
                for (c, v) in row.iter_mut().enumerate() {
                    *v = r.mul_add(*v, wa, e[a * width + c]);
                }
            }
            if row.iter().any(|&v| v != 0) {
                into.insert(&row);
            }
        }
    }
    Ok(())
}

/// Cocycles whose restriction to every cyclic subgroup is a coboundary.
pub fn locally_trivial_cocycles(action: &GroupAction) -> Result<RowSpan> {
    let mut prop = propagate(action);
    let mut c = std::mem::replace(&mut prop.constraints, HowellBuilder::new(2, 0));
    cyclic_triviality_rows(action, &prop, &mut c)?;
    Ok(solution_span(&c))
}

/// `H^1_cyc(G, M) = ker(H^1(G, M) -> prod_x H^1(<x>, M))`.
pub fn h1_cyc(action: &GroupAction) -> Result<H1Group> {
    let z = locally_trivial_cocycles(action)?;
    H1Group::from_spans(&z, &coboundary_span(action)?)
}

/// `H^1` and `H^1_cyc` from one propagation pass, with the full cocycle space.
pub fn h1_and_h1_cyc(action: &GroupAction) -> Result<(CocycleSpace, H1Group, H1Group)> {
    let prop = propagate(action);
    let z1 = solution_span(&prop.constraints);
    let mut c = prop.constraints.clone();
    cyclic_triviality_rows(action, &prop, &mut c)?;
    let zc = solution_span(&c);
    let b1 = coboundary_span(action)?;
    let h = H1Group::from_spans(&z1, &b1)?;
    let hc = H1Group::from_spans(&zc, &b1)?;
    Ok((CocycleSpace { z1, b1 }, h, hc))
}
