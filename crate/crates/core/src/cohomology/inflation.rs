use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{h1, is_coboundary, restrict, Cocycle, GroupAction, H1Group};
use crate::abelian::Subgroup;
use crate::error::{Error, Result};
use crate::matgroup::MatGroup;
use crate::modmat::ZModMatrix;

/// A linear map `(Z/source)^k -> (Z/target)^n`, `x -> A x~` where `x~` is
/// any integer lift of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source_modulus: u64,
    matrix: ZModMatrix,
}

impl ModuleMap {
    /// Rejects matrices for which the result depends on the lift,
    /// i.e. `source * A != 0` mod target.
    pub fn new(source_modulus: u64, matrix: ZModMatrix) -> Result<ModuleMap> {
        let t = matrix.modulus();
        if !matrix.scale(source_modulus % t).is_zero() {
            return Err(Error::Invalid(format!(
                "map from Z/{source_modulus} to Z/{t} depends on the choice of lift"
            )));
        }
        Ok(ModuleMap {
            source_modulus,
            matrix,
        })
    }

    pub fn identity(modulus: u64, rank: usize) -> Result<ModuleMap> {
        ModuleMap::new(modulus, ZModMatrix::identity(modulus, rank)?)
    }

    /// `x -> factor * x~`.
    pub fn scaled_lift(source_modulus: u64, target_modulus: u64, rank: usize, factor: u64) -> Result<ModuleMap> {
        let a = ZModMatrix::identity(target_modulus, rank)?.scale(factor % target_modulus);
        ModuleMap::new(source_modulus, a)
    }

    pub fn source_modulus(&self) -> u64 {
        self.source_modulus
    }

    pub fn target_modulus(&self) -> u64 {
        self.matrix.modulus()
    }

    pub fn apply(&self, x: &[u64]) -> Result<Vec<u64>> {
        let t = self.target_modulus();
        let lifted: Vec<u64> = x.iter().map(|&v| v % t).collect();
        self.matrix.apply(&lifted)
    }

    /// `A rho_src = rho_dst A`, with `rho_src` lifted to the target modulus.
    fn intertwines(&self, src: &ZModMatrix, dst: &ZModMatrix) -> Result<bool> {
        let t = self.target_modulus();
        let lifted = if t % src.modulus() == 0 {
            src.lift_to(t)?
        } else {
            src.reduce_modulus(t)?
        };
        Ok(self.matrix.mul(&lifted)? == dst.mul(&self.matrix)?)
    }
}

/// Inflation along a surjection `π: G -> Q` into a module map `M_Q -> M`.
#[derive(Clone, Debug)]
pub struct Inflation {
    quotient: GroupAction,
    group: GroupAction,
    projection: Vec<usize>,
    iota: ModuleMap,
}

impl Inflation {
    /// Validates that `projection` (indexed by elements of `G`) is a
    /// surjective homomorphism and that `iota` is equivariant along it.
    pub fn new(quotient: GroupAction, group: GroupAction, projection: Vec<usize>, iota: ModuleMap) -> Result<Inflation> {
        let (g, q) = (group.group(), quotient.group());
        if projection.len() != g.order() || projection.iter().any(|&i| i >= q.order()) {
            return Err(Error::Invalid("projection is not a map G -> Q".into()));
        }
        if projection[0] != 0 {
            return Err(Error::Invalid("projection does not fix the identity".into()));
        }
        let gen_images: Vec<usize> = g
            .generators()
            .iter()
            .map(|x| projection[g.index_of(x).expect("generator in group")])
            .collect();
        for i in 0..g.order() {
            for (s, &qs) in gen_images.iter().enumerate() {
                let prod = q.element(projection[i]).mul(q.element(qs))?;
                if q.index_of(&prod) != Some(projection[g.succ(i, s)]) {
                    return Err(Error::Invalid("projection is not a homomorphism".into()));
                }
            }
        }
        let mut hit = vec![false; q.order()];
        projection.iter().for_each(|&i| hit[i] = true);
        if hit.iter().any(|&h| !h) {
            return Err(Error::Invalid("projection is not surjective".into()));
        }
        if iota.source_modulus() != quotient.modulus()
            || iota.target_modulus() != group.modulus()
            || iota.matrix.cols() != quotient.rank()
            || iota.matrix.rows() != group.rank()
        {
            return Err(Error::DimensionMismatch("module map does not fit the modules".into()));
        }
        for (s, &qs) in gen_images.iter().enumerate() {
            if !iota.intertwines(quotient.act(qs), &group.module().generator_action[s])? {
                return Err(Error::NotEquivariant(format!("fails at generator {s}")));
            }
        }
        Ok(Inflation {
            quotient,
            group,
            projection,
            iota,
        })
    }

    pub fn quotient(&self) -> &GroupAction {
        &self.quotient
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    /// Elements of `G` mapping to the identity.
    pub fn kernel_indices(&self) -> Vec<usize> {
        (0..self.projection.len())
            .filter(|&i| self.projection[i] == 0)
            .collect()
    }

    /// `Z_G(g) = ι(Z_Q(π(g)))`.
    pub fn inflate(&self, z: &Cocycle) -> Result<Cocycle> {
        if z.values.len() != self.quotient.unknowns() {
            return Err(Error::DimensionMismatch("cocycle length".into()));
        }
        let table = z.table(&self.quotient);
        let g = self.group.group();
        let mut values = Vec::with_capacity(self.group.unknowns());
        for x in g.generators() {
            let i = g.index_of(x).expect("generator in group");
            values.extend(self.iota.apply(&table[self.projection[i]])?);
        }
        Ok(Cocycle { values })
    }

    /// The map `H^1(Q, M_Q) -> H^1(G, M)`.
    pub fn on_cohomology(&self, source: &H1Group, target: &H1Group) -> Result<crate::abelian::AbHom> {
        source.induced_hom(target, |z| self.inflate(z))
    }
}

/// Checks of `0 -> H^1(Q, M^N) -> H^1(G, M) -> H^1(N, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub quotient_h1: Vec<u64>,
    pub group_h1: Vec<u64>,
    pub normal_h1: Vec<u64>,
    pub kernel_is_normal_subgroup: bool,
    pub inflation_injective: bool,
    pub restriction_kills_inflation: bool,
    pub kernel_equals_image: bool,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.kernel_is_normal_subgroup
            && self.inflation_injective
            && self.restriction_kills_inflation
            && self.kernel_equals_image
    }
}

pub fn verify_inf_res_exactness(inf: &Inflation, normal: &Arc<MatGroup>) -> Result<ExactnessReport> {
    let g = inf.group();
    let n_action = g.restrict_to(normal.clone())?;
    let mut kernel_idx = inf.kernel_indices();
    kernel_idx.sort_unstable();
    let mut n_idx = normal.embedding_into(g.group())?;
    n_idx.sort_unstable();
    let kernel_is_normal_subgroup = kernel_idx == n_idx;

    let hq = h1(inf.quotient())?;
    let hg = h1(g)?;
    let hn = h1(&n_action)?;
    let inf_hom = inf.on_cohomology(&hq, &hg)?;
    let res_hom = hg.induced_hom(&hn, |z| restrict(g, z, &n_action))?;

    let inflation_injective = inf_hom.is_injective();
    let mut restriction_kills_inflation = true;
    for z in hq.representatives() {
        let r = restrict(g, &inf.inflate(z)?, &n_action)?;
        if is_coboundary(&n_action, &r)?.is_none() {
            restriction_kills_inflation = false;
        }
    }
    let ker: Subgroup = res_hom.kernel();
    let kernel_equals_image = ker.same_set(&inf_hom.image());
    Ok(ExactnessReport {
        quotient_h1: hq.factors(),
        group_h1: hg.factors(),
        normal_h1: hn.factors(),
        kernel_is_normal_subgroup,
        inflation_injective,
        restriction_kills_inflation,
        kernel_equals_image,
    })
}
