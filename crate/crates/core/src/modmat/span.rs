use num_bigint::BigUint;

use super::howell::{howell_form, kernel, solve, HowellBuilder};
use super::matrix::ZModMatrix;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};

/// A submodule of `(Z/m)^n`, stored as its Howell basis.
///
/// Equality of spans is equality of the stored bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowSpan {
    basis: ZModMatrix,
}

impl RowSpan {
    pub fn of(generators: &ZModMatrix) -> RowSpan {
        RowSpan {
            basis: howell_form(generators),
        }
    }

    pub fn from_builder(b: &HowellBuilder) -> RowSpan {
        RowSpan {
            basis: b.to_matrix(),
        }
    }

    pub fn zero(modulus: u64, n: usize) -> Result<RowSpan> {
        Ok(RowSpan {
            basis: ZModMatrix::zeros(modulus, 0, n)?,
        })
    }

    pub fn full(modulus: u64, n: usize) -> Result<RowSpan> {
        Ok(RowSpan {
            basis: ZModMatrix::identity(modulus, n)?,
        })
    }

    pub fn basis(&self) -> &ZModMatrix {
        &self.basis
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus()
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    fn builder(&self) -> HowellBuilder {
        let mut b = HowellBuilder::new(self.modulus(), self.dim());
        for row in self.basis.row_iter() {
            b.insert(row);
        }
        b
    }

    /// Canonical representative of `v + span`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        for row in self.basis.row_iter() {
            let Some(c) = row.iter().position(|&x| x != 0) else {
                continue;
            };
            let q = w[c] / row[c];
            if q != 0 {
                let r = self.basis.ring();
                let nq = r.neg(q);
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = r.mul_add(*x, nq, y);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.dim() && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_span(&self, other: &RowSpan) -> bool {
        other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Number of elements: product of `m / pivot` over the Howell basis.
    pub fn order(&self) -> BigUint {
        let m = self.modulus();
        self.basis
            .row_iter()
            .map(|row| {
                let p = row.iter().find(|&&x| x != 0).copied().unwrap_or(m);
                BigUint::from(m / p)
            })
            .product()
    }

    pub fn sum(&self, other: &RowSpan) -> Result<RowSpan> {
        Ok(RowSpan::of(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &RowSpan) -> Result<RowSpan> {
        let stacked = self.basis.vstack(&other.basis)?;
        let ker = kernel(&stacked);
        let left = ker.column_block(0, self.basis.rows());
        Ok(RowSpan::of(&left.mul(&self.basis)?))
    }

    /// Image of the span under `x -> x·a`.
    pub fn image(&self, a: &ZModMatrix) -> Result<RowSpan> {
        Ok(RowSpan::of(&self.basis.mul(a)?))
    }

    pub fn extend(&self, v: &[u64]) -> RowSpan {
        let mut b = self.builder();
        b.insert(v);
        RowSpan::from_builder(&b)
    }
}

/// Presentation of `sup / sub` as a direct sum of cyclic groups.
#[derive(Clone, Debug)]
pub struct Subquotient {
    sup: RowSpan,
    sub: RowSpan,
    /// Change of coordinates: coefficient row `c` (over the `sup` basis)
    /// maps to `c·right`, whose selected columns are the cyclic coordinates.
    right: ZModMatrix,
    /// `(column of right, invariant factor)` for each nontrivial factor.
    factor_columns: Vec<(usize, u64)>,
    generators: Vec<Vec<u64>>,
}

impl Subquotient {
    pub fn new(sup: &RowSpan, sub: &RowSpan) -> Result<Subquotient> {
        if sup.modulus() != sub.modulus() || sup.dim() != sub.dim() {
            return Err(Error::DimensionMismatch("subquotient of unlike spans".into()));
        }
        if !sup.contains_span(sub) {
            return Err(Error::NotASubgroup);
        }
        let m = sup.modulus();
        let s = sup.basis();
        let r = s.rows();
        // relations: coefficient vectors c with c·S in sub
        let stacked = s.vstack(sub.basis())?;
        let rel = kernel(&stacked).column_block(0, r);
        let snf = smith_normal_form(&rel);
        let diag = snf.diagonal();
        let right = snf.right;
        let mut factor_columns = Vec::new();
        for j in 0..r {
            let d = diag.get(j).copied().unwrap_or(0);
            let f = if d == 0 { m } else { d };
            if f != 1 {
                factor_columns.push((j, f));
            }
        }
        let right_inv = right.inverse()?;
        let mut generators = Vec::new();
        for &(j, _) in &factor_columns {
            let g = s.vec_mul(right_inv.row(j))?;
            generators.push(sub.reduce(&g));
        }
        Ok(Subquotient {
            sup: sup.clone(),
            sub: sub.clone(),
            right,
            factor_columns,
            generators,
        })
    }

    /// Invariant factors in ascending divisibility order.
    pub fn factors(&self) -> Vec<u64> {
        self.factor_columns.iter().map(|&(_, f)| f).collect()
    }

    /// Representatives of the cyclic generators, reduced modulo `sub`.
    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn order(&self) -> BigUint {
        self.factors().into_iter().map(BigUint::from).product()
    }

    pub fn sup(&self) -> &RowSpan {
        &self.sup
    }

    pub fn sub(&self) -> &RowSpan {
        &self.sub
    }

    /// Coordinates of the class of `v` against [`Self::generators`];
    /// `None` if `v` is not in `sup`.
    pub fn coordinates(&self, v: &[u64]) -> Result<Option<Vec<u64>>> {
        let Some(c) = solve(self.sup.basis(), v)? else {
            return Ok(None);
        };
        let y = self.right.vec_mul(&c)?;
        Ok(Some(
            self.factor_columns
                .iter()
                .map(|&(j, f)| y[j] % f)
                .collect(),
        ))
    }

    /// Vector in `sup` whose class has the given coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<Vec<u64>> {
        if coords.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("coordinate length".into()));
        }
        let r = self.sup.basis().ring();
        let mut out = vec![0; self.sup.dim()];
        for (g, &c) in self.generators.iter().zip(coords) {
            for (o, &x) in out.iter_mut().zip(g) {
                *o = r.mul_add(*o, c % r.modulus(), x);
            }
        }
        Ok(self.sub.reduce(&out))
    }
}
