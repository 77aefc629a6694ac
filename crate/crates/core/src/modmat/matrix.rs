use serde::{Deserialize, Serialize};
use std::fmt;

use super::ring::Zm;
use crate::error::{Error, Result};

/// Dense matrix over Z/m, row-major, every entry reduced into `[0, m)`.
///
/// Vectors are rows throughout: a matrix `A` acts as `x -> x·A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixLiteral {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

impl Serialize for ZModMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixLiteral {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .row_iter()
                .map(|r| r.iter().map(|&e| e as i64).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZModMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lit = MatrixLiteral::deserialize(d)?;
        ZModMatrix::from_literal(lit).map_err(serde::de::Error::custom)
    }
}

impl ZModMatrix {
    fn from_literal(lit: MatrixLiteral) -> Result<Self> {
        if lit.entries.len() != lit.rows {
            return Err(Error::DimensionMismatch(format!(
                "\"rows\" is {} but \"entries\" has {} rows",
                lit.rows,
                lit.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(lit.rows);
        for (i, r) in lit.entries.into_iter().enumerate() {
            if r.len() != lit.cols {
                return Err(Error::DimensionMismatch(format!(
                    "\"cols\" is {} but row {} of \"entries\" has {} entries",
                    lit.cols,
                    i,
                    r.len()
                )));
            }
            for (j, &v) in r.iter().enumerate() {
                if v < 0 || v as u64 >= lit.modulus {
                    return Err(Error::UnreducedEntry {
                        row: i,
                        col: j,
                        value: v,
                        modulus: lit.modulus,
                    });
                }
            }
            rows.push(r.into_iter().map(|v| v as u64).collect::<Vec<_>>());
        }
        Self::from_reduced_rows(lit.modulus, lit.cols, rows)
    }

    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(ZModMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from signed integer rows, reducing each entry.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: u64, rows: &[R]) -> Result<Self> {
        check_modulus(modulus)?;
        let r = Zm::new(modulus);
        let cols = rows.first().map_or(0, |x| x.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&v| r.reduce_i64(v)));
        }
        Ok(ZModMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows already reduced into `[0, modulus)`.
    pub fn from_reduced_rows(modulus: u64, cols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        check_modulus(modulus)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some((j, &v)) = row.iter().enumerate().find(|(_, &v)| v >= modulus) {
                return Err(Error::UnreducedEntry {
                    row: i,
                    col: j,
                    value: v as i64,
                    modulus,
                });
            }
            entries.extend(row);
        }
        Ok(ZModMatrix {
            modulus,
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_flat(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|&v| v >= modulus) {
            return Err(Error::Invalid("unreduced entry".into()));
        }
        Ok(ZModMatrix {
            modulus,
            rows,
            cols,
            entries,
        })
    }

    pub fn diagonal(modulus: u64, diag: &[u64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(modulus, n, n)?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d % modulus;
        }
        Ok(m)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn ring(&self) -> Zm {
        Zm::new(self.modulus)
    }
    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.modulus;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn transpose(&self) -> ZModMatrix {
        let mut out = vec![0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.get(i, j);
            }
        }
        ZModMatrix {
            modulus: self.modulus,
            rows: self.cols,
            cols: self.rows,
            entries: out,
        }
    }

    pub fn mul(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = self.ring();
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let dst = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d = r.mul_add(*d, a, b);
                }
            }
        }
        Ok(ZModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    fn zip_with(&self, other: &ZModMatrix, f: impl Fn(Zm, u64, u64) -> u64) -> Result<ZModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shape mismatch".into()));
        }
        let r = self.ring();
        Ok(ZModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(r, a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    pub fn scale(&self, c: u64) -> ZModMatrix {
        let r = self.ring();
        let c = c % self.modulus;
        ZModMatrix {
            entries: self.entries.iter().map(|&e| r.mul(e, c)).collect(),
            ..self.clone()
        }
    }

    /// `self - 1` for a square matrix.
    pub fn minus_identity(&self) -> Result<ZModMatrix> {
        self.sub(&Self::identity(self.modulus, self.rows)?)
    }

    pub fn pow(&self, mut e: u64) -> Result<ZModMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.modulus, self.rows)?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let r = self.ring();
        let mut out = vec![0u64; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(k)) {
                *d = r.mul_add(*d, a, b);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector (the natural left action on `(Z/m)^n`).
    pub fn apply(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let r = self.ring();
        Ok(self
            .row_iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| r.mul_add(acc, a, b))
            })
            .collect())
    }

    /// Entrywise reduction to a modulus dividing the current one.
    pub fn reduce_modulus(&self, target: u64) -> Result<ZModMatrix> {
        check_modulus(target)?;
        if self.modulus % target != 0 {
            return Err(Error::ModulusMismatch(self.modulus, target));
        }
        Ok(ZModMatrix {
            modulus: target,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| e % target).collect(),
        })
    }

    /// Reinterprets integer representatives under a new modulus.
    pub fn lift_to(&self, target: u64) -> Result<ZModMatrix> {
        check_modulus(target)?;
        Ok(ZModMatrix {
            modulus: target,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| e % target).collect(),
        })
    }

    pub fn vstack(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(ZModMatrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn hstack(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(ZModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> ZModMatrix {
        assert!(start <= end && end <= self.cols);
        let mut entries = Vec::with_capacity(self.rows * (end - start));
        for i in 0..self.rows {
            entries.extend_from_slice(&self.row(i)[start..end]);
        }
        ZModMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: end - start,
            entries,
        }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> ZModMatrix {
        let mut entries = Vec::new();
        let mut n = 0;
        for i in idx {
            entries.extend_from_slice(self.row(i));
            n += 1;
        }
        ZModMatrix {
            modulus: self.modulus,
            rows: n,
            cols: self.cols,
            entries,
        }
    }

    /// Determinant via unimodular row elimination.
    pub fn determinant(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let r = self.ring();
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = 1 % self.modulus;
        for c in 0..n {
            for i in c + 1..n {
                if a[i][c] != 0 {
                    super::howell::bezout_rows(r, &mut a, c, i, c);
                }
            }
            det = r.mul(det, a[c][c]);
        }
        Ok(det)
    }

    /// True iff the determinant is a unit.
    pub fn is_invertible(&self) -> Result<bool> {
        let d = self.determinant()?;
        Ok(self.ring().is_unit(d))
    }

    pub fn inverse(&self) -> Result<ZModMatrix> {
        if !self.is_invertible()? {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.modulus, n)?)?;
        let h = super::howell_form(&aug);
        debug_assert_eq!(h.rows(), n);
        Ok(h.column_block(n, 2 * n))
    }
}

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if m < 2 || m > (1 << 63) {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

impl fmt::Debug for ZModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZModMatrix(mod {}; ", self.modulus)?;
        f.debug_list().entries(self.row_iter()).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for ZModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}
