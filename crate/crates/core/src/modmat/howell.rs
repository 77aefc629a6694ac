//! Howell normal form, kernels and linear solves over Z/m.
//!
//! The Howell form of a row span is the unique echelon basis whose pivots
//! are divisors of `m`, whose entries above each pivot are reduced modulo
//! that pivot, and which has the Howell property: every vector of the span
//! with zeros in its first `c` coordinates is a combination of the basis
//! rows with pivot column `>= c`. Membership can then be decided by plain
//! top-down reduction.

use super::matrix::ZModMatrix;
use super::ring::{ext_gcd, Zm};
use crate::error::{Error, Result};

/// `row[i] += c * row[k]` on raw rows.
#[inline]
fn axpy(r: Zm, dst: &mut [u64], c: u64, src: &[u64]) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = r.mul_add(*d, c, s);
        }
    }
}

/// Combines rows `p` and `q` with a determinant-one transformation so that
/// afterwards `rows[q][col] == 0` and `rows[p][col]` is the integer gcd of
/// the two previous entries.
pub(crate) fn bezout_rows(r: Zm, rows: &mut [Vec<u64>], p: usize, q: usize, col: usize) {
    let a = rows[p][col];
    let b = rows[q][col];
    if b == 0 {
        return;
    }
    if a != 0 && b % a == 0 {
        let c = r.neg((b / a) % r.modulus());
        let (head, tail) = split_two(rows, p, q);
        axpy(r, tail, c, head);
        return;
    }
    let (g, s, t) = ext_gcd(a, b);
    let s = r.reduce_i128(s);
    let t = r.reduce_i128(t);
    let u = r.neg((b / g) % r.modulus());
    let v = (a / g) % r.modulus();
    let (rp, rq) = (rows[p].clone(), rows[q].clone());
    for j in 0..rp.len() {
        rows[p][j] = r.add(r.mul(s, rp[j]), r.mul(t, rq[j]));
        rows[q][j] = r.add(r.mul(u, rp[j]), r.mul(v, rq[j]));
    }
}

/// Column analogue of [`bezout_rows`] acting on a row-major matrix.
pub(crate) fn bezout_cols(r: Zm, rows: &mut [Vec<u64>], p: usize, q: usize, row: usize) -> (u64, u64, u64, u64) {
    let a = rows[row][p];
    let b = rows[row][q];
    if b == 0 {
        return (1, 0, 0, 1);
    }
    // new_p = s*col_p + t*col_q ; new_q = u*col_p + v*col_q
    let (s, t, u, v) = if a != 0 && b % a == 0 {
        (1, 0, r.neg((b / a) % r.modulus()), 1)
    } else {
        let (g, s, t) = ext_gcd(a, b);
        (
            r.reduce_i128(s),
            r.reduce_i128(t),
            r.neg((b / g) % r.modulus()),
            (a / g) % r.modulus(),
        )
    };
    for row in rows.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = r.add(r.mul(s, x), r.mul(t, y));
        row[q] = r.add(r.mul(u, x), r.mul(v, y));
    }
    (s, t, u, v)
}

fn split_two(rows: &mut [Vec<u64>], p: usize, q: usize) -> (&[u64], &mut [u64]) {
    assert_ne!(p, q);
    if p < q {
        let (a, b) = rows.split_at_mut(q);
        (&a[p], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(p);
        (&b[0], &mut a[q])
    }
}

/// Incrementally maintained Howell basis of a growing row span.
///
/// The basis is kept fully reduced after every insertion, so reducing a new
/// vector only touches the pivot columns where it is nonzero.
#[derive(Clone, Debug)]
pub struct HowellBuilder {
    r: Zm,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
}

impl HowellBuilder {
    pub fn new(modulus: u64, cols: usize) -> Self {
        HowellBuilder {
            r: Zm::new(modulus),
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.r.modulus()
    }

    /// Number of basis rows currently held.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis in place. The result is the canonical
    /// representative of `v + span`; it is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        for c in 0..self.cols {
            if v[c] == 0 {
                continue;
            }
            if let Some(i) = self.pivot_row[c] {
                let d = self.rows[i][c];
                let q = v[c] / d;
                if q != 0 {
                    axpy(self.r, &mut v[c..], self.r.neg(q), &self.rows[i][c..]);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds a vector to the span. Returns true if the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut grew = false;
        let mut queue: Vec<Vec<u64>> = vec![v.to_vec()];
        while let Some(mut v) = queue.pop() {
            let mut c = 0;
            while c < self.cols {
                if v[c] == 0 {
                    c += 1;
                    continue;
                }
                match self.pivot_row[c] {
                    Some(i) => {
                        let d = self.rows[i][c];
                        if v[c] % d == 0 {
                            let q = v[c] / d;
                            axpy(self.r, &mut v[c..], self.r.neg(q), &self.rows[i][c..]);
                            c += 1;
                            continue;
                        }
                        // Pivot ideal shrinks: replace the pivot row by the
                        // Bezout combination and keep processing the rest.
                        let mut pair = vec![self.rows[i].clone(), v];
                        bezout_rows(self.r, &mut pair, 0, 1, c);
                        let other = pair.pop().unwrap();
                        let new_row = pair.pop().unwrap();
                        self.rows[i] = new_row;
                        self.normalize_pivot(i, c);
                        self.fix_after_change(i, c);
                        if let Some(a) = self.annihilated(i, c) {
                            queue.push(a);
                        }
                        queue.push(other);
                        grew = true;
                        break;
                    }
                    None => {
                        let i = self.rows.len();
                        self.rows.push(v);
                        self.pivot_row[c] = Some(i);
                        self.normalize_pivot(i, c);
                        self.fix_after_change(i, c);
                        if let Some(a) = self.annihilated(i, c) {
                            queue.push(a);
                        }
                        grew = true;
                        break;
                    }
                }
            }
        }
        grew
    }

    fn normalize_pivot(&mut self, i: usize, c: usize) {
        let (_, u) = self.r.unit_split(self.rows[i][c]);
        if u != 1 {
            let inv = self.r.inv(u).expect("unit");
            for x in self.rows[i].iter_mut() {
                *x = self.r.mul(*x, inv);
            }
        }
    }

    /// `(m/d) * row_i`, which vanishes at the pivot column; `None` if zero.
    fn annihilated(&self, i: usize, c: usize) -> Option<Vec<u64>> {
        let d = self.rows[i][c];
        let k = self.r.modulus() / d;
        if k == self.r.modulus() {
            return None;
        }
        let a: Vec<u64> = self.rows[i].iter().map(|&x| self.r.mul(x, k)).collect();
        if a.iter().all(|&x| x == 0) {
            None
        } else {
            Some(a)
        }
    }

    /// Reduces `row_i` at later pivot columns, then every row with an
    /// earlier pivot at column `c`.
    fn fix_after_change(&mut self, i: usize, c: usize) {
        let mut row = std::mem::take(&mut self.rows[i]);
        self.reduce_tail(&mut row, c);
        self.rows[i] = row;
        for c0 in 0..c {
            if let Some(j) = self.pivot_row[c0] {
                let d = self.rows[i][c];
                let q = self.rows[j][c] / d;
                if q != 0 {
                    let mut rj = std::mem::take(&mut self.rows[j]);
                    axpy(self.r, &mut rj[c..], self.r.neg(q), &self.rows[i][c..]);
                    self.reduce_tail(&mut rj, c);
                    self.rows[j] = rj;
                }
            }
        }
    }

    fn reduce_tail(&self, v: &mut [u64], after: usize) {
        for c in after + 1..self.cols {
            if v[c] == 0 {
                continue;
            }
            if let Some(k) = self.pivot_row[c] {
                if self.rows[k].is_empty() {
                    continue;
                }
                let d = self.rows[k][c];
                let q = v[c] / d;
                if q != 0 {
                    axpy(self.r, &mut v[c..], self.r.neg(q), &self.rows[k][c..]);
                }
            }
        }
    }

    /// Basis rows sorted by pivot column.
    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        self.pivot_row
            .iter()
            .flatten()
            .map(|&i| self.rows[i].clone())
            .collect()
    }

    /// `(pivot column, pivot value)` pairs in order.
    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.pivot_row
            .iter()
            .enumerate()
            .filter_map(|(c, i)| i.map(|i| (c, self.rows[i][c])))
            .collect()
    }

    pub fn to_matrix(&self) -> ZModMatrix {
        ZModMatrix::from_reduced_rows(self.r.modulus(), self.cols, self.basis_rows())
            .expect("basis rows are reduced")
    }
}

/// Howell normal form of the row span of `a`.
pub fn howell_form(a: &ZModMatrix) -> ZModMatrix {
    let mut b = HowellBuilder::new(a.modulus(), a.cols());
    for row in a.row_iter() {
        b.insert(row);
    }
    b.to_matrix()
}

/// Rows generating `{x : x·a = 0}`, in Howell form.
pub fn kernel(a: &ZModMatrix) -> ZModMatrix {
    let n = a.rows();
    let k = a.cols();
    let m = a.modulus();
    let aug = a
        .hstack(&ZModMatrix::identity(m, n).expect("valid modulus"))
        .expect("same row count");
    let h = howell_form(&aug);
    let mut out = HowellBuilder::new(m, n);
    for row in h.row_iter() {
        if row[..k].iter().all(|&x| x == 0) {
            out.insert(&row[k..]);
        }
    }
    out.to_matrix()
}

/// Some `x` with `x·a = b`, or `None` if `b` is outside the row span.
pub fn solve(a: &ZModMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} columns",
            b.len(),
            a.cols()
        )));
    }
    let m = a.modulus();
    if b.iter().any(|&x| x >= m) {
        return Err(Error::Invalid("right-hand side is not reduced".into()));
    }
    let brow = ZModMatrix::from_reduced_rows(m, b.len(), vec![b.to_vec()])?;
    let stacked = brow.vstack(a)?;
    let ker = kernel(&stacked);
    // Kernel vectors (t, x) with t·b + x·a = 0; need t a unit.
    if ker.rows() == 0 {
        return Ok(if b.iter().all(|&x| x == 0) {
            Some(vec![0; a.rows()])
        } else {
            None
        });
    }
    let first = ker.row(0);
    if first[0] != 1 {
        return Ok(None);
    }
    // Remaining rows are (0, k) with k·a = 0; reduce the solution by them
    // so the answer is the canonical coset representative.
    let r = a.ring();
    let mut x: Vec<u64> = first[1..].iter().map(|&v| r.neg(v)).collect();
    let mut kb = HowellBuilder::new(m, a.rows());
    for row in ker.row_iter().skip(1) {
        kb.insert(&row[1..]);
    }
    kb.reduce(&mut x);
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(modulus: u64, rows: &[&[i64]]) -> ZModMatrix {
        ZModMatrix::from_rows(modulus, rows).unwrap()
    }

    #[test]
    fn howell_small_cases() {
        assert_eq!(howell_form(&m(4, &[&[3]])), m(4, &[&[1]]));
        assert_eq!(howell_form(&m(4, &[&[2]])), m(4, &[&[2]]));
        let id = ZModMatrix::identity(4, 3).unwrap();
        assert_eq!(howell_form(&id), id);
        assert_eq!(howell_form(&m(4, &[&[0, 0]])).rows(), 0);
    }

    #[test]
    fn howell_property_needs_annihilated_rows() {
        // span of (2, 1) over Z/4 contains 2*(2,1) = (0,2)
        let h = howell_form(&m(4, &[&[2, 1]]));
        assert_eq!(h, m(4, &[&[2, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&m(4, &[&[2]])), m(4, &[&[2]]));
        let inv = m(25, &[&[1, -3], &[1, -2]]);
        assert_eq!(kernel(&inv).rows(), 0);
        let five = ZModMatrix::identity(25, 2).unwrap().scale(5);
        assert_eq!(kernel(&five), m(25, &[&[5, 0], &[0, 5]]));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&m(4, &[&[2]]), &[2]).unwrap(), Some(vec![1]));
        assert_eq!(solve(&m(4, &[&[2]]), &[1]).unwrap(), None);
        let id = ZModMatrix::identity(7, 3).unwrap();
        assert_eq!(solve(&id, &[1, 5, 6]).unwrap(), Some(vec![1, 5, 6]));
        assert!(solve(&id, &[1, 2]).is_err());
    }

    #[test]
    fn empty_matrices() {
        let a = ZModMatrix::zeros(6, 0, 3).unwrap();
        assert_eq!(howell_form(&a).rows(), 0);
        assert_eq!(solve(&a, &[0, 0, 0]).unwrap(), Some(vec![]));
        assert_eq!(solve(&a, &[1, 0, 0]).unwrap(), None);
        let b = ZModMatrix::zeros(6, 2, 0).unwrap();
        assert_eq!(kernel(&b), ZModMatrix::identity(6, 2).unwrap());
    }
}
