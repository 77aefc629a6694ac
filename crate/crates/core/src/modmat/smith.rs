use super::howell::{bezout_cols, bezout_rows};
use super::matrix::ZModMatrix;
use super::ring::Zm;

/// `left · a · right = diag` with `left`, `right` invertible over Z/m.
///
/// Diagonal entries are normalized to divisors of `m` (zero stays zero) and
/// form a divisibility chain; zeros come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: ZModMatrix,
    pub left: ZModMatrix,
    pub right: ZModMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.diag.rows().min(self.diag.cols()))
            .map(|i| self.diag.get(i, i))
            .collect()
    }
}

pub fn smith_normal_form(a: &ZModMatrix) -> SmithForm {
    let r = a.ring();
    let m = a.modulus();
    let (nr, nc) = (a.rows(), a.cols());
    let mut d = a.to_rows();
    // U is tracked through its rows (row ops), V through its transpose
    // (column ops on A are row ops on V^T).
    let mut u = ZModMatrix::identity(m, nr).expect("modulus").to_rows();
    let mut vt = ZModMatrix::identity(m, nc).expect("modulus").to_rows();

    let mut t = 0;
    while t < nr.min(nc) {
        // pivot: nonzero entry with the smallest ideal
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = r.ideal(x);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        vt.swap(t, pj);

        loop {
            loop {
                let mut dirty = false;
                for i in t + 1..nr {
                    if d[i][t] != 0 {
                        apply_row_bezout(r, &mut d, &mut u, t, i, t);
                    }
                }
                for j in t + 1..nc {
                    if d[t][j] != 0 {
                        let (s, tt, uu, vv) = bezout_cols(r, &mut d, t, j, t);
                        combine_rows(r, &mut vt, t, j, (s, tt, uu, vv));
                        dirty = true;
                    }
                }
                if !dirty || (t + 1..nr).all(|i| d[i][t] == 0) {
                    break;
                }
            }
            // normalize pivot to gcd(pivot, m)
            let (_, unit) = r.unit_split(d[t][t]);
            if unit != 1 {
                let inv = r.inv(unit).expect("unit");
                for row in d.iter_mut() {
                    row[t] = r.mul(row[t], inv);
                }
                for x in vt[t].iter_mut() {
                    *x = r.mul(*x, inv);
                }
            }
            let piv = d[t][t];
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| d[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    // row_t += row_i, then re-clear; the pivot ideal grows strictly
                    for j in 0..nc {
                        d[t][j] = r.add(d[t][j], d[i][j]);
                    }
                    for j in 0..nr {
                        u[t][j] = r.add(u[t][j], u[i][j]);
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let diag = ZModMatrix::from_reduced_rows(m, nc, d).expect("reduced");
    SmithForm {
        diag,
        left: ZModMatrix::from_reduced_rows(m, nr, u).expect("reduced"),
        right: ZModMatrix::from_reduced_rows(m, nc, vt)
            .expect("reduced")
            .transpose(),
    }
}

fn apply_row_bezout(r: Zm, d: &mut [Vec<u64>], u: &mut [Vec<u64>], p: usize, q: usize, col: usize) {
    let a = d[p][col];
    let b = d[q][col];
    let coeffs = if a != 0 && b % a == 0 {
        (1, 0, r.neg((b / a) % r.modulus()), 1)
    } else {
        let (g, s, t) = super::ring::ext_gcd(a, b);
        (
            r.reduce_i128(s),
            r.reduce_i128(t),
            r.neg((b / g) % r.modulus()),
            (a / g) % r.modulus(),
        )
    };
    bezout_rows(r, d, p, q, col);
    combine_rows(r, u, p, q, coeffs);
}

/// `(row_p, row_q) <- (s row_p + t row_q, u row_p + v row_q)`.
fn combine_rows(r: Zm, rows: &mut [Vec<u64>], p: usize, q: usize, (s, t, u, v): (u64, u64, u64, u64)) {
    let (rp, rq) = (rows[p].clone(), rows[q].clone());
    for j in 0..rp.len() {
        rows[p][j] = r.add(r.mul(s, rp[j]), r.mul(t, rq[j]));
        rows[q][j] = r.add(r.mul(u, rp[j]), r.mul(v, rq[j]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &ZModMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        let prod = s.left.mul(a).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diag, "U·A·V != D for {a:?}");
        assert!(s.left.is_invertible().unwrap());
        assert!(s.right.is_invertible().unwrap());
        let diag = s.diagonal();
        let m = a.modulus();
        for w in diag.windows(2) {
            let (x, y) = (if w[0] == 0 { m } else { w[0] }, if w[1] == 0 { m } else { w[1] });
            assert_eq!(y % x, 0, "chain broken: {diag:?}");
        }
        for &x in &diag {
            assert!(x == 0 || m % x == 0);
        }
        for i in 0..s.diag.rows() {
            for j in 0..s.diag.cols() {
                if i != j {
                    assert_eq!(s.diag.get(i, j), 0);
                }
            }
        }
        s
    }

    #[test]
    fn diag_6_4_mod_12() {
        let a = ZModMatrix::diagonal(12, &[6, 4]).unwrap();
        assert_eq!(check(&a).diagonal(), vec![2, 0]);
    }

    #[test]
    fn identity_and_zero() {
        let id = ZModMatrix::identity(9, 3).unwrap();
        let s = check(&id);
        assert_eq!(s.diag, id);
        assert_eq!(s.left, id);
        assert_eq!(s.right, id);
        let z = ZModMatrix::zeros(9, 2, 3).unwrap();
        assert!(check(&z).diag.is_zero());
    }

    #[test]
    fn rectangular_and_non_local() {
        let a = ZModMatrix::from_rows(36, &[[4i64, 6, 9], [2, 3, 0], [0, 12, 18], [1, 0, 0]]).unwrap();
        check(&a);
        let b = ZModMatrix::from_rows(36, &[[4i64, 6], [6, 9]]).unwrap();
        check(&b);
        let c = ZModMatrix::from_rows(30, &[[6i64, 10, 15]]).unwrap();
        assert_eq!(check(&c).diagonal(), vec![1]);
    }
}
