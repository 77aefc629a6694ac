//! Slow reference computations used to cross-check the fast paths.

use super::{coboundary_span, is_coboundary, propagate, restrict, Cocycle, GroupAction};
use crate::error::{Error, Result};
use crate::modmat::{kernel, HowellBuilder, RowSpan, ZModMatrix};

/// Largest group the table-based oracles accept.
pub const MAX_ORDER: usize = 256;

fn guard(action: &GroupAction) -> Result<()> {
    if action.group().order() > MAX_ORDER {
        return Err(Error::CapExceeded(MAX_ORDER));
    }
    Ok(())
}

/// Full multiplication table, `mul[i][j] = index of x_i x_j`.
pub fn multiplication_table(action: &GroupAction) -> Vec<Vec<usize>> {
    let g = action.group();
    let n = g.order();
    let mut mul = vec![vec![0usize; n]; n];
    for (i, row) in mul.iter_mut().enumerate() {
        row[0] = i;
        for j in 1..n {
            let (p, s) = g.tree_edge(j).expect("non-identity");
            row[j] = g.succ(row[p], s);
        }
    }
    mul
}

/// `Z^1` with one unknown per (element, coordinate) and one constraint per
/// pair: `Z(gh) - Z(g) - g Z(h) = 0`.
pub fn pairwise_z1(action: &GroupAction) -> Result<RowSpan> {
    guard(action)?;
    let g = action.group();
    let (m, n, order) = (action.modulus(), action.rank(), g.order());
    let width = order * n;
    let r = ZModMatrix::identity(m, 1)?.ring();
    let mul = multiplication_table(action);
    let mut c = HowellBuilder::new(m, width);
    let mut row = vec![0u64; width];
    for a in 0..order {
        let rho = action.act(a);
        for b in 0..order {
            let ab = mul[a][b];
            for i in 0..n {
                row.iter_mut().for_each(|v| *v = 0);
                row[ab * n + i] = r.add(row[ab * n + i], 1);
                row[a * n + i] = r.sub(row[a * n + i], 1);
                for k in 0..n {
                    let v = &mut row[b * n + k];
                    *v = r.sub(*v, rho.get(i, k));
                }
                if row.iter().any(|&v| v != 0) {
                    c.insert(&row);
                }
            }
        }
    }
    Ok(RowSpan::of(&kernel(&c.to_matrix().transpose())))
}

/// A generator-parameterized span expanded to full value tables.
pub fn expand_to_tables(action: &GroupAction, span: &RowSpan) -> Result<RowSpan> {
    let g = action.group();
    let width = g.order() * action.rank();
    let rows: Vec<Vec<u64>> = span
        .basis()
        .row_iter()
        .map(|v| Cocycle { values: v.to_vec() }.table(action).concat())
        .collect();
    Ok(RowSpan::of(&ZModMatrix::from_reduced_rows(action.modulus(), width, rows)?))
}

/// Locally trivial cocycles via auxiliary unknowns `y_x` with
/// `Z(x) = (x - 1) y_x`, projected onto the generator unknowns.
pub fn h1_cyc_cocycles_aux(action: &GroupAction) -> Result<RowSpan> {
    guard(action)?;
    let prop = propagate(action);
    let g = action.group();
    let (m, n) = (action.modulus(), action.rank());
    let w = prop.width;
    let total = w + g.order() * n;
    let r = ZModMatrix::identity(m, 1)?.ring();
    let mut eqs = HowellBuilder::new(m, total);
    let mut row = vec![0u64; total];
    for c in prop.constraints.basis_rows() {
        row.iter_mut().for_each(|v| *v = 0);
        row[..w].copy_from_slice(&c);
        eqs.insert(&row);
    }
    for x in 0..g.order() {
        let a = action.act(x).minus_identity()?;
        let e = prop.expr(x);
        for i in 0..n {
            row.iter_mut().for_each(|v| *v = 0);
            row[..w].copy_from_slice(&e[i * w..(i + 1) * w]);
            for k in 0..n {
                row[w + x * n + k] = r.neg(a.get(i, k));
            }
            if row.iter().any(|&v| v != 0) {
                eqs.insert(&row);
            }
        }
    }
    let solutions = kernel(&eqs.to_matrix().transpose());
    Ok(RowSpan::of(&solutions.column_block(0, w)))
}

/// Whether the class of `z` restricts to zero on every cyclic subgroup,
/// deciding each restriction with [`is_coboundary`].
pub fn is_locally_trivial(action: &GroupAction, z: &Cocycle) -> Result<bool> {
    let g = action.group();
    for (i, _) in g.cyclic_subgroup_sets() {
        let sub = action.restrict_to(std::sync::Arc::new(g.cyclic_subgroup(i)?))?;
        if is_coboundary(&sub, &restrict(action, z, &sub)?)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H^1` order by brute force over all generator-value vectors; for tiny cases.
pub fn brute_force_counts(action: &GroupAction) -> Result<(u64, u64)> {
    let m = action.modulus();
    let w = action.unknowns();
    let total = (m as u128).checked_pow(w as u32).filter(|&t| t <= 1 << 16);
    let Some(total) = total else {
        return Err(Error::CapExceeded(1 << 16));
    };
    let b1 = coboundary_span(action)?;
    let mut z_count = 0u64;
    let mut b_count = 0u64;
    for code in 0..total as u64 {
        let mut c = code;
        let values: Vec<u64> = (0..w)
            .map(|_| {
                let v = c % m;
                c /= m;
                v
            })
            .collect();
        let z = Cocycle { values };
        if z.is_cocycle(action) {
            z_count += 1;
            if b1.contains(&z.values) {
                b_count += 1;
            }
        }
    }
    Ok((z_count, b_count))
}
