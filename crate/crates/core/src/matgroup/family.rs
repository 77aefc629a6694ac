use super::{closure, congruence_kernel_generators, MatGroup, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::modmat::ring::is_prime;
use crate::modmat::ZModMatrix;

/// Accepts primes `p ≡ 2 (mod 3)`.
pub fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime {
            p,
            reason: "not a prime".into(),
        });
    }
    if p % 3 != 2 {
        return Err(Error::InvalidPrime {
            p,
            reason: format!("{p} ≡ {} (mod 3), need 2", p % 3),
        });
    }
    Ok(())
}

fn p2(p: u64) -> Result<u64> {
    p.checked_mul(p).ok_or(Error::InvalidModulus(p))
}

/// `[[1 + p(a-2b), 3p(b-a)], [-pb, 1 - p(a-2b)]]` over `Z/p^2`.
pub fn h2_element(p: u64, a: u64, b: u64) -> Result<ZModMatrix> {
    let (a, b) = ((a % p) as i64, (b % p) as i64);
    let pi = p as i64;
    let t = a - 2 * b;
    ZModMatrix::from_rows(
        p2(p)?,
        &[[1 + pi * t, 3 * pi * (b - a)], [-pi * b, 1 - pi * t]],
    )
}

/// `M_{a,b}` over `Z/p`, so that `h(a,b) - 1 = p M_{a,b}`.
pub fn m_ab(p: u64, a: u64, b: u64) -> Result<ZModMatrix> {
    let (a, b) = ((a % p) as i64, (b % p) as i64);
    ZModMatrix::from_rows(p, &[[a - 2 * b, 3 * (b - a)], [-b, -(a - 2 * b)]])
}

/// The parameters `(a, b)` mod `p` of an element of `H2`, if it is one.
pub fn h2_parameters(p: u64, x: &ZModMatrix) -> Option<(u64, u64)> {
    if x.modulus() != p * p || x.rows() != 2 || x.cols() != 2 {
        return None;
    }
    let b = (p * p - x.get(1, 0)) % (p * p);
    if b % p != 0 {
        return None;
    }
    let b = b / p;
    let t = (x.get(0, 0) + p * p - 1) % (p * p);
    if t % p != 0 {
        return None;
    }
    let a = (t / p + 2 * b) % p;
    (h2_element(p, a, b).ok()? == *x).then_some((a, b))
}

/// `1 + x + ... + x^(r-1)` where `r` is the order of `x`.
pub fn norm_matrix(x: &ZModMatrix) -> Result<ZModMatrix> {
    let mut acc = ZModMatrix::identity(x.modulus(), x.rows())?;
    let mut pow = x.clone();
    while !pow.is_identity() {
        acc = acc.add(&pow)?;
        pow = pow.mul(x)?;
    }
    Ok(acc)
}

pub fn build_h2(p: u64) -> Result<MatGroup> {
    check_prime(p)?;
    let gens = [h2_element(p, 1, 0)?, h2_element(p, 0, 1)?];
    let h = closure(p2(p)?, 2, &gens, DEFAULT_CAP)?;
    check_order(&h, (p * p) as usize, "H2")?;
    Ok(h)
}

/// `[[1, -3], [1, -2]]` over `Z/p^2`.
pub fn build_g(p: u64) -> Result<ZModMatrix> {
    check_prime(p)?;
    ZModMatrix::from_rows(p2(p)?, &[[1i64, -3], [1, -2]])
}

/// `<g, H2>`; generators are `g` followed by the two generators of `H2`.
pub fn build_g2(p: u64) -> Result<MatGroup> {
    check_prime(p)?;
    let gens = [build_g(p)?, h2_element(p, 1, 0)?, h2_element(p, 0, 1)?];
    let g = closure(p2(p)?, 2, &gens, DEFAULT_CAP)?;
    check_order(&g, (3 * p * p) as usize, "G2")?;
    Ok(g)
}

/// Matrices congruent to the identity mod `p^2` in `GL_2(Z/p^3)`.
pub fn build_n(p: u64) -> Result<MatGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime {
            p,
            reason: "not a prime".into(),
        });
    }
    let p2 = p2(p)?;
    let p3 = p2.checked_mul(p).ok_or(Error::InvalidModulus(p))?;
    let n = closure(p3, 2, &congruence_kernel_generators(p3, p2, 2)?, DEFAULT_CAP)?;
    check_order(&n, (p2 * p2) as usize, "N")?;
    Ok(n)
}

/// Full preimage of `G2` in `GL_2(Z/p^3)`.
pub fn build_g3(p: u64, cap: usize) -> Result<MatGroup> {
    let g2 = build_g2(p)?;
    g2.preimage_under_reduction(p2(p)? * p, cap)
}

fn check_order(g: &MatGroup, expected: usize, name: &str) -> Result<()> {
    if g.order() != expected {
        return Err(Error::Invalid(format!(
            "{name} has {} elements, expected {expected}",
            g.order()
        )));
    }
    Ok(())
}
