//! Scalar arithmetic in Z/m.

use num_integer::Integer;

/// Arithmetic helper for residues in `[0, m)`.
///
/// Products go through `u128` once the modulus no longer fits in 32 bits,
/// so any modulus below 2^63 is safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zm {
    m: u64,
}

impl Zm {
    pub fn new(m: u64) -> Self {
        debug_assert!(m >= 1);
        Zm { m }
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.m
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.m as i128) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.m {
            s.wrapping_sub(self.m)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.m <= 1 << 32 {
            (a * b) % self.m
        } else {
            ((a as u128 * b as u128) % self.m as u128) as u64
        }
    }

    /// `a + c*b`, the inner step of every row operation.
    #[inline]
    pub fn mul_add(self, a: u64, c: u64, b: u64) -> u64 {
        self.add(a, self.mul(c, b))
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `gcd(a, m)`, with `gcd(0, m) = m`.
    #[inline]
    pub fn ideal(self, a: u64) -> u64 {
        a.gcd(&self.m)
    }

    pub fn is_unit(self, a: u64) -> bool {
        self.ideal(a) == 1
    }

    pub fn inv(self, a: u64) -> Option<u64> {
        let e = (a as i128).extended_gcd(&(self.m as i128));
        if e.gcd != 1 {
            return None;
        }
        Some(self.reduce_i128(e.x))
    }

    /// Splits `a` as `d * u` with `d = gcd(a, m)` and `u` a unit.
    ///
    /// Returns `(d, u)`; for `a = 0` this is `(m, 1)` (the caller treats
    /// `d = m` as the zero ideal).
    pub fn unit_split(self, a: u64) -> (u64, u64) {
        let d = self.ideal(a);
        if d == self.m {
            return (d, 1 % self.m);
        }
        let step = self.m / d;
        let base = (a / d) % step;
        // gcd(base, m/d) = 1; shift by multiples of m/d until coprime to m.
        let mut u = base;
        loop {
            if self.is_unit(u) {
                return (d, u);
            }
            u += step;
            debug_assert!(u < self.m + step * d);
        }
    }
}

/// Extended gcd on non-negative inputs: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn ext_gcd(a: u64, b: u64) -> (u64, i128, i128) {
    let e = (a as i128).extended_gcd(&(b as i128));
    (e.gcd as u64, e.x, e.y)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_split_recovers_element() {
        for m in [2u64, 4, 12, 25, 36, 125] {
            let r = Zm::new(m);
            for a in 0..m {
                let (d, u) = r.unit_split(a);
                assert!(r.is_unit(u), "m={m} a={a}");
                assert_eq!(r.mul(d % m, u), a, "m={m} a={a}");
                assert_eq!(m % d, 0);
            }
        }
    }

    #[test]
    fn large_modulus_mul_does_not_overflow() {
        let m = (1u64 << 62) + 135;
        let r = Zm::new(m);
        let a = m - 1;
        assert_eq!(r.mul(a, a), 1);
        assert_eq!(r.add(a, a), m - 2);
    }

    #[test]
    fn inverse_and_divisors() {
        let r = Zm::new(25);
        assert_eq!(r.inv(2), Some(13));
        assert_eq!(r.inv(5), None);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(5) && !is_prime(1) && !is_prime(9));
    }
}
