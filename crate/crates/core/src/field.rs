//! Arithmetic in the prime field `F_p`.
//!
//! Residues are plain `u32` values in `[0, p)`. The modulus carries the
//! operations so that callers never have to remember to reduce.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    /// Largest accepted modulus. Dense weight arrays have `p^3` entries and
    /// products of two residues must fit in a `u64`.
    pub const MAX: u32 = 1 << 16;

    pub fn new(p: u32) -> Result<Self> {
        if p > Self::MAX || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of points of `F_p^3`.
    #[inline]
    pub fn cube(self) -> usize {
        let p = self.0 as usize;
        p * p * p
    }

    #[inline]
    pub fn square(self) -> usize {
        let p = self.0 as usize;
        p * p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// `base^exp` with the convention `0^0 = 1`.
    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for PrimeModulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = u32::deserialize(d)?;
        PrimeModulus::new(raw).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<u32> for PrimeModulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `binom(n, k) mod p`, computed exactly over the integers first (small `n`).
pub fn binomial_mod(n: u64, k: u64, p: PrimeModulus) -> u32 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    (acc % p.get() as u128) as u32
}

/// Exact binomial coefficient as `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(PrimeModulus::new(1).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert_eq!(PrimeModulus::new(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let m = PrimeModulus::new(p).unwrap();
            assert_eq!(m.inv(0), None);
            for a in 1..p {
                assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let m = PrimeModulus::new(5).unwrap();
        assert_eq!(m.pow(0, 0), 1);
        assert_eq!(m.pow(0, 3), 0);
        assert_eq!(m.reduce(-7), 3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(27, 9), 4_686_825);
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(binomial_mod(6, 2, m), 15 % 7);
    }
}
