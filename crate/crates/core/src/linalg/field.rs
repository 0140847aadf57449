use serde::{Deserialize, Serialize};

use super::LinalgError;

/// A prime field `F_p`. Scalars are canonical residues `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = LinalgError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !is_prime(p as u64) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary signed integer into the field.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.p - b) as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let group = self.p as u64 - 1;
        let mut order = group;
        for q in prime_divisors(group) {
            while order % q == 0 && self.pow(a, order / q) == 1 {
                order /= q;
            }
        }
        Some(order)
    }

    /// Smallest field element of exact multiplicative order `k`, if any.
    pub fn primitive_root_of_unity(&self, k: u64) -> Option<u32> {
        if k == 0 || (self.p as u64 - 1) % k != 0 {
            return None;
        }
        (1..self.p).find(|&a| self.element_order(a) == Some(k))
    }

    /// Does the characteristic divide `n`?
    pub fn divides(&self, n: u64) -> bool {
        n % self.p as u64 == 0
    }
}
