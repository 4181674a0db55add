//! Prime fields F_p with exact residue arithmetic.
//!
//! Elements are canonical residues in `[0, p)` stored as `u64`. The
//! characteristic is a runtime value, so a field handle is threaded through
//! every matrix operation instead of being baked into the element type.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} out of range [2, 2^31)")]
    OutOfRange(u64),
}

/// A prime field F_p, 2 <= p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

/// Largest modulus for which eliminations may defer reduction: products stay
/// below 2^48, leaving 2^16 lazy accumulations before a u64 can overflow.
pub(crate) const LAZY_LIMIT: u64 = 1 << 24;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(FieldError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// The default characteristic used across the toolkit.
    pub fn default_field() -> Self {
        PrimeField { p: 32003 }
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Reduce an arbitrary signed integer to its canonical residue.
    #[inline]
    pub fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p < 2^31 so the product fits in u64.
        (a * b) % self.p
    }

    /// Apply a sign: `s` is +1 or -1.
    #[inline]
    pub fn signed(&self, a: u64, s: i32) -> u64 {
        if s >= 0 {
            a
        } else {
            self.neg(a)
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
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

    /// Multiplicative inverse by Fermat's little theorem. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_primes_rejects_composites() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(32003).is_ok());
        assert!(PrimeField::new(2147483647).is_ok()); // 2^31 - 1
        assert_eq!(PrimeField::new(32001), Err(FieldError::NotPrime(32001)));
        assert_eq!(PrimeField::new(0), Err(FieldError::OutOfRange(0)));
        assert_eq!(PrimeField::new(1), Err(FieldError::OutOfRange(1)));
        assert_eq!(
            PrimeField::new(1 << 31),
            Err(FieldError::OutOfRange(1 << 31))
        );
    }

    #[test]
    fn arithmetic_is_exact() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_i64(-2), 5);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
