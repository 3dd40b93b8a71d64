//! Arithmetic in the prime field F_p.
//!
//! Elements are plain `u64` values kept in `[0, p)`. The modulus is carried by
//! the ring context, so these are free functions rather than a wrapper type.

use thiserror::Error;

/// Largest admissible characteristic (exclusive).
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the supported bound {MAX_PRIME}")]
    TooLarge(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a characteristic for use as a ring context.
pub fn check_prime(p: u64) -> Result<u64, FieldError> {
    if p >= MAX_PRIME {
        return Err(FieldError::TooLarge(p));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(p)
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    (p - a) % p
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub fn pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero element.
///
/// Panics on zero.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    pow(a, p - 2, p)
}

/// Reduces a signed integer into `[0, p)`.
#[inline]
pub fn from_i64(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// Legendre-style quadratic character: 1 for nonzero squares, p-1 for
/// non-squares, 0 for zero.
pub fn quadratic_character(a: u64, p: u64) -> u64 {
    if p == 2 {
        return a % 2;
    }
    pow(a, (p - 1) / 2, p)
}
