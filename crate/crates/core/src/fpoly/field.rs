//! Prime moduli and residues in the prime field F_p.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Largest accepted modulus. Products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Returns `e` with `c = p^e`, or `None` if `c` is not a positive power of `p`.
    pub fn log_of_power(self, c: u64) -> Option<u32> {
        if c < self.0 {
            return None;
        }
        let mut e = 0;
        let mut v = c;
        while v % self.0 == 0 {
            v /= self.0;
            e += 1;
        }
        (v == 1).then_some(e)
    }

    /// `p^e`, failing on overflow.
    pub fn pow(self, e: u32) -> Result<u64, AlgebraError> {
        self.0.checked_pow(e).ok_or(AlgebraError::Overflow)
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, n: i64) -> u64 {
        n.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub(crate) fn pow_mod(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub(crate) fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut old_r, mut r) = (a as i64, self.0 as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Some(self.reduce(old_s))
    }
}

impl TryFrom<u64> for Prime {
    type Error = AlgebraError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue class in F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: Prime,
}

impl FieldElement {
    pub fn new(n: i64, p: Prime) -> Self {
        FieldElement { value: p.reduce(n), p }
    }

    pub fn from_u64(n: u64, p: Prime) -> Self {
        FieldElement { value: n % p.get(), p }
    }

    pub fn zero(p: Prime) -> Self {
        FieldElement { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FieldElement { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        FieldElement { value: self.p.pow_mod(self.value, e), p: self.p }
    }

    pub fn inv(self) -> Option<Self> {
        self.p.inv(self.value).map(|value| FieldElement { value, p: self.p })
    }

    /// The unique c-th root for `c` a power of `p`. Frobenius is the identity on F_p.
    pub fn pth_power_root(self) -> Self {
        self
    }

    fn check(self, other: Self) {
        assert_eq!(self.p, other.p, "field elements over different primes");
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { value: self.p.add(self.value, rhs.value), p: self.p }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { value: self.p.sub(self.value, rhs.value), p: self.p }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { value: self.p.mul(self.value, rhs.value), p: self.p }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement { value: self.p.neg(self.value), p: self.p }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        for n in [0, 1, 4, 9, 15, 91, 1 << 31] {
            assert!(Prime::new(n).is_err(), "{n}");
        }
        for n in [2, 3, 5, 7, 13, 101, 65537] {
            assert!(Prime::new(n).is_ok(), "{n}");
        }
    }

    #[test]
    fn power_logs() {
        let p = Prime::new(2).unwrap();
        assert_eq!(p.log_of_power(2), Some(1));
        assert_eq!(p.log_of_power(8), Some(3));
        assert_eq!(p.log_of_power(1), None);
        assert_eq!(p.log_of_power(6), None);
        let p3 = Prime::new(3).unwrap();
        assert_eq!(p3.log_of_power(9), Some(2));
        assert_eq!(p3.log_of_power(2), None);
    }

    #[test]
    fn inverse_and_frobenius() {
        for p in [2u64, 3, 5, 7, 11] {
            let pr = Prime::new(p).unwrap();
            for a in 1..p {
                let x = FieldElement::from_u64(a, pr);
                assert_eq!(x * x.inv().unwrap(), FieldElement::one(pr));
                assert_eq!(x.pow(p), x);
            }
            assert!(FieldElement::zero(pr).inv().is_none());
        }
    }

    #[test]
    fn negative_reduction() {
        let p = Prime::new(5).unwrap();
        assert_eq!(FieldElement::new(-1, p).value(), 4);
        assert_eq!(FieldElement::new(-10, p).value(), 0);
    }
}
