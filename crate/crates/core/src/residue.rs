//! Integer types used for coordinates modulo a power of p.
//!
//! Field arithmetic is generic over the residue type. `u64` covers moduli
//! below 2^40 with `u128` accumulators; `BigInt` covers any precision.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Num, ToPrimitive, Zero};

pub trait Residue: Num + Clone + Debug + Eq + Hash + Send + Sync + 'static {
    /// Accumulator for sums of products before reduction.
    type Acc: Clone + Debug;

    /// Largest admissible modulus in bits, `None` when unbounded.
    const MAX_BITS: Option<u32>;

    fn from_u64(v: u64) -> Self;
    /// Reduces an arbitrary integer into `[0, m)`.
    fn from_bigint(v: &BigInt, m: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
    /// Converts a non-negative integer that fits the type.
    fn from_bigint_exact(v: &BigInt) -> Self;

    fn add_mod(&self, o: &Self, m: &Self) -> Self;
    fn sub_mod(&self, o: &Self, m: &Self) -> Self;
    fn mul_mod(&self, o: &Self, m: &Self) -> Self;
    fn reduce(&self, m: &Self) -> Self;

    fn acc_zero() -> Self::Acc;
    fn acc_mul_add(acc: &mut Self::Acc, a: &Self, b: &Self);
    fn acc_add(acc: &mut Self::Acc, a: &Self);
    fn acc_reduce(acc: &Self::Acc, m: &Self) -> Self;

    fn rem_u64(&self, d: u64) -> u64;
    fn div_u64(&self, d: u64) -> Self;

    /// Whether `p^digits` fits this type.
    fn supports(p: u64, digits: u32) -> bool {
        match Self::MAX_BITS {
            None => true,
            Some(bits) => (digits as f64) * (p as f64).log2() < bits as f64 - 0.5,
        }
    }

    fn neg_mod(&self, m: &Self) -> Self {
        Self::zero().sub_mod(self, m)
    }

    /// p-adic valuation capped at `cap` (returned when the value is 0 mod p^cap).
    fn val_capped(&self, p: u64, cap: u32) -> u32 {
        if self.is_zero() {
            return cap;
        }
        let mut v = 0;
        let mut x = self.clone();
        while v < cap && x.rem_u64(p) == 0 {
            x = x.div_u64(p);
            v += 1;
        }
        v
    }
}

impl Residue for u64 {
    type Acc = u128;
    const MAX_BITS: Option<u32> = Some(40);

    fn from_u64(v: u64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt, m: &Self) -> Self {
        let r = v.mod_floor(&BigInt::from(*m));
        r.to_u64().expect("reduced value fits")
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint_exact(v: &BigInt) -> Self {
        v.to_u64().expect("value fits u64")
    }
    #[inline]
    fn add_mod(&self, o: &Self, m: &Self) -> Self {
        let s = self + o;
        if s >= *m {
            s - m
        } else {
            s
        }
    }
    #[inline]
    fn sub_mod(&self, o: &Self, m: &Self) -> Self {
        if self >= o {
            self - o
        } else {
            self + m - o
        }
    }
    #[inline]
    fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        ((*self as u128 * *o as u128) % *m as u128) as u64
    }
    #[inline]
    fn reduce(&self, m: &Self) -> Self {
        self % m
    }
    #[inline]
    fn acc_zero() -> u128 {
        0
    }
    #[inline]
    fn acc_mul_add(acc: &mut u128, a: &Self, b: &Self) {
        *acc += *a as u128 * *b as u128;
    }
    #[inline]
    fn acc_add(acc: &mut u128, a: &Self) {
        *acc += *a as u128;
    }
    #[inline]
    fn acc_reduce(acc: &u128, m: &Self) -> Self {
        (acc % *m as u128) as u64
    }
    fn rem_u64(&self, d: u64) -> u64 {
        self % d
    }
    fn div_u64(&self, d: u64) -> Self {
        self / d
    }
}

impl Residue for BigInt {
    type Acc = BigInt;
    const MAX_BITS: Option<u32> = None;

    fn from_u64(v: u64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt, m: &Self) -> Self {
        v.mod_floor(m)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint_exact(v: &BigInt) -> Self {
        v.clone()
    }
    fn add_mod(&self, o: &Self, m: &Self) -> Self {
        let s = self + o;
        if &s >= m {
            s - m
        } else {
            s
        }
    }
    fn sub_mod(&self, o: &Self, m: &Self) -> Self {
        let s = self - o;
        if s.sign() == Sign::Minus {
            s + m
        } else {
            s
        }
    }
    fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        (self * o) % m
    }
    fn reduce(&self, m: &Self) -> Self {
        self.mod_floor(m)
    }
    fn acc_zero() -> BigInt {
        BigInt::zero()
    }
    fn acc_mul_add(acc: &mut BigInt, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn acc_add(acc: &mut BigInt, a: &Self) {
        *acc += a;
    }
    fn acc_reduce(acc: &BigInt, m: &Self) -> Self {
        acc.mod_floor(m)
    }
    fn rem_u64(&self, d: u64) -> u64 {
        (self % d).to_u64().expect("non-negative residue")
    }
    fn div_u64(&self, d: u64) -> Self {
        self / d
    }
}

/// v_p of a nonzero integer.
pub fn vp_bigint(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// Splits a nonzero integer as p^v * u with p not dividing u.
pub fn split_p(x: &BigInt, p: u64) -> (u32, BigInt) {
    let v = vp_bigint(x, p);
    (v, x / BigInt::from(p).pow(v))
}
