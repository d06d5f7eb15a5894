//! Minimal ring interfaces shared by polynomials and curve arithmetic.
//!
//! Constants are produced from an existing element (`zero_like`, `one_like`)
//! because extension-field elements carry their field.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Ring: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    /// Exactly zero, or zero at the available precision.
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

pub trait FieldOps: Ring {
    fn inv_ref(&self) -> Result<Self>;

    fn div_ref(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_ref(&o.inv_ref()?))
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl FieldOps for BigRational {
    fn inv_ref(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

/// An element of the prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn int_like(&self, n: i64) -> Self {
        Fp::new(n, self.p)
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        Fp {
            v: (self.v + o.v) % self.p,
            p: self.p,
        }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Fp {
            v: (self.v + self.p - o.v) % self.p,
            p: self.p,
        }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Fp {
            v: self.v * o.v % self.p,
            p: self.p,
        }
    }
    fn neg_ref(&self) -> Self {
        Fp {
            v: (self.p - self.v) % self.p,
            p: self.p,
        }
    }
}

impl FieldOps for Fp {
    fn inv_ref(&self) -> Result<Self> {
        if self.v == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.pow(self.p - 2))
        }
    }
}
