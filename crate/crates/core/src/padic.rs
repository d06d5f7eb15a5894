//! Fixed-precision elements of Q_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::residue::split_p;

pub const DEFAULT_PRECISION: u32 = 64;

/// `p^v * u` with `u` a unit known modulo `p^n`, or zero known modulo `p^abs`.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Zero { abs: i64 },
    Unit { v: i64, u: BigInt, n: u32 },
}

fn pow(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

impl PadicNumber {
    pub fn from_rational(num: &BigInt, den: &BigInt, p: u64, n: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert!(n >= 1, "precision must be positive");
        if num.is_zero() {
            return Self::zero(p, n as i64);
        }
        let (a, un) = split_p(num, p);
        let (b, ud) = split_p(den, p);
        let m = pow(p, n);
        let inv = mod_inverse(&ud, &m).expect("unit denominator");
        let u = (un * inv).mod_floor(&m);
        PadicNumber {
            p,
            repr: Repr::Unit {
                v: a as i64 - b as i64,
                u,
                n,
            },
        }
    }

    pub fn from_int(x: i64, p: u64, n: u32) -> Self {
        Self::from_rational(&BigInt::from(x), &BigInt::one(), p, n)
    }

    /// Zero known modulo `p^abs`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PadicNumber {
            p,
            repr: Repr::Zero { abs },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation, or `None` for the zero marker.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { v, .. } => Some(*v),
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { u, .. } => Some(u),
        }
    }

    /// Number of significant digits (0 for the zero marker).
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { n, .. } => *n,
        }
    }

    /// The exponent `k` such that the value is known modulo `p^k`.
    pub fn absolute_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { v, n, .. } => v + *n as i64,
        }
    }

    pub fn is_provably_nonzero(&self) -> bool {
        matches!(self.repr, Repr::Unit { .. })
    }

    /// Multiplicative inverse.
    pub fn invert(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Unit { v, u, n } => {
                let m = pow(self.p, *n);
                let inv = mod_inverse(u, &m).expect("unit");
                Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Unit { v: -v, u: inv, n: *n },
                })
            }
        }
    }

    /// The rational integer `p^v * u` when `v >= 0`.
    pub fn to_integer(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero { .. } => Some(BigInt::zero()),
            Repr::Unit { v, u, .. } if *v >= 0 => Some(pow(self.p, *v as u32) * u),
            _ => None,
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed primes");
    }

    fn normalized(p: u64, v: i64, value: BigInt, abs: i64) -> Self {
        let rel = abs - v;
        if rel <= 0 {
            return Self::zero(p, abs);
        }
        let value = value.mod_floor(&pow(p, rel as u32));
        if value.is_zero() {
            return Self::zero(p, abs);
        }
        let (w, u) = split_p(&value, p);
        PadicNumber {
            p,
            repr: Repr::Unit {
                v: v + w as i64,
                u,
                n: (rel - w as i64) as u32,
            },
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => true,
            (Repr::Zero { abs }, Repr::Unit { v, .. }) | (Repr::Unit { v, .. }, Repr::Zero { abs }) => {
                v >= abs
            }
            (Repr::Unit { v: v1, u: u1, n: n1 }, Repr::Unit { v: v2, u: u2, n: n2 }) => {
                let m = pow(self.p, (*n1).min(*n2));
                v1 == v2 && u1.mod_floor(&m) == u2.mod_floor(&m)
            }
        }
    }
}

impl<'a> Add<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn add(self, o: &PadicNumber) -> PadicNumber {
        self.check_prime(o);
        let p = self.p;
        let abs = self.absolute_precision().min(o.absolute_precision());
        match (&self.repr, &o.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => PadicNumber::zero(p, abs),
            (Repr::Zero { .. }, Repr::Unit { v, u, .. }) | (Repr::Unit { v, u, .. }, Repr::Zero { .. }) => {
                PadicNumber::normalized(p, *v, u.clone(), abs)
            }
            (Repr::Unit { v: v1, u: u1, .. }, Repr::Unit { v: v2, u: u2, .. }) => {
                let v = (*v1).min(*v2);
                let value = pow(p, (v1 - v) as u32) * u1 + pow(p, (v2 - v) as u32) * u2;
                PadicNumber::normalized(p, v, value, abs)
            }
        }
    }
}

impl<'a> Neg for &'a PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { v, u, n } => PadicNumber {
                p: self.p,
                repr: Repr::Unit {
                    v: *v,
                    u: (-u).mod_floor(&pow(self.p, *n)),
                    n: *n,
                },
            },
        }
    }
}

impl<'a> Sub<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn sub(self, o: &PadicNumber) -> PadicNumber {
        self + &(-o)
    }
}

impl<'a> Mul<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn mul(self, o: &PadicNumber) -> PadicNumber {
        self.check_prime(o);
        let p = self.p;
        match (&self.repr, &o.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => PadicNumber::zero(p, a + b),
            (Repr::Zero { abs }, Repr::Unit { v, .. }) | (Repr::Unit { v, .. }, Repr::Zero { abs }) => {
                PadicNumber::zero(p, abs + v)
            }
            (Repr::Unit { v: v1, u: u1, n: n1 }, Repr::Unit { v: v2, u: u2, n: n2 }) => {
                let n = (*n1).min(*n2);
                PadicNumber {
                    p,
                    repr: Repr::Unit {
                        v: v1 + v2,
                        u: (u1 * u2).mod_floor(&pow(p, n)),
                        n,
                    },
                }
            }
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, o: PadicNumber) -> PadicNumber {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match &self.repr {
            Repr::Zero { abs } => write!(f, "O({p}^{abs})"),
            Repr::Unit { v, u, n } => {
                let pb = BigInt::from(p);
                let mut x = u.clone();
                let mut terms = Vec::with_capacity(*n as usize);
                for i in 0..*n {
                    let (q, d) = x.div_mod_floor(&pb);
                    terms.push(match i {
                        0 => format!("{d}"),
                        1 => format!("{d}*{p}"),
                        _ => format!("{d}*{p}^{i}"),
                    });
                    x = q;
                }
                debug_assert!(!x.is_negative());
                write!(f, "{p}^{v} * ({}) + O({p}^{})", terms.join(" + "), v + *n as i64)
            }
        }
    }
}
