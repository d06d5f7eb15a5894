//! Weierstrass curves in long form: integral models, reduction mod p, point
//! arithmetic over any field, and division polynomials over Z.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{FieldOps, Fp, Ring};
use crate::error::{Error, Result};
use crate::poly::{primitive_part, zpoly, Polynomial, ZPoly};
use crate::roots::quadratic_roots_in_y;
use crate::{Element, Field};

/// Largest prime for which F_p point enumeration is allowed.
pub const ENUMERATION_GUARD: u64 = 10_000;

/// G_{m,k} = Z/m × Z/mk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionGroup {
    pub m: u64,
    pub k: u64,
}

impl TorsionGroup {
    pub const TRIVIAL: TorsionGroup = TorsionGroup { m: 1, k: 1 };

    pub fn new(m: u64, k: u64) -> Self {
        assert!(m >= 1 && k >= 1, "G_(m,k) needs m, k >= 1");
        TorsionGroup { m, k }
    }

    /// Z/a × Z/b with a | b.
    pub fn from_invariants(a: u64, b: u64) -> Self {
        assert!(a >= 1 && b % a == 0, "invariants must divide");
        TorsionGroup { m: a, k: b / a }
    }

    pub fn cyclic(n: u64) -> Self {
        TorsionGroup { m: 1, k: n }
    }

    pub fn order(&self) -> u64 {
        self.m * self.m * self.k
    }

    /// Largest element order.
    pub fn exponent(&self) -> u64 {
        self.m * self.k
    }

    /// Direct sum with a group of coprime order.
    pub fn coprime_sum(&self, o: &TorsionGroup) -> TorsionGroup {
        assert_eq!(self.order().gcd(&o.order()), 1, "orders must be coprime");
        TorsionGroup {
            m: self.m * o.m,
            k: self.k * o.k,
        }
    }

    /// The q-primary component.
    pub fn q_part(&self, q: u64) -> TorsionGroup {
        let qpow = |mut n: u64| {
            let mut r = 1;
            while n % q == 0 {
                n /= q;
                r *= q;
            }
            r
        };
        TorsionGroup::from_invariants(qpow(self.m), qpow(self.exponent()))
    }

    /// Number of elements killed by n.
    pub fn n_torsion_count(&self, n: u64) -> u64 {
        self.m.gcd(&n) * self.exponent().gcd(&n)
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.k) {
            (1, k) => write!(f, "Z/{k}"),
            (m, k) => write!(f, "Z/{m} x Z/{}", m * k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Ordinary,
    Supersingular,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::Ordinary => "ordinary",
            ReductionKind::Supersingular => "supersingular",
        })
    }
}

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveModel {
    pub a: [BigInt; 5],
}

impl CurveModel {
    pub fn new(a: [i64; 5]) -> Result<Self> {
        Self::from_bigints(a.map(BigInt::from))
    }

    pub fn from_bigints(a: [BigInt; 5]) -> Result<Self> {
        let e = CurveModel { a };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn a1(&self) -> &BigInt {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigInt {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigInt {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigInt {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigInt {
        &self.a[4]
    }

    pub fn b2(&self) -> BigInt {
        self.a1() * self.a1() + 4 * self.a2()
    }
    pub fn b4(&self) -> BigInt {
        2 * self.a4() + self.a1() * self.a3()
    }
    pub fn b6(&self) -> BigInt {
        self.a3() * self.a3() + 4 * self.a6()
    }
    pub fn b8(&self) -> BigInt {
        let [a1, a2, a3, a4, a6] = &self.a;
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }
    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }
    pub fn c6(&self) -> BigInt {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + 36 * &b2 * self.b4() - 216 * self.b6()
    }
    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !self.discriminant().is_multiple_of(&BigInt::from(p))
    }

    pub fn reduce(&self, p: u64) -> Result<ReducedCurve> {
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        let pb = BigInt::from(p);
        let a = self
            .a
            .clone()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"));
        Ok(ReducedCurve { p, a })
    }

    /// The model with coefficients mapped into a ring.
    pub fn over<T: Ring>(&self, embed: impl Fn(&BigInt) -> T) -> WeierstrassCurve<T> {
        WeierstrassCurve {
            a: self.a.clone().map(|c| embed(&c)),
        }
    }

    pub fn over_field(&self, k: &Field) -> WeierstrassCurve<Element> {
        self.over(|c| k.from_bigint(c))
    }

    /// 4x³ + b2x² + 2b4x + b6, the square of 2y + a1x + a3 on the curve.
    pub fn two_torsion_poly(&self) -> ZPoly {
        Polynomial::new(vec![self.b6(), 2 * self.b4(), self.b2(), BigInt::from(4)])
    }
}

/// A curve over F_p with good reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedCurve {
    pub p: u64,
    pub a: [u64; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpGroupInfo {
    pub group: TorsionGroup,
    pub order: u64,
    pub a_p: i64,
    pub kind: ReductionKind,
}

impl ReducedCurve {
    /// Any coefficient tuple; `None` when singular.
    pub fn from_coeffs(p: u64, a: [u64; 5]) -> Option<Self> {
        let model = CurveModel::new(a.map(|x| x as i64)).ok()?;
        model.reduce(p).ok()
    }

    pub fn curve(&self) -> WeierstrassCurve<Fp> {
        WeierstrassCurve {
            a: self.a.map(|c| Fp::new(c as i64, self.p)),
        }
    }

    /// All affine points, in order of x then y.
    pub fn affine_points(&self) -> Result<Vec<(u64, u64)>> {
        let p = self.p;
        if p > ENUMERATION_GUARD {
            return Err(Error::OutOfRange(format!(
                "F_p enumeration limited to p <= {ENUMERATION_GUARD}"
            )));
        }
        let [a1, a2, a3, a4, a6] = self.a;
        let mut pts = Vec::new();
        if p == 2 {
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs + rhs) % 2 == 0 {
                        pts.push((x, y));
                    }
                }
            }
            return Ok(pts);
        }
        // (2y + a1x + a3)² = 4(x³ + a2x² + a4x + a6) + (a1x + a3)².
        let mut sqrt: HashMap<u64, Vec<u64>> = HashMap::new();
        for s in 0..p {
            sqrt.entry(s * s % p).or_default().push(s);
        }
        let inv2 = (p + 1) / 2;
        for x in 0..p {
            let lin = (a1 * x + a3) % p;
            let rhs = ((x * x % p * x) + a2 * x % p * x + a4 * x + a6) % p;
            let d = (4 * rhs + lin * lin) % p;
            if let Some(roots) = sqrt.get(&d) {
                let mut ys: Vec<u64> = roots
                    .iter()
                    .map(|s| (s + p - lin) % p * inv2 % p)
                    .collect();
                ys.sort_unstable();
                pts.extend(ys.into_iter().map(|y| (x, y)));
            }
        }
        Ok(pts)
    }

    pub fn order(&self) -> Result<u64> {
        Ok(self.affine_points()?.len() as u64 + 1)
    }

    pub fn group_structure(&self) -> Result<FpGroupInfo> {
        fp_group_structure(self)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Group structure of Ē(F_p) from point enumeration and the group exponent.
pub fn fp_group_structure(curve: &ReducedCurve) -> Result<FpGroupInfo> {
    let p = curve.p;
    let pts = curve.affine_points()?;
    let n = pts.len() as u64 + 1;
    let e = curve.curve();
    let primes = prime_factors(n);
    let mut exponent = 1u64;
    for &(x, y) in &pts {
        let pt = CurvePoint::Affine(Fp::new(x as i64, p), Fp::new(y as i64, p));
        let ord = e.order_dividing(&pt, n, &primes)?;
        exponent = exponent.lcm(&ord);
        if exponent == n {
            break;
        }
    }
    let a_p = 1 + p as i64 - n as i64;
    let kind = if a_p.rem_euclid(p as i64) == 0 {
        ReductionKind::Supersingular
    } else {
        ReductionKind::Ordinary
    };
    Ok(FpGroupInfo {
        group: TorsionGroup::from_invariants(n / exponent, exponent),
        order: n,
        a_p,
        kind,
    })
}

#[derive(Clone, Debug)]
pub enum CurvePoint<T> {
    Infinity,
    Affine(T, T),
}

impl<T> CurvePoint<T> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&T> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(x),
        }
    }
}

fn same<T: Ring>(a: &T, b: &T) -> bool {
    a.sub_ref(b).is_zero_elem()
}

/// Long Weierstrass equation with coefficients in a field.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve<T> {
    pub a: [T; 5],
}

impl<T: FieldOps> WeierstrassCurve<T> {
    /// lhs − rhs of the Weierstrass equation at (x, y).
    pub fn residual(&self, x: &T, y: &T) -> T {
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = y.mul_ref(y).add_ref(&a1.mul_ref(x).mul_ref(y)).add_ref(&a3.mul_ref(y));
        let x2 = x.mul_ref(x);
        let rhs = x2
            .mul_ref(x)
            .add_ref(&a2.mul_ref(&x2))
            .add_ref(&a4.mul_ref(x))
            .add_ref(a6);
        lhs.sub_ref(&rhs)
    }

    pub fn contains(&self, pt: &CurvePoint<T>) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => self.residual(x, y).is_zero_elem(),
        }
    }

    pub fn neg(&self, pt: &CurvePoint<T>) -> CurvePoint<T> {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let [a1, _, a3, _, _] = &self.a;
                let ny = y.neg_ref().sub_ref(&a1.mul_ref(x)).sub_ref(a3);
                CurvePoint::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p1: &CurvePoint<T>, p2: &CurvePoint<T>) -> Result<CurvePoint<T>> {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (CurvePoint::Infinity, _) => return Ok(p2.clone()),
            (_, CurvePoint::Infinity) => return Ok(p1.clone()),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let (lambda, nu) = if same(x1, x2) {
            let denom = y1.add_ref(y1).add_ref(&a1.mul_ref(x1)).add_ref(a3);
            if !same(y1, y2) || denom.is_zero_elem() {
                // x1 = x2 and P2 ≠ P1 forces P2 = −P1.
                return Ok(CurvePoint::Infinity);
            }
            let x1sq = x1.mul_ref(x1);
            let num = x1sq
                .mul_ref(&x1.int_like(3))
                .add_ref(&a2.mul_ref(x1).mul_ref(&x1.int_like(2)))
                .add_ref(a4)
                .sub_ref(&a1.mul_ref(y1));
            let num_nu = x1sq
                .mul_ref(x1)
                .neg_ref()
                .add_ref(&a4.mul_ref(x1))
                .add_ref(&a6.mul_ref(&x1.int_like(2)))
                .sub_ref(&a3.mul_ref(y1));
            (num.div_ref(&denom)?, num_nu.div_ref(&denom)?)
        } else {
            let dx = x2.sub_ref(x1);
            let lambda = y2.sub_ref(y1).div_ref(&dx)?;
            let nu = y1.mul_ref(x2).sub_ref(&y2.mul_ref(x1)).div_ref(&dx)?;
            (lambda, nu)
        };
        let x3 = lambda
            .mul_ref(&lambda)
            .add_ref(&a1.mul_ref(&lambda))
            .sub_ref(a2)
            .sub_ref(x1)
            .sub_ref(x2);
        let y3 = lambda
            .add_ref(a1)
            .mul_ref(&x3)
            .neg_ref()
            .sub_ref(&nu)
            .sub_ref(a3);
        Ok(CurvePoint::Affine(x3, y3))
    }

    pub fn double(&self, pt: &CurvePoint<T>) -> Result<CurvePoint<T>> {
        self.add(pt, pt)
    }

    pub fn mul(&self, pt: &CurvePoint<T>, n: u64) -> Result<CurvePoint<T>> {
        let mut acc = CurvePoint::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base)?;
            }
        }
        Ok(acc)
    }

    /// Order of `pt` by repeated addition; `None` when it exceeds `bound`.
    pub fn order(&self, pt: &CurvePoint<T>, bound: u64) -> Result<Option<u64>> {
        let mut acc = pt.clone();
        for n in 1..=bound {
            if acc.is_infinity() {
                return Ok(Some(n));
            }
            acc = self.add(&acc, pt)?;
        }
        Ok(None)
    }

    /// Order of a point known to be killed by `n`, whose prime factors are given.
    pub fn order_dividing(&self, pt: &CurvePoint<T>, n: u64, primes: &[u64]) -> Result<u64> {
        let mut d = n;
        for &q in primes {
            while d % q == 0 && self.mul(pt, d / q)?.is_infinity() {
                d /= q;
            }
        }
        Ok(d)
    }
}

/// Division polynomials of one curve, cached.
///
/// `f(n)` is ψ_n for odd n and ψ_n/ψ_2 for even n, so every entry lies in Z[x].
pub struct DivisionPolynomials {
    b2: BigInt,
    b4: BigInt,
    b6: BigInt,
    b8: BigInt,
    big_f: ZPoly,
    cache: HashMap<u64, ZPoly>,
}

impl DivisionPolynomials {
    pub fn new(e: &CurveModel) -> Self {
        DivisionPolynomials {
            b2: e.b2(),
            b4: e.b4(),
            b6: e.b6(),
            b8: e.b8(),
            big_f: e.two_torsion_poly(),
            cache: HashMap::new(),
        }
    }

    /// ψ_2² = 4x³ + b2x² + 2b4x + b6.
    pub fn psi2_sq(&self) -> &ZPoly {
        &self.big_f
    }

    pub fn f(&mut self, n: u64) -> ZPoly {
        if let Some(v) = self.cache.get(&n) {
            return v.clone();
        }
        let (b2, b4, b6, b8) = (&self.b2, &self.b4, &self.b6, &self.b8);
        let v = match n {
            0 => ZPoly::zero(),
            1 | 2 => zpoly(&[1]),
            3 => Polynomial::new(vec![
                b8.clone(),
                3 * b6,
                3 * b4,
                b2.clone(),
                BigInt::from(3),
            ]),
            4 => Polynomial::new(vec![
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                10 * b8,
                10 * b6,
                5 * b4,
                b2.clone(),
                BigInt::from(2),
            ]),
            _ if n % 2 == 1 => {
                let m = (n - 1) / 2;
                let (fm2, fm, fm1, fp1) = (self.f(m + 2), self.f(m), self.f(m - 1), self.f(m + 1));
                let ff = self.big_f.mul(&self.big_f);
                let t1 = fm2.mul(&fm.mul(&fm).mul(&fm));
                let t2 = fm1.mul(&fp1.mul(&fp1).mul(&fp1));
                if m % 2 == 0 {
                    ff.mul(&t1).sub(&t2)
                } else {
                    t1.sub(&ff.mul(&t2))
                }
            }
            _ => {
                let m = n / 2;
                let (fm, fm2, fm1, fmm2, fp1) =
                    (self.f(m), self.f(m + 2), self.f(m - 1), self.f(m - 2), self.f(m + 1));
                let inner = fm2.mul(&fm1.mul(&fm1)).sub(&fmm2.mul(&fp1.mul(&fp1)));
                fm.mul(&inner)
            }
        };
        self.cache.insert(n, v.clone());
        v
    }

    /// ψ_n² as a polynomial in x.
    pub fn psi_sq(&mut self, n: u64) -> ZPoly {
        let f = self.f(n);
        let sq = f.mul(&f);
        if n % 2 == 0 {
            sq.mul(&self.big_f)
        } else {
            sq
        }
    }

    /// φ_n with x(nP) = φ_n(x) / ψ_n²(x).
    pub fn phi(&mut self, n: u64) -> ZPoly {
        let x = zpoly(&[0, 1]);
        if n == 1 {
            return x;
        }
        let (fnn, fp, fm) = (self.f(n), self.f(n + 1), self.f(n - 1));
        let sq = fnn.mul(&fnn);
        if n % 2 == 1 {
            x.mul(&sq).sub(&self.big_f.mul(&fp).mul(&fm))
        } else {
            x.mul(&self.big_f).mul(&sq).sub(&fp.mul(&fm))
        }
    }

    /// Squarefree polynomial whose roots are the x-coordinates of E[n] ∖ {O}.
    pub fn x_poly(&mut self, n: u64) -> ZPoly {
        assert!(n >= 2, "n must be at least 2");
        let f = self.f(n);
        if n % 2 == 0 {
            primitive_part(&self.big_f.mul(&f))
        } else {
            primitive_part(&f)
        }
    }
}

pub fn division_polynomial_x(e: &CurveModel, n: u64) -> ZPoly {
    DivisionPolynomials::new(e).x_poly(n)
}

/// Points of E(K) with x-coordinate `x0`.
pub fn points_with_x(e: &CurveModel, k: &Field, x0: &Element) -> Result<Vec<CurvePoint<Element>>> {
    let c = e.over_field(k);
    let [a1, a2, a3, a4, a6] = &c.a;
    let b = a1.mul_ref(x0).add_ref(a3);
    let x2 = x0.mul_ref(x0);
    let rhs = x2
        .mul_ref(x0)
        .add_ref(&a2.mul_ref(&x2))
        .add_ref(&a4.mul_ref(x0))
        .add_ref(a6);
    let ys = quadratic_roots_in_y(&b, &rhs.neg_ref())?;
    Ok(ys
        .into_iter()
        .map(|y| CurvePoint::Affine(x0.clone(), y))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{squarefree_part, to_q};
    use crate::roots::integer_roots_in_field;

    fn curve(a: [i64; 5]) -> CurveModel {
        CurveModel::new(a).unwrap()
    }

    fn brute_count(p: u64, a: [u64; 5]) -> u64 {
        let [a1, a2, a3, a4, a6] = a;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = (y * y + a1 * x * y + a3 * y) % p;
                let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn invariants_of_11a1() {
        let e = curve([0, -1, 1, -10, -20]);
        assert_eq!(e.discriminant(), BigInt::from(-161051));
        assert_eq!(4 * e.b8(), e.b2() * e.b6() - e.b4() * e.b4());
        let c4 = e.c4();
        let c6 = e.c6();
        assert_eq!(1728 * e.discriminant(), &c4 * &c4 * &c4 - &c6 * &c6);
        assert!(e.reduce(2).is_ok());
        assert_eq!(e.reduce(11), Err(Error::BadReduction(11)));
    }

    #[test]
    fn small_discriminant_example() {
        let e = curve([0, 0, 0, 1, 1]);
        assert_eq!(e.discriminant(), BigInt::from(-496));
        assert!(e.reduce(5).is_ok());
    }

    #[test]
    fn group_structures() {
        let g = fp_group_structure(&curve([0, 0, 0, 0, 1]).reduce(5).unwrap()).unwrap();
        assert_eq!((g.order, g.group, g.a_p), (6, TorsionGroup::cyclic(6), 0));
        assert_eq!(g.kind, ReductionKind::Supersingular);
        let e11 = curve([0, -1, 1, -10, -20]);
        let g = fp_group_structure(&e11.reduce(5).unwrap()).unwrap();
        assert_eq!(g.group, TorsionGroup::cyclic(5));
        let g = fp_group_structure(&curve([1, 1, 1, -10, -10]).reduce(2).unwrap()).unwrap();
        assert_eq!(g.order, 4);
    }

    #[test]
    fn point_orders_on_11a1_mod_5() {
        let r = curve([0, -1, 1, -10, -20]).reduce(5).unwrap();
        let e = r.curve();
        for (x, y) in r.affine_points().unwrap() {
            let pt = CurvePoint::Affine(Fp::new(x as i64, 5), Fp::new(y as i64, 5));
            assert!(e.contains(&pt));
            assert!(e.mul(&pt, 5).unwrap().is_infinity());
            assert!(e.add(&pt, &e.neg(&pt)).unwrap().is_infinity());
            assert_eq!(e.order(&pt, 10).unwrap(), Some(5));
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for p in [2u64, 3, 5, 7] {
            for seed in 0..40u64 {
                let a = [seed % p, (seed / 2) % p, (seed / 3) % p, (seed * 7 + 1) % p, (seed * 5 + 3) % p];
                if let Some(r) = ReducedCurve::from_coeffs(p, a) {
                    assert_eq!(r.order().unwrap(), brute_count(p, a), "p={p} a={a:?}");
                }
            }
        }
    }

    #[test]
    fn division_polynomial_shapes() {
        let e = curve([0, 0, 0, 2, 3]);
        let mut dp = DivisionPolynomials::new(&e);
        assert_eq!(dp.f(3), zpoly(&[-4, 36, 12, 0, 3]));
        assert_eq!(dp.psi_sq(2), zpoly(&[12, 8, 0, 4]));
        let e = curve([1, -1, 1, -1, -14]);
        let mut dp = DivisionPolynomials::new(&e);
        for n in 2..=7u64 {
            let xp = dp.x_poly(n);
            let expect = if n % 2 == 1 { (n * n - 1) / 2 } else { (n * n - 4) / 2 + 3 };
            assert_eq!(xp.degree(), Some(expect as usize), "n={n}");
            assert_eq!(xp, squarefree_part(&to_q(&dp.psi_sq(n))).unwrap(), "n={n}");
        }
    }

    #[test]
    fn multiplication_by_n_via_phi() {
        // x(nP) = φ_n/ψ_n² at the point (5, 5) of 11a1.
        let e = curve([0, -1, 1, -10, -20]);
        let mut dp = DivisionPolynomials::new(&e);
        let k = Field::qp(7, 30).unwrap();
        let c = e.over_field(&k);
        let pt = CurvePoint::Affine(k.from_int(5), k.from_int(5));
        for n in 2..=4u64 {
            let np = c.mul(&pt, n).unwrap();
            let x = k.from_int(5);
            let num = dp.phi(n).map(|v| k.from_bigint(v)).eval(&x);
            let den = dp.psi_sq(n).map(|v| k.from_bigint(v)).eval(&x);
            let xn = num.div_ref(&den).unwrap();
            assert!(xn.approx_eq(np.x().unwrap()), "n={n}");
        }
    }

    #[test]
    fn points_over_q2() {
        let e = curve([0, -1, 1, -10, -20]);
        let k = Field::qp(2, 40).unwrap();
        let pts = points_with_x(&e, &k, &k.from_int(5)).unwrap();
        assert_eq!(pts.len(), 2);
        let ys: Vec<_> = pts
            .iter()
            .map(|p| match p {
                CurvePoint::Affine(_, y) => y.clone(),
                _ => unreachable!(),
            })
            .collect();
        assert!(ys.iter().any(|y| y.approx_eq(&k.from_int(5))));
        assert!(ys.iter().any(|y| y.approx_eq(&k.from_int(-6))));
    }

    #[test]
    fn torsion_points_are_killed() {
        let e = curve([0, -1, 1, -10, -20]);
        let k = Field::qp(2, 40).unwrap();
        let c = e.over_field(&k);
        let xp = division_polynomial_x(&e, 5);
        for x in integer_roots_in_field(&xp, &k).unwrap() {
            for pt in points_with_x(&e, &k, &x).unwrap() {
                assert!(c.contains(&pt));
                assert!(c.mul(&pt, 5).unwrap().is_infinity());
            }
        }
    }

    #[test]
    fn group_helpers() {
        let g = TorsionGroup::new(2, 2);
        assert_eq!(g.order(), 8);
        assert_eq!(g.to_string(), "Z/2 x Z/4");
        assert_eq!(g.n_torsion_count(2), 4);
        assert_eq!(TorsionGroup::cyclic(12).q_part(2), TorsionGroup::cyclic(4));
        assert_eq!(
            TorsionGroup::new(2, 1).coprime_sum(&TorsionGroup::cyclic(3)),
            TorsionGroup::new(2, 3)
        );
    }
}
