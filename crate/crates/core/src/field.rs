//! Finite extensions of Q_p: an unramified layer W = Q_p(θ) of degree f,
//! optionally topped by an Eisenstein layer K = W(π) of degree e.
//!
//! Elements are stored as `p^shift * Σ c[j*f + i] θ^i π^j` with coordinates
//! modulo `p^prec`. A nonzero element always has some coordinate prime to p.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{FieldOps, Ring};
use crate::error::{Error, Result};
use crate::finite::{fp_poly_is_irreducible, ResidueField};
use crate::padic::PadicNumber;
use crate::residue::{split_p, vp_bigint, Residue};

/// Shift used by exact zeros.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionKind {
    Unramified,
    Eisenstein,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerDescriptor {
    pub kind: ExtensionKind,
    /// Integer coefficients of the defining polynomial, constant term first.
    pub coeffs: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerDescriptor {
    pub p: u64,
    pub layers: Vec<LayerDescriptor>,
}

struct Inner<R: Residue> {
    p: u64,
    e: usize,
    f: usize,
    digits: u32,
    modulus: R,
    pows: Vec<R>,
    /// Negated low coefficients of the unramified modulus h.
    neg_h: Vec<R>,
    /// Negated low coefficients of the Eisenstein polynomial, as W-elements.
    neg_a: Vec<Vec<R>>,
    residue: ResidueField,
    unr_poly: Option<Vec<BigInt>>,
    eis_poly: Option<Vec<BigInt>>,
}

pub struct TowerField<R: Residue = BigInt> {
    inner: Arc<Inner<R>>,
}

impl<R: Residue> Clone for TowerField<R> {
    fn clone(&self) -> Self {
        TowerField {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<R: Residue> fmt::Debug for TowerField<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TowerField(p={}, e={}, f={}, digits={})",
            self.inner.p, self.inner.e, self.inner.f, self.inner.digits
        )
    }
}

impl<R: Residue> PartialEq for TowerField<R> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &o.inner)
            || (self.inner.p == o.inner.p
                && self.inner.digits == o.inner.digits
                && self.inner.unr_poly == o.inner.unr_poly
                && self.inner.eis_poly == o.inner.eis_poly)
    }
}

fn is_monic(g: &[BigInt]) -> bool {
    g.last().map(|c| c.is_one()).unwrap_or(false)
}

fn descriptor_coeffs(g: &[BigInt]) -> Vec<i64> {
    g.iter()
        .map(|c| c.to_i64().expect("defining coefficient fits i64"))
        .collect()
}

/// Φ_{p^n}(x + 1) with integer coefficients, constant term first.
pub fn shifted_cyclotomic(p: u64, n: u32) -> Vec<BigInt> {
    // Φ_{p^n}(y) = Σ_{i<p} y^{i p^{n-1}}; substitute y = x + 1.
    let step = p.pow(n - 1) as usize;
    let deg = step * (p as usize - 1);
    let mut out = vec![BigInt::zero(); deg + 1];
    for i in 0..p as usize {
        let k = i * step;
        let mut binom = BigInt::one();
        for j in 0..=k {
            out[j] += &binom;
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    out
}

impl<R: Residue> TowerField<R> {
    fn build(p: u64, digits: u32, unr: Option<Vec<BigInt>>, eis: Option<Vec<BigInt>>) -> Result<Self> {
        if digits == 0 {
            return Err(Error::OutOfRange("precision must be positive".into()));
        }
        if !R::supports(p, digits) {
            return Err(Error::OutOfRange(format!(
                "p^{digits} exceeds the residue type for p = {p}"
            )));
        }
        let modulus = R::from_bigint_exact(&BigInt::from(p).pow(digits));
        let red = |x: &BigInt| R::from_bigint(x, &modulus);
        let pows: Vec<R> = (0..=digits)
            .map(|k| red(&BigInt::from(p).pow(k)))
            .collect();
        let (f, neg_h, residue) = match &unr {
            Some(h) => {
                let f = h.len() - 1;
                let neg_h = h[..f].iter().map(|c| red(&-c)).collect();
                let hbar = h
                    .iter()
                    .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                    .collect();
                (f, neg_h, ResidueField::new(p, hbar))
            }
            None => (1, Vec::new(), ResidueField::prime_field(p)),
        };
        let (e, neg_a) = match &eis {
            Some(g) => {
                let e = g.len() - 1;
                let neg_a = g[..e]
                    .iter()
                    .map(|c| {
                        let mut w = vec![R::zero(); f];
                        w[0] = red(&-c);
                        w
                    })
                    .collect();
                (e, neg_a)
            }
            None => {
                let mut w = vec![R::zero(); f];
                w[0] = red(&BigInt::from(p));
                (1, vec![w])
            }
        };
        Ok(TowerField {
            inner: Arc::new(Inner {
                p,
                e,
                f,
                digits,
                modulus,
                pows,
                neg_h,
                neg_a,
                residue,
                unr_poly: unr,
                eis_poly: eis,
            }),
        })
    }

    /// Q_p at the given precision.
    pub fn qp(p: u64, digits: u32) -> Result<Self> {
        Self::build(p, digits, None, None)
    }

    /// Q_p(μ_{p^n}) via the Eisenstein polynomial Φ_{p^n}(x + 1); Q_p when n = 0.
    pub fn cyclotomic(p: u64, n: u32, digits: u32) -> Result<Self> {
        if n == 0 {
            return Self::qp(p, digits);
        }
        Self::build(p, digits, None, Some(shifted_cyclotomic(p, n)))
    }

    /// Adjoins a root of the monic integer polynomial `g`.
    pub fn extend(&self, g: &[BigInt], kind: ExtensionKind) -> Result<Self> {
        let p = self.inner.p;
        if !is_monic(g) || g.len() < 2 {
            return Err(Error::InvalidPolynomial("defining polynomial must be monic of degree >= 1".into()));
        }
        if self.inner.eis_poly.is_some() {
            return Err(Error::UnsupportedTower(
                "extensions above an Eisenstein layer are not supported".into(),
            ));
        }
        let d = g.len() - 1;
        match kind {
            ExtensionKind::Unramified => {
                if self.inner.unr_poly.is_some() {
                    return Err(Error::UnsupportedTower(
                        "only one unramified layer is supported".into(),
                    ));
                }
                let hbar: Vec<u64> = g
                    .iter()
                    .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                    .collect();
                if !fp_poly_is_irreducible(&hbar, p) {
                    return Err(Error::InvalidPolynomial("not irreducible modulo p".into()));
                }
                if d == 1 {
                    return Ok(self.clone());
                }
                Self::build(p, self.inner.digits, Some(g.to_vec()), None)
            }
            ExtensionKind::Eisenstein => {
                let pb = BigInt::from(p);
                let ok = g[..d].iter().all(|c| c.is_multiple_of(&pb))
                    && !g[0].is_zero()
                    && vp_bigint(&g[0], p) == 1;
                if !ok {
                    return Err(Error::InvalidPolynomial("not Eisenstein".into()));
                }
                if d == 1 {
                    return Err(Error::UnsupportedTower(
                        "degree-one Eisenstein layers are redundant".into(),
                    ));
                }
                Self::build(p, self.inner.digits, self.inner.unr_poly.clone(), Some(g.to_vec()))
            }
        }
    }

    /// The same field at another precision or residue type.
    pub fn with_precision<S: Residue>(&self, digits: u32) -> Result<TowerField<S>> {
        TowerField::<S>::build(
            self.inner.p,
            digits,
            self.inner.unr_poly.clone(),
            self.inner.eis_poly.clone(),
        )
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }
    pub fn e(&self) -> usize {
        self.inner.e
    }
    pub fn f(&self) -> usize {
        self.inner.f
    }
    pub fn degree(&self) -> usize {
        self.inner.e * self.inner.f
    }
    pub fn digits(&self) -> u32 {
        self.inner.digits
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.inner.residue
    }

    /// Absolute precision in π-units of exactly known elements.
    pub fn precision_units(&self) -> i64 {
        self.inner.digits as i64 * self.inner.e as i64
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        let mut layers = Vec::new();
        if let Some(h) = &self.inner.unr_poly {
            layers.push(LayerDescriptor {
                kind: ExtensionKind::Unramified,
                coeffs: descriptor_coeffs(h),
            });
        }
        if let Some(g) = &self.inner.eis_poly {
            layers.push(LayerDescriptor {
                kind: ExtensionKind::Eisenstein,
                coeffs: descriptor_coeffs(g),
            });
        }
        TowerDescriptor {
            p: self.inner.p,
            layers,
        }
    }

    fn n(&self) -> usize {
        self.inner.e * self.inner.f
    }

    // ----- constructors of elements -----

    pub fn zero(&self) -> FieldElement<R> {
        self.zero_abs(EXACT)
    }

    /// Zero known modulo p^abs.
    pub fn zero_abs(&self, abs: i64) -> FieldElement<R> {
        FieldElement {
            field: self.clone(),
            shift: abs,
            prec: 0,
            c: vec![R::zero(); self.n()],
        }
    }

    pub fn one(&self) -> FieldElement<R> {
        self.from_int(1)
    }

    pub fn from_int(&self, x: i64) -> FieldElement<R> {
        self.from_bigint(&BigInt::from(x))
    }

    pub fn from_bigint(&self, x: &BigInt) -> FieldElement<R> {
        if x.is_zero() {
            return self.zero();
        }
        let (v, u) = split_p(x, self.inner.p);
        let mut c = vec![R::zero(); self.n()];
        c[0] = R::from_bigint(&u, &self.inner.modulus);
        self.normalize(v as i64, self.inner.digits, c)
    }

    pub fn from_rational(&self, x: &BigRational) -> FieldElement<R> {
        let num = self.from_bigint(x.numer());
        if x.denom().is_one() {
            return num;
        }
        let den = self.from_bigint(x.denom());
        num.mul_ref(&den.inv().expect("nonzero denominator"))
    }

    pub fn from_padic(&self, x: &PadicNumber) -> FieldElement<R> {
        assert_eq!(x.prime(), self.inner.p);
        match (x.valuation(), x.unit()) {
            (Some(v), Some(u)) => {
                let mut c = vec![R::zero(); self.n()];
                c[0] = R::from_bigint(u, &self.inner.modulus);
                self.normalize(v, x.precision().min(self.inner.digits), c)
            }
            _ => self.zero_abs(x.absolute_precision()),
        }
    }

    /// The uniformizer (p itself when e = 1).
    pub fn uniformizer(&self) -> FieldElement<R> {
        if self.inner.e == 1 {
            return self.from_int(self.inner.p as i64);
        }
        self.basis(1, 0)
    }

    /// The unramified generator θ (1 when f = 1).
    pub fn theta(&self) -> FieldElement<R> {
        if self.inner.f == 1 {
            return self.one();
        }
        self.basis(0, 1)
    }

    /// θ^i π^j for j < e, i < f.
    pub fn basis(&self, j: usize, i: usize) -> FieldElement<R> {
        let mut c = vec![R::zero(); self.n()];
        c[j * self.inner.f + i] = R::one();
        self.normalize(0, self.inner.digits, c)
    }

    /// lift(r) · π^k for a residue-field element r.
    pub fn digit(&self, r: &[u64], k: i64) -> FieldElement<R> {
        let e = self.inner.e as i64;
        let (q, j) = (k.div_euclid(e), k.rem_euclid(e) as usize);
        let f = self.inner.f;
        let mut c = vec![R::zero(); self.n()];
        for (i, &ri) in r.iter().enumerate() {
            c[j * f + i] = R::from_u64(ri);
        }
        self.normalize(q, self.inner.digits, c)
    }

    pub fn lift(&self, r: &[u64]) -> FieldElement<R> {
        self.digit(r, 0)
    }

    /// An element from raw coordinates (θ-major within each π-power block).
    pub fn from_coords(&self, coords: &[BigInt]) -> FieldElement<R> {
        assert_eq!(coords.len(), self.n());
        let c = coords
            .iter()
            .map(|x| R::from_bigint(x, &self.inner.modulus))
            .collect();
        self.normalize(0, self.inner.digits, c)
    }

    fn normalize(&self, shift: i64, prec: u32, mut c: Vec<R>) -> FieldElement<R> {
        let inner = &*self.inner;
        let prec = prec.min(inner.digits);
        if prec == 0 {
            return self.zero_abs(shift);
        }
        if prec < inner.digits {
            let m = &inner.pows[prec as usize];
            for x in c.iter_mut() {
                *x = x.reduce(m);
            }
        }
        let mut t = prec;
        for x in &c {
            if t == 0 {
                break;
            }
            t = t.min(x.val_capped(inner.p, t));
        }
        if t == prec {
            return self.zero_abs(shift.saturating_add(prec as i64).min(EXACT));
        }
        if t > 0 {
            for x in c.iter_mut() {
                for _ in 0..t {
                    *x = x.div_u64(inner.p);
                }
            }
        }
        FieldElement {
            field: self.clone(),
            shift: shift + t as i64,
            prec: prec - t,
            c,
        }
    }

    // ----- raw coordinate arithmetic modulo p^digits -----

    fn w_mul_into(&self, acc: &mut [R::Acc], a: &[R], b: &[R]) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, y) in b.iter().enumerate() {
                R::acc_mul_add(&mut acc[i + k], x, y);
            }
        }
    }

    /// Reduces a (2f-1)-long accumulator modulo h to f coordinates.
    fn w_reduce(&self, acc: &[R::Acc]) -> Vec<R> {
        let inner = &*self.inner;
        let m = &inner.modulus;
        let f = inner.f;
        let mut v: Vec<R> = acc.iter().map(|a| R::acc_reduce(a, m)).collect();
        for t in (f..v.len()).rev() {
            let top = std::mem::replace(&mut v[t], R::zero());
            if top.is_zero() {
                continue;
            }
            for i in 0..f {
                let add = top.mul_mod(&inner.neg_h[i], m);
                v[t - f + i] = v[t - f + i].add_mod(&add, m);
            }
        }
        v.truncate(f);
        v
    }

    fn raw_mul(&self, a: &[R], b: &[R]) -> Vec<R> {
        let inner = &*self.inner;
        let (e, f) = (inner.e, inner.f);
        let wlen = 2 * f - 1;
        let blocks = 2 * e - 1;
        let mut acc: Vec<R::Acc> = (0..blocks * wlen).map(|_| R::acc_zero()).collect();
        for j1 in 0..e {
            let ablk = &a[j1 * f..(j1 + 1) * f];
            if ablk.iter().all(|x| x.is_zero()) {
                continue;
            }
            for j2 in 0..e {
                let bblk = &b[j2 * f..(j2 + 1) * f];
                let off = (j1 + j2) * wlen;
                self.w_mul_into(&mut acc[off..off + wlen], ablk, bblk);
            }
        }
        self.eisenstein_reduce(acc)
    }

    /// Folds blocks of π-degree ≥ e back using π^e = -Σ a_j π^j.
    fn eisenstein_reduce(&self, mut acc: Vec<R::Acc>) -> Vec<R> {
        let inner = &*self.inner;
        let (e, f) = (inner.e, inner.f);
        let wlen = 2 * f - 1;
        let blocks = acc.len() / wlen;
        let mut out = vec![R::zero(); e * f];
        for j in (0..blocks).rev() {
            let w = self.w_reduce(&acc[j * wlen..(j + 1) * wlen]);
            if j >= e {
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for (i, na) in inner.neg_a.iter().enumerate() {
                    let off = (j - e + i) * wlen;
                    self.w_mul_into(&mut acc[off..off + wlen], &w, na);
                }
            } else {
                out[j * f..(j + 1) * f].clone_from_slice(&w);
            }
        }
        out
    }
}

/// An element of a tower field at fixed precision.
#[derive(Clone)]
pub struct FieldElement<R: Residue = BigInt> {
    field: TowerField<R>,
    shift: i64,
    /// Number of known p-digits of the coordinates; 0 marks zero.
    prec: u32,
    c: Vec<R>,
}

impl<R: Residue> fmt::Debug for FieldElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec == 0 {
            if self.shift >= EXACT {
                return write!(f, "0");
            }
            return write!(f, "O(p^{})", self.shift);
        }
        write!(
            f,
            "p^{} * {:?} + O(p^{})",
            self.shift,
            self.c.iter().map(|x| x.to_bigint().to_string()).collect::<Vec<_>>(),
            self.shift + self.prec as i64
        )
    }
}

impl<R: Residue> FieldElement<R> {
    pub fn field(&self) -> &TowerField<R> {
        &self.field
    }

    pub fn is_provably_nonzero(&self) -> bool {
        self.prec > 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == 0 && self.shift >= EXACT
    }

    /// Absolute precision in π-units: the element is known modulo π^this.
    pub fn abs_precision(&self) -> i64 {
        let e = self.field.inner.e as i64;
        let a = self.shift.saturating_add(self.prec as i64);
        if a >= EXACT {
            EXACT
        } else {
            a * e
        }
    }

    /// Normalized valuation, v(π) = 1.
    pub fn valuation(&self) -> Result<i64> {
        if self.prec == 0 {
            return Err(Error::IndeterminateValuation);
        }
        let f = self.field.inner.f;
        let p = self.field.inner.p;
        let j = (0..self.field.inner.e)
            .find(|&j| self.c[j * f..(j + 1) * f].iter().any(|x| x.rem_u64(p) != 0))
            .expect("normalized element has a unit coordinate");
        Ok(self.shift * self.field.inner.e as i64 + j as i64)
    }

    /// Valuation, or the absolute precision when zero at this precision.
    pub fn valuation_or_bound(&self) -> (i64, bool) {
        match self.valuation() {
            Ok(v) => (v, true),
            Err(_) => (self.abs_precision(), false),
        }
    }

    pub fn residue(&self) -> Result<Vec<u64>> {
        let rf = &self.field.inner.residue;
        if self.prec == 0 {
            if self.shift >= 1 {
                return Ok(rf.zero());
            }
            return Err(Error::IndeterminateValuation);
        }
        if self.shift < 0 {
            return Err(Error::NegativeValuation);
        }
        if self.shift > 0 {
            return Ok(rf.zero());
        }
        let p = self.field.inner.p;
        Ok(self.c[..self.field.inner.f].iter().map(|x| x.rem_u64(p)).collect())
    }

    pub fn coords(&self) -> (i64, u32, Vec<BigInt>) {
        (self.shift, self.prec, self.c.iter().map(|x| x.to_bigint()).collect())
    }

    /// Multiplication by p^k.
    pub fn mul_p_pow(&self, k: i64) -> FieldElement<R> {
        let mut out = self.clone();
        if out.shift < EXACT {
            out.shift = (out.shift + k).min(EXACT);
        }
        out
    }

    /// Drops precision to at most `digits` relative digits.
    pub fn truncate(&self, digits: u32) -> FieldElement<R> {
        if digits >= self.prec {
            return self.clone();
        }
        self.field.normalize(self.shift, digits, self.c.clone())
    }

    /// Treats the known digits as exact, padding with zeros to full precision.
    pub fn exactify(&self) -> FieldElement<R> {
        if self.prec == 0 {
            return self.field.zero();
        }
        self.field.normalize(self.shift, self.field.inner.digits, self.c.clone())
    }

    /// Keeps only what is known modulo π^units (rounded down to whole p-digits).
    pub fn truncate_abs(&self, units: i64) -> FieldElement<R> {
        let top = units.div_euclid(self.field.inner.e as i64);
        if self.prec == 0 {
            return self.field.zero_abs(top.min(self.shift));
        }
        let rel = top - self.shift;
        if rel <= 0 {
            return self.field.zero_abs(top);
        }
        self.truncate(rel.min(u32::MAX as i64) as u32)
    }

    /// Re-expresses the element in a field of the same shape.
    pub fn to_field<S: Residue>(&self, target: &TowerField<S>) -> FieldElement<S> {
        assert_eq!(target.n(), self.c.len());
        if self.prec == 0 {
            return target.zero_abs(self.shift);
        }
        let c = self
            .c
            .iter()
            .map(|x| S::from_bigint(&x.to_bigint(), &target.inner.modulus))
            .collect();
        target.normalize(self.shift, self.prec, c)
    }

    /// Equality at shared precision.
    pub fn approx_eq(&self, o: &Self) -> bool {
        self.sub_ref(o).is_zero_elem()
    }

    fn add_scaled(&self, o: &Self, negate: bool) -> FieldElement<R> {
        let field = &self.field;
        let inner = &*field.inner;
        let s = self.shift.min(o.shift);
        let abs = self
            .shift
            .saturating_add(self.prec as i64)
            .min(o.shift.saturating_add(o.prec as i64))
            .min(EXACT);
        if s >= EXACT {
            return field.zero();
        }
        let rel = abs - s;
        if rel <= 0 {
            return field.zero_abs(abs);
        }
        let rel_u = rel.min(inner.digits as i64) as u32;
        let m = &inner.modulus;
        let mut c = vec![R::zero(); self.c.len()];
        for (x, sign) in [(self, false), (o, negate)] {
            if x.prec == 0 {
                continue;
            }
            let k = x.shift - s;
            if k >= rel_u as i64 {
                continue;
            }
            let scale = &inner.pows[k as usize];
            for (dst, src) in c.iter_mut().zip(&x.c) {
                let t = if k == 0 { src.clone() } else { src.mul_mod(scale, m) };
                *dst = if sign { dst.sub_mod(&t, m) } else { dst.add_mod(&t, m) };
            }
        }
        field.normalize(s, rel_u, c)
    }

    /// Inverse of an element of valuation 0.
    fn unit_inverse(&self) -> FieldElement<R> {
        let field = &self.field;
        let rf = &field.inner.residue;
        let p = field.inner.p;
        let r: Vec<u64> = self.c[..field.inner.f].iter().map(|x| x.rem_u64(p)).collect();
        let rinv = rf.inv(&r).expect("unit residue");
        let mut z = field.lift(&rinv).truncate(self.prec);
        let two = field.from_int(2);
        // The error 1 - t z starts in the maximal ideal and squares each step.
        let target = self.prec as u64 * field.inner.e as u64;
        let mut known = 1u64;
        while known < target {
            let tz = self.mul_ref(&z);
            z = z.mul_ref(&two.sub_ref(&tz));
            known = known.saturating_mul(2);
        }
        z
    }

    pub fn inv(&self) -> Result<FieldElement<R>> {
        if self.prec == 0 {
            return Err(Error::DivisionByZero);
        }
        let field = &self.field;
        let e = field.inner.e as i64;
        let k = self.valuation()? - self.shift * e;
        let unit = FieldElement {
            field: field.clone(),
            shift: 0,
            prec: self.prec,
            c: self.c.clone(),
        };
        if k == 0 {
            return Ok(unit.unit_inverse().mul_p_pow(-self.shift));
        }
        let lift = field.basis((e - k) as usize, 0);
        let w = unit.mul_ref(&lift);
        debug_assert_eq!(w.shift, 1);
        let t = FieldElement {
            shift: 0,
            ..w.clone()
        };
        Ok(lift.mul_ref(&t.unit_inverse()).mul_p_pow(-self.shift - 1))
    }

    pub fn pow(&self, mut n: u64) -> FieldElement<R> {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            n >>= 1;
        }
        acc
    }
}

impl<R: Residue> Ring for FieldElement<R> {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
    fn is_zero_elem(&self) -> bool {
        self.prec == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add_scaled(o, false)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_scaled(o, true)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let field = &self.field;
        match (self.prec == 0, o.prec == 0) {
            (true, true) => field.zero_abs(self.shift.saturating_add(o.shift).min(EXACT)),
            (true, false) => field.zero_abs(self.shift.saturating_add(o.shift).min(EXACT)),
            (false, true) => field.zero_abs(o.shift.saturating_add(self.shift).min(EXACT)),
            (false, false) => {
                let c = field.raw_mul(&self.c, &o.c);
                field.normalize(self.shift + o.shift, self.prec.min(o.prec), c)
            }
        }
    }
    fn neg_ref(&self) -> Self {
        if self.prec == 0 {
            return self.clone();
        }
        let m = &self.field.inner.modulus;
        let c = self.c.iter().map(|x| x.neg_mod(m)).collect();
        self.field.normalize(self.shift, self.prec, c)
    }
}

impl<R: Residue> FieldOps for FieldElement<R> {
    fn inv_ref(&self) -> Result<Self> {
        self.inv()
    }
}

/// Q_p(μ_{p^n}) at full precision.
pub fn cyclotomic_field(p: u64, n: u32, digits: u32) -> Result<TowerField<BigInt>> {
    TowerField::cyclotomic(p, n, digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_defining_polynomials() {
        assert_eq!(shifted_cyclotomic(2, 2), ints(&[2, 2, 1]));
        assert_eq!(shifted_cyclotomic(3, 1), ints(&[3, 3, 1]));
        assert_eq!(shifted_cyclotomic(2, 3), ints(&[2, 4, 6, 4, 1]));
        let k = TowerField::<BigInt>::cyclotomic(2, 4, 20).unwrap();
        assert_eq!(k.degree(), 8);
        assert_eq!(k.e(), 8);
    }

    #[test]
    fn valuations_in_q2_mu4() {
        let k = TowerField::<BigInt>::cyclotomic(2, 2, 30).unwrap();
        let pi = k.uniformizer();
        assert_eq!(pi.valuation().unwrap(), 1);
        assert_eq!(k.from_int(2).valuation().unwrap(), 2);
        let zeta = pi.add_ref(&k.one());
        assert_eq!(zeta.valuation().unwrap(), 0);
        assert_eq!(zeta.pow(4).sub_ref(&k.one()).is_zero_elem(), true);
        assert!(!zeta.pow(2).sub_ref(&k.one()).is_zero_elem());
    }

    #[test]
    fn unramified_quadratic() {
        let q2 = TowerField::<BigInt>::qp(2, 20).unwrap();
        let f = q2.extend(&ints(&[1, 1, 1]), ExtensionKind::Unramified).unwrap();
        assert_eq!((f.e(), f.f()), (1, 2));
        assert_eq!(f.residue_field().order(), 4);
        let t = f.theta();
        assert!(t.pow(3).sub_ref(&f.one()).is_zero_elem());
        assert!(q2.extend(&ints(&[1, 0, 1]), ExtensionKind::Unramified).is_err());
        assert!(q2.extend(&ints(&[2, 1, 1]), ExtensionKind::Eisenstein).is_err());
        assert!(q2.extend(&ints(&[4, 0, 1]), ExtensionKind::Eisenstein).is_err());
        let l3 = q2.extend(&ints(&[2, 0, 1]), ExtensionKind::Eisenstein).unwrap();
        assert_eq!(l3.e(), 2);
    }

    #[test]
    fn two_layer_tower() {
        let q2 = TowerField::<BigInt>::qp(2, 24).unwrap();
        let f = q2.extend(&ints(&[1, 1, 1]), ExtensionKind::Unramified).unwrap();
        let fmu8 = f.extend(&shifted_cyclotomic(2, 3), ExtensionKind::Eisenstein).unwrap();
        assert_eq!((fmu8.e(), fmu8.f(), fmu8.degree()), (4, 2, 8));
        let zeta = fmu8.uniformizer().add_ref(&fmu8.one());
        assert!(zeta.pow(8).sub_ref(&fmu8.one()).is_zero_elem());
        let theta = fmu8.theta();
        assert!(theta.pow(3).sub_ref(&fmu8.one()).is_zero_elem());
        assert!(fmu8.extend(&ints(&[2, 0, 1]), ExtensionKind::Eisenstein).is_err());
    }

    #[test]
    fn residue_and_lift() {
        let q2 = TowerField::<BigInt>::qp(2, 20).unwrap();
        let f = q2.extend(&ints(&[1, 1, 1]), ExtensionKind::Unramified).unwrap();
        for r in f.residue_field().elements() {
            assert_eq!(f.lift(&r).residue().unwrap(), r);
        }
        let k = TowerField::<BigInt>::cyclotomic(3, 2, 20).unwrap();
        assert_eq!(k.uniformizer().residue().unwrap(), vec![0]);
        assert_eq!(k.uniformizer().inv().unwrap().residue(), Err(Error::NegativeValuation));
    }

    #[test]
    fn cyclotomic_root_identities() {
        for (p, n) in [(2u64, 3u32), (3, 2), (5, 1), (7, 1)] {
            let k = TowerField::<BigInt>::cyclotomic(p, n, 30).unwrap();
            let zeta = k.uniformizer().add_ref(&k.one());
            let order = p.pow(n);
            assert!(zeta.pow(order).sub_ref(&k.one()).is_zero_elem());
            assert!(!zeta.pow(order / p).sub_ref(&k.one()).is_zero_elem());
            assert_eq!(k.from_int(p as i64).valuation().unwrap(), k.e() as i64);
        }
    }

    #[test]
    fn fast_tier_matches_bigint() {
        let kb = TowerField::<BigInt>::cyclotomic(5, 2, 16).unwrap();
        let ku: TowerField<u64> = kb.with_precision(16).unwrap();
        let a = kb.uniformizer().pow(3).add_ref(&kb.from_int(7));
        let b = kb.uniformizer().add_ref(&kb.from_int(-3)).pow(5);
        let ab = a.mul_ref(&b).sub_ref(&a.inv().unwrap());
        let au = a.to_field(&ku);
        let bu = b.to_field(&ku);
        let abu = au.mul_ref(&bu).sub_ref(&au.inv().unwrap());
        assert_eq!(abu.to_field(&kb).coords(), ab.coords());
    }

    fn element(k: &TowerField<BigInt>, coords: &[i64], shift: i64) -> FieldElement<BigInt> {
        k.from_coords(&ints(coords)).mul_p_pow(shift)
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative_and_ultrametric(
            a in proptest::collection::vec(-400i64..400, 4),
            b in proptest::collection::vec(-400i64..400, 4),
            sa in -2i64..3, sb in -2i64..3,
        ) {
            let k = TowerField::<BigInt>::cyclotomic(5, 1, 30).unwrap();
            let x = element(&k, &a, sa);
            let y = element(&k, &b, sb);
            prop_assume!(x.is_provably_nonzero() && y.is_provably_nonzero());
            let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
            prop_assert_eq!(x.mul_ref(&y).valuation().unwrap(), vx + vy);
            let s = x.add_ref(&y);
            if let Ok(vs) = s.valuation() {
                prop_assert!(vs >= vx.min(vy));
                if vx != vy { prop_assert_eq!(vs, vx.min(vy)); }
            }
            let one = x.mul_ref(&x.inv().unwrap()).sub_ref(&k.one());
            prop_assert!(one.is_zero_elem());
        }

        #[test]
        fn inverse_in_tower(a in proptest::collection::vec(-50i64..50, 8)) {
            let q2 = TowerField::<BigInt>::qp(2, 24).unwrap();
            let f = q2.extend(&ints(&[1, 1, 1]), ExtensionKind::Unramified).unwrap();
            let k = f.extend(&shifted_cyclotomic(2, 3), ExtensionKind::Eisenstein).unwrap();
            let x = element(&k, &a, 0);
            prop_assume!(x.is_provably_nonzero());
            let d = x.mul_ref(&x.inv().unwrap()).sub_ref(&k.one());
            prop_assert!(d.is_zero_elem());
        }
    }
}
