//! Dense univariate polynomials over any [`Ring`], plus exact operations on
//! integer and rational polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{FieldOps, Ring};
use crate::error::{Error, Result};
use crate::residue::Residue;

/// Coefficients are stored constant term first; the leading coefficient is
/// never zero (at precision).
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type ZPoly = Polynomial<BigInt>;
pub type QPoly = Polynomial<BigRational>;

impl<T: Ring> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map(|c| c.is_zero_elem()).unwrap_or(false) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }

    fn zip_with(&self, o: &Self, op: impl Fn(&T, &T) -> T, neg: impl Fn(&T) -> T) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => op(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => neg(b),
                (None, None) => unreachable!(),
            });
        }
        Polynomial::new(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.add_ref(b), |b| b.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.sub_ref(b), |b| b.neg_ref())
    }

    pub fn neg(&self) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.neg_ref()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&c.int_like(i as i64)))
                .collect(),
        )
    }

    /// x^deg · f(1/x).
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Polynomial::new(c)
    }

    /// f(x + a).
    pub fn shift(&self, a: &T) -> Self {
        let mut out = Self::zero();
        if self.is_zero() {
            return out;
        }
        let lin = Polynomial::new(vec![a.clone(), a.one_like()]);
        for c in self.coeffs.iter().rev() {
            out = out.mul(&lin).add(&Polynomial::new(vec![c.clone()]));
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: FieldOps> Polynomial<T> {
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?.inv_ref()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let z = dl.zero_like();
        let mut q = vec![z; r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].mul_ref(&dl);
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[top - dd + i] = r[top - dd + i].sub_ref(&c.mul_ref(dc));
            }
            q[top - dd] = c;
            r.pop();
            while r.last().map(|x| x.is_zero_elem()).unwrap_or(false) {
                r.pop();
            }
        }
        Ok((Polynomial::new(q), Polynomial::new(r)))
    }

    pub fn monic(&self) -> Result<Self> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv_ref()?)),
        }
    }

    /// Monic gcd; only meaningful for exact coefficients.
    pub fn gcd(&self, o: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.monic()?;
        }
        a.monic()
    }
}

pub fn zpoly(c: &[i64]) -> ZPoly {
    Polynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn to_q(f: &ZPoly) -> QPoly {
    f.map(|c| BigRational::from_integer(c.clone()))
}

pub fn content(f: &ZPoly) -> BigInt {
    f.coeffs().iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive_part(f: &ZPoly) -> ZPoly {
    if f.is_zero() {
        return f.clone();
    }
    let mut g = content(f);
    if f.lead().unwrap().is_negative() {
        g = -g;
    }
    f.map(|c| c / &g)
}

/// Clears denominators of a rational polynomial and returns the primitive part.
pub fn integral_primitive(f: &QPoly) -> ZPoly {
    let den = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    primitive_part(&f.map(|c| (c * BigRational::from_integer(den.clone())).to_integer()))
}

/// f / gcd(f, f'), computed over Q and normalized to a primitive integer polynomial.
pub fn squarefree_part(f: &QPoly) -> Result<ZPoly> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    }
    let g = f.gcd(&f.derivative())?;
    let (q, r) = f.divrem(&g)?;
    debug_assert!(r.is_zero());
    Ok(integral_primitive(&q))
}

fn sylvester(f: &ZPoly, g: &ZPoly) -> Vec<Vec<BigInt>> {
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, count, deg) in [(f, n, m), (g, m, n)] {
        for r in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (i, c) in poly.coeffs().iter().enumerate() {
                row[r + deg - i] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// v_p of a determinant by elimination over Z/p^k; `None` when precision runs out.
fn det_valuation<R: Residue>(mat: &[Vec<BigInt>], p: u64, k: u32) -> Option<u32> {
    let n = mat.len();
    let modulus = R::from_bigint_exact(&BigInt::from(p).pow(k));
    let mut a: Vec<Vec<R>> = mat
        .iter()
        .map(|row| row.iter().map(|x| R::from_bigint(x, &modulus)).collect())
        .collect();
    let mut prec = k;
    let mut total = 0u32;
    let mut active_rows: Vec<usize> = (0..n).collect();
    let mut active_cols: Vec<usize> = (0..n).collect();
    for _ in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (ri, &r) in active_rows.iter().enumerate() {
            for (ci, &c) in active_cols.iter().enumerate() {
                let v = a[r][c].val_capped(p, prec);
                if v < prec && best.map(|b| v < b.0).unwrap_or(true) {
                    best = Some((v, ri, ci));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, ri, ci) = best?;
        let pr = active_rows.swap_remove(ri);
        let pc = active_cols.swap_remove(ci);
        total += v;
        let mut unit = a[pr][pc].clone();
        for _ in 0..v {
            unit = unit.div_u64(p);
        }
        let unit_inv = inverse_mod::<R>(&unit, p, &modulus);
        for &r in &active_rows {
            if a[r][pc].is_zero() {
                continue;
            }
            let mut q = a[r][pc].clone();
            for _ in 0..v {
                q = q.div_u64(p);
            }
            let factor = q.mul_mod(&unit_inv, &modulus);
            for &c in &active_cols {
                let t = factor.mul_mod(&a[pr][c], &modulus);
                a[r][c] = a[r][c].sub_mod(&t, &modulus);
            }
            a[r][pc] = R::zero();
        }
        prec -= v;
        if prec == 0 {
            return None;
        }
    }
    Some(total)
}

fn inverse_mod<R: Residue>(u: &R, _p: u64, m: &R) -> R {
    let ub = u.to_bigint();
    let mb = m.to_bigint();
    let e = ub.extended_gcd(&mb);
    R::from_bigint(&e.x, m)
}

/// v_p(Res(f, g)) for nonzero integer polynomials of positive degree.
pub fn resultant_valuation(f: &ZPoly, g: &ZPoly, p: u64) -> Result<u32> {
    match (f.degree(), g.degree()) {
        (Some(0), _) | (_, Some(0)) | (None, _) | (_, None) => {
            return Err(Error::InvalidPolynomial("resultant needs positive degrees".into()))
        }
        _ => {}
    }
    let mat = sylvester(f, g);
    let fast = (40.0 / (p as f64).log2()).floor() as u32 - 1;
    if let Some(v) = det_valuation::<u64>(&mat, p, fast) {
        return Ok(v);
    }
    let mut k = 128;
    while k <= 4096 {
        if let Some(v) = det_valuation::<BigInt>(&mat, p, k) {
            return Ok(v);
        }
        k *= 4;
    }
    let qf = to_q(f);
    if qf.gcd(&to_q(g))?.degree() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    Err(Error::Precision("resultant valuation exceeds 4096 digits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        let f = zpoly(&[-1, 1]).mul(&zpoly(&[-1, 1])).mul(&zpoly(&[2, 1]));
        assert_eq!(squarefree_part(&to_q(&f)).unwrap(), zpoly(&[-2, 1, 1]));
        let g = zpoly(&[1, 0, 1]);
        assert_eq!(squarefree_part(&to_q(&g)).unwrap(), g);
        assert_eq!(squarefree_part(&to_q(&zpoly(&[0, 0, 0, 1]))).unwrap(), zpoly(&[0, 1]));
        assert_eq!(squarefree_part(&to_q(&zpoly(&[0, 0, 0, -6]))).unwrap(), zpoly(&[0, 1]));
    }

    #[test]
    fn resultant_valuations() {
        let g = zpoly(&[1, 0, 1]);
        let dg = g.derivative();
        assert_eq!(resultant_valuation(&g, &dg, 5).unwrap(), 0);
        assert_eq!(resultant_valuation(&g, &dg, 2).unwrap(), 2);
        // Res(x^2 - 18, 2x) = -72 = -2^3 3^2
        let h = zpoly(&[-18, 0, 1]);
        assert_eq!(resultant_valuation(&h, &h.derivative(), 3).unwrap(), 2);
        assert_eq!(resultant_valuation(&h, &h.derivative(), 2).unwrap(), 3);
        let sq = zpoly(&[1, 2, 1]);
        assert_eq!(resultant_valuation(&sq, &sq.derivative(), 3), Err(Error::NotSquarefree));
    }

    #[test]
    fn resultant_matches_exact_small_cases() {
        // Res(x^3 + 2x + 7, 3x^2 + 2) = 4*8 + 27*49 = 1355 = 5 * 271
        let f = zpoly(&[7, 2, 0, 1]);
        assert_eq!(resultant_valuation(&f, &f.derivative(), 5).unwrap(), 1);
        assert_eq!(resultant_valuation(&f, &f.derivative(), 271).unwrap(), 1);
        assert_eq!(resultant_valuation(&f, &f.derivative(), 3).unwrap(), 0);
    }

    #[test]
    fn shift_and_reverse() {
        let f = zpoly(&[1, 0, 1]);
        assert_eq!(f.shift(&BigInt::from(1)), zpoly(&[2, 2, 1]));
        assert_eq!(zpoly(&[3, 2, 1]).reverse(), zpoly(&[1, 2, 3]));
        let q = to_q(&zpoly(&[-1, 0, 0, 1]));
        let (quo, rem) = q.divrem(&to_q(&zpoly(&[-1, 1]))).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo, to_q(&zpoly(&[1, 1, 1])));
    }
}
