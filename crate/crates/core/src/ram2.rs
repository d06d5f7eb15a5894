//! Quadratic and quartic extensions of Q_2: upper ramification breaks in
//! Fontaine's normalization, roots of unity, and the compositum identities
//! used in the p = 2 arguments.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{shifted_cyclotomic, ExtensionKind};
use crate::finite::fp_poly_is_irreducible;
use crate::poly::{integral_primitive, to_q, zpoly, ZPoly};
use crate::residue::vp_bigint;
use crate::roots::integer_roots_in_field;
use crate::Field;

/// 2-adic digits carried by every field built here.
pub const RAM2_DIGITS: u32 = 40;

/// The n for which μ_n membership is tested.
pub const MU_ORDERS: [u64; 5] = [2, 3, 4, 6, 8];

/// A row of the extension tables: name, defining polynomial (constant term
/// first) and the printed f, e, break and μ_n column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionDescriptor {
    pub name: &'static str,
    pub poly: &'static [i64],
    pub f: usize,
    pub e: usize,
    pub u: u32,
    pub mu: u64,
}

const fn row(name: &'static str, poly: &'static [i64], f: usize, e: usize, u: u32, mu: u64) -> ExtensionDescriptor {
    ExtensionDescriptor { name, poly, f, e, u, mu }
}

/// The seven quadratic extensions of Q_2.
pub const QUADRATICS: [ExtensionDescriptor; 7] = [
    row("F", &[1, 1, 1], 2, 1, 0, 6),
    row("L1", &[2, 2, 1], 1, 2, 2, 4),
    row("L2", &[6, 2, 1], 1, 2, 2, 2),
    row("L3", &[2, 0, 1], 1, 2, 3, 2),
    row("L4", &[10, 0, 1], 1, 2, 3, 2),
    row("L5", &[2, 4, 1], 1, 2, 3, 2),
    row("L6", &[10, 4, 1], 1, 2, 3, 2),
];

/// The quartic Galois extensions with break 3. Their breaks are data.
pub const QUARTICS: [ExtensionDescriptor; 4] = [
    row("M1", &[2, 4, 2, 0, 1], 1, 4, 3, 8),
    row("M2", &[10, 4, 2, 0, 1], 1, 4, 3, 4),
    row("M3", &[6, 4, 2, 4, 1], 1, 4, 3, 2),
    row("M4", &[14, 4, 2, 4, 1], 1, 4, 3, 2),
];

fn ints(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

fn is_eisenstein(g: &[BigInt]) -> bool {
    let d = g.len() - 1;
    g[d].is_one()
        && g[..d].iter().all(|c| c.is_even())
        && !g[0].is_zero()
        && vp_bigint(&g[0], 2) == 1
}

fn is_unramified(g: &[BigInt]) -> bool {
    let hbar: Vec<u64> = g
        .iter()
        .map(|c| u64::from(c.is_odd()))
        .collect();
    g.last().is_some_and(|l| l.is_one()) && fp_poly_is_irreducible(&hbar, 2)
}

/// Q_2 adjoined a root of `g`, which must be irreducible mod 2 or Eisenstein.
pub fn realize(g: &[i64]) -> Result<Field> {
    let g = ints(g);
    let kind = if is_unramified(&g) {
        ExtensionKind::Unramified
    } else if is_eisenstein(&g) {
        ExtensionKind::Eisenstein
    } else {
        return Err(Error::InvalidPolynomial(
            "expected an unramified or Eisenstein defining polynomial".into(),
        ));
    };
    Field::qp(2, RAM2_DIGITS)?.extend(&g, kind)
}

/// The unramified quadratic F.
pub fn field_f() -> Result<Field> {
    realize(QUADRATICS[0].poly)
}

/// F(μ_{2^n}) for n = 2, 3.
pub fn field_f_mu(n: u32) -> Result<Field> {
    field_f()?.extend(&shifted_cyclotomic(2, n), ExtensionKind::Eisenstein)
}

/// Upper ramification break of the quadratic extension cut out by the monic
/// quadratic `g`: 0 when unramified, v_2(disc g) otherwise.
pub fn quadratic_break(g: &[i64]) -> Result<u32> {
    if g.len() != 3 || g[2] != 1 {
        return Err(Error::InvalidPolynomial("expected a monic quadratic".into()));
    }
    let big = ints(g);
    if is_unramified(&big) {
        return Ok(0);
    }
    if !integer_roots_in_field(&zpoly(g), &Field::qp(2, RAM2_DIGITS)?)?.is_empty() {
        return Err(Error::InvalidPolynomial("reducible over Q_2".into()));
    }
    let disc = &big[1] * &big[1] - BigInt::from(4) * &big[0];
    let d = vp_bigint(&disc.abs(), 2);
    if !is_eisenstein(&big) || !(2..=3).contains(&d) {
        return Err(Error::InvalidPolynomial(
            "generator does not give the maximal order".into(),
        ));
    }
    Ok(d)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> ZPoly {
    let mut c = vec![0i64; n as usize + 1];
    c[0] = -1;
    c[n as usize] = 1;
    let mut q = to_q(&zpoly(&c));
    for d in (1..n).filter(|d| n % d == 0) {
        q = q.divrem(&to_q(&cyclotomic_polynomial(d))).unwrap().0;
    }
    integral_primitive(&q)
}

pub fn has_root(g: &ZPoly, field: &Field) -> Result<bool> {
    Ok(!integer_roots_in_field(g, field)?.is_empty())
}

pub fn mu_membership(field: &Field, n: u64) -> Result<bool> {
    if !MU_ORDERS.contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in {MU_ORDERS:?}")));
    }
    has_root(&cyclotomic_polynomial(n), field)
}

/// Largest tested n with μ_n ⊂ field.
pub fn mu_column(field: &Field) -> Result<u64> {
    let mut best = 1;
    for n in MU_ORDERS {
        if mu_membership(field, n)? {
            best = best.max(n);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub name: &'static str,
    pub poly: &'static [i64],
    pub printed: ExtensionDescriptor,
    pub f: usize,
    pub e: usize,
    /// Recomputed for quadratics; copied from the table for quartics.
    pub u: u32,
    pub mu: Vec<(u64, bool)>,
    pub mu_column: u64,
    pub ok: bool,
}

fn check_row(d: &ExtensionDescriptor, recompute_break: bool) -> Result<RowCheck> {
    let field = realize(d.poly)?;
    let u = if recompute_break { quadratic_break(d.poly)? } else { d.u };
    let mu = MU_ORDERS
        .iter()
        .map(|&n| Ok((n, mu_membership(&field, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let mu_column = mu.iter().filter(|m| m.1).map(|m| m.0).max().unwrap_or(1);
    Ok(RowCheck {
        name: d.name,
        poly: d.poly,
        printed: *d,
        f: field.f(),
        e: field.e(),
        u,
        ok: field.f() == d.f && field.e() == d.e && u == d.u && mu_column == d.mu,
        mu,
        mu_column,
    })
}

pub fn table1() -> Result<Vec<RowCheck>> {
    QUADRATICS.iter().map(|d| check_row(d, true)).collect()
}

pub fn table2() -> Result<Vec<RowCheck>> {
    QUARTICS.iter().map(|d| check_row(d, false)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Identity {
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositumReport {
    pub part1: Identity,
    pub part2: Vec<Identity>,
    pub part3: Vec<Identity>,
}

impl CompositumReport {
    pub fn all_hold(&self) -> bool {
        self.part1.holds
            && self.part2.iter().all(|i| i.holds)
            && self.part3.iter().all(|i| i.holds)
    }
}

/// Containment plus degree count for each compositum identity.
///
/// (1) L1, L2 ⊂ F(μ4) with L1 ≠ L2 gives L1L2 of degree 4 = [F(μ4):Q_2].
/// (2) L_i ⊂ F(μ8) but L_i ⊄ F(μ4) gives [L_iF(μ4):Q_2] = 8.
/// (3) M_i ⊂ F(μ8) and FM_i has degree 8 since M_i is totally ramified.
pub fn prop_a1_checks() -> Result<CompositumReport> {
    let f_mu4 = field_f_mu(2)?;
    let f_mu8 = field_f_mu(3)?;
    let poly = |d: &ExtensionDescriptor| zpoly(d.poly);
    let [_, l1, l2, ..] = &QUADRATICS;
    let l1_field = realize(l1.poly)?;
    let part1 = Identity {
        statement: "L1 L2 = F(mu4)".into(),
        holds: has_root(&poly(l1), &f_mu4)?
            && has_root(&poly(l2), &f_mu4)?
            && !has_root(&poly(l2), &l1_field)?
            && f_mu4.degree() == 4,
    };
    let mut part2 = Vec::new();
    for d in &QUADRATICS[3..] {
        part2.push(Identity {
            statement: format!("{} F(mu4) = F(mu8)", d.name),
            holds: has_root(&poly(d), &f_mu8)?
                && !has_root(&poly(d), &f_mu4)?
                && f_mu8.degree() == 2 * f_mu4.degree(),
        });
    }
    let mut part3 = Vec::new();
    for d in &QUARTICS {
        part3.push(Identity {
            statement: format!("F {} = F(mu8)", d.name),
            holds: has_root(&poly(d), &f_mu8)?
                && realize(d.poly)?.e() == 4
                && f_mu8.degree() == 8,
        });
    }
    Ok(CompositumReport {
        part1,
        part2,
        part3,
    })
}
