//! Roots of polynomials in a tower field: depth-first search over π-adic
//! digits, then Newton lifting once the convergence criterion holds.
//!
//! The search runs with word-sized coordinates when the field allows it and
//! falls back to full precision when a branch is undecidable there.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::algebra::{FieldOps, Ring};
use crate::error::{Error, Result};
use crate::field::{FieldElement, TowerField};
use crate::poly::{primitive_part, resultant_valuation, Polynomial, ZPoly};
use crate::residue::{vp_bigint, Residue};
use crate::{Element, Field};

/// Digits of slack allowed in the back-substitution check.
pub const MARGIN_DIGITS: i64 = 4;

pub type KPoly<R = BigInt> = Polynomial<FieldElement<R>>;

/// How deep the digit search may go, in π-adic levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    /// Branches still open past this level provably contain no root.
    Certified(i64),
    /// Branches still open past this level are reported as undecidable.
    Limit(i64),
}

impl Depth {
    fn level(self) -> i64 {
        match self {
            Depth::Certified(d) | Depth::Limit(d) => d,
        }
    }
}

fn ambiguous(what: &str) -> Error {
    Error::Precision(format!("root search undecidable: {what}"))
}

/// 2·e·v_p(Res(g, g')) + 1, taking the reversed polynomial into account when
/// the leading coefficient is divisible by p.
pub fn separability_depth<R: Residue>(g: &ZPoly, k: &TowerField<R>) -> Result<i64> {
    let g = primitive_part(g);
    let p = k.p();
    let e = k.e() as i64;
    let disc_val = |f: &ZPoly| -> Result<u32> {
        match f.degree() {
            None | Some(0) => Ok(0),
            Some(1) => Ok(vp_bigint(f.lead().unwrap(), p)),
            Some(_) => resultant_valuation(f, &f.derivative(), p),
        }
    };
    let mut v = disc_val(&g)?;
    if g.lead().map(|l| l.is_multiple_of(&BigInt::from(p))).unwrap_or(false) {
        let mut rev = g.reverse();
        // Roots at w = 0 of the reversal do not correspond to roots of g.
        while rev.coeff(0).map(|c| c == &BigInt::from(0)).unwrap_or(false) {
            rev = Polynomial::new(rev.coeffs()[1..].to_vec());
        }
        v = v.max(disc_val(&rev)?);
    }
    Ok(2 * e * v as i64 + 1)
}

/// Lowest coefficient valuation (or precision bound for coefficients that
/// vanish at precision).
fn min_coeff_valuation<R: Residue>(g: &KPoly<R>) -> i64 {
    g.coeffs()
        .iter()
        .map(|c| c.valuation_or_bound().0)
        .min()
        .expect("nonzero polynomial")
}

fn search<R: Residue>(
    g: &KPoly<R>,
    dg: &KPoly<R>,
    c: i64,
    start: i64,
    depth: Depth,
) -> Result<Vec<FieldElement<R>>> {
    let field = g.lead().expect("nonzero polynomial").field().clone();
    let digits = field.residue_field().elements();
    let mut stack: Vec<(FieldElement<R>, i64)> = Vec::new();
    if start == 0 {
        for r in &digits {
            stack.push((field.lift(r), 1));
        }
    } else {
        stack.push((field.zero(), start));
    }
    let mut found = Vec::new();
    while let Some((a, k)) = stack.pop() {
        let gv = g.eval(&a);
        let (vg, exact) = gv.valuation_or_bound();
        if vg < c + k {
            if exact {
                continue;
            }
            return Err(ambiguous("value below precision"));
        }
        // Newton polygon test: the disc a + π^k O contains a root of g over
        // the algebraic closure only if some Taylor term can cancel g(a).
        if !disc_may_contain_root(g, &a, vg, c, k) {
            if exact {
                continue;
            }
            return Err(ambiguous("value below precision"));
        }
        let mut newton_ok = false;
        if let Ok(dv) = dg.eval(&a).valuation() {
            newton_ok = vg > 2 * dv - c;
            if newton_ok && k > dv - c {
                found.push(a);
                continue;
            }
        }
        if !exact && !newton_ok {
            return Err(ambiguous("Newton criterion below precision"));
        }
        if k >= depth.level() {
            match depth {
                Depth::Certified(_) => continue,
                Depth::Limit(_) => return Err(ambiguous("depth limit reached")),
            }
        }
        for r in &digits {
            if r.iter().all(|&x| x == 0) {
                stack.push((a.clone(), k + 1));
            } else {
                stack.push((a.add_ref(&field.digit(r, k)), k + 1));
            }
        }
    }
    Ok(found)
}

/// Whether v(g(a)) ≥ min_{i≥1} v(t_i) + i·k for the Taylor coefficients t_i
/// of g at a. Coefficients are produced one synthetic division at a time and
/// the scan stops once the remaining terms are bounded below by c + i·k.
fn disc_may_contain_root<R: Residue>(
    g: &KPoly<R>,
    a: &FieldElement<R>,
    vg: i64,
    c: i64,
    k: i64,
) -> bool {
    let mut b = g.coeffs().to_vec();
    let n = b.len();
    for j in (0..n - 1).rev() {
        let t = a.mul_ref(&b[j + 1]);
        b[j] = b[j].add_ref(&t);
    }
    for i in 1..n {
        if vg < c + i as i64 * k {
            return false;
        }
        for j in (i..n - 1).rev() {
            let t = a.mul_ref(&b[j + 1]);
            b[j] = b[j].add_ref(&t);
        }
        if b[i].valuation_or_bound().0 + i as i64 * k <= vg {
            return true;
        }
    }
    false
}

fn lift_root(g: &KPoly, dg: &KPoly, start: Element, coeff_prec: i64) -> Result<Element> {
    let field = start.field().clone();
    let e = field.e() as i64;
    let mut a = start.exactify();
    let mut converged = false;
    for _ in 0..256 {
        let gv = g.eval(&a);
        if gv.is_zero_elem() {
            converged = true;
            break;
        }
        let step = gv.div_ref(&dg.eval(&a))?;
        if step.is_zero_elem() {
            converged = true;
            break;
        }
        a = a.sub_ref(&step).exactify();
    }
    if !converged {
        return Err(ambiguous("Newton iteration did not converge"));
    }
    let residual = g.eval(&a).valuation_or_bound().0;
    if residual < coeff_prec - MARGIN_DIGITS * e {
        return Err(ambiguous("residual above tolerance"));
    }
    let dv = dg.eval(&a).valuation()?;
    Ok(a.truncate_abs(residual - dv))
}

fn to_fast(g: &KPoly, fk: &TowerField<u64>) -> KPoly<u64> {
    g.map(|c| c.to_field(fk))
}

fn approximate_roots(
    g: &KPoly,
    k: &Field,
    c: i64,
    start: i64,
    depth: Depth,
) -> Result<Vec<Element>> {
    let p = k.p();
    let fast_digits = (0..=k.digits())
        .rev()
        .find(|&d| u64::supports(p, d))
        .unwrap_or(0);
    if fast_digits >= 3 {
        let fk: TowerField<u64> = k.with_precision(fast_digits)?;
        let gf = to_fast(g, &fk);
        let dgf = gf.derivative();
        match search(&gf, &dgf, c, start, depth) {
            Ok(found) => return Ok(found.iter().map(|a| a.to_field(k)).collect()),
            Err(e) if e.is_precision() => {}
            Err(e) => return Err(e),
        }
    }
    search(g, &g.derivative(), c, start, depth)
}

/// All roots of `g` in `k`.
pub fn roots_in_field(g: &KPoly, k: &Field, depth: Depth) -> Result<Vec<Element>> {
    let Some(lead) = g.lead() else {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    };
    let e = k.e() as i64;
    let c0 = min_coeff_valuation(g);
    let scale = c0.div_euclid(e);
    let g = g.map(|x| x.mul_p_pow(-scale));
    let c = c0 - scale * e;
    let lead_val = lead.valuation()? - scale * e;
    let coeff_prec = g
        .coeffs()
        .iter()
        .map(|x| x.abs_precision())
        .min()
        .unwrap();
    let dg = g.derivative();
    let mut roots: Vec<Element> = Vec::new();
    let push = |roots: &mut Vec<Element>, r: Element| {
        if !roots.iter().any(|s| s.approx_eq(&r)) {
            roots.push(r);
        }
    };
    for a in approximate_roots(&g, k, c, 0, depth)? {
        push(&mut roots, lift_root(&g, &dg, a, coeff_prec)?);
    }
    if lead_val > c {
        let rev = g.reverse();
        let drev = rev.derivative();
        let rev_prec = rev.coeffs().iter().map(|x| x.abs_precision()).min().unwrap();
        for w in approximate_roots(&rev, k, c, 1, depth)? {
            let w = lift_root(&rev, &drev, w, rev_prec)?;
            if w.is_zero_elem() {
                continue;
            }
            push(&mut roots, w.inv()?);
        }
    }
    if roots.len() > g.degree().unwrap_or(0) {
        return Err(ambiguous("more roots than the degree"));
    }
    Ok(roots)
}

/// Roots in `k` of a squarefree integer polynomial, with certified depth.
pub fn integer_roots_in_field(g: &ZPoly, k: &Field) -> Result<Vec<Element>> {
    let g = primitive_part(g);
    let depth = separability_depth(&g, k)?;
    let gk = g.map(|c| k.from_bigint(c));
    roots_in_field(&gk, k, Depth::Certified(depth))
}

/// Roots of T^2 + bT + c in the field of `b`.
pub fn quadratic_roots_in_y(b: &Element, c: &Element) -> Result<Vec<Element>> {
    let k = b.field().clone();
    let e = k.e() as i64;
    let ceil_div = |a: i64, d: i64| -(-a).div_euclid(d);
    let mut t = 0i64;
    if b.is_provably_nonzero() {
        t = t.max(ceil_div(-b.valuation()?, e));
    }
    if c.is_provably_nonzero() {
        t = t.max(ceil_div(-c.valuation()?, 2 * e));
    }
    let bb = b.mul_p_pow(t);
    let cc = c.mul_p_pow(2 * t);
    let disc = bb.mul_ref(&bb).sub_ref(&cc.mul_ref(&k.from_int(4)));
    if disc.is_zero_elem() {
        let half = k.from_int(2).inv()?;
        return Ok(vec![b.neg_ref().mul_ref(&half)]);
    }
    let vd = disc.valuation()?;
    let g = Polynomial::new(vec![cc, bb, k.one()]);
    let roots = roots_in_field(&g, &k, Depth::Certified(2 * vd + 1))?;
    Ok(roots.into_iter().map(|u| u.mul_p_pow(-t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{shifted_cyclotomic, ExtensionKind};
    use crate::poly::zpoly;

    fn qp(p: u64) -> Field {
        Field::qp(p, 40).unwrap()
    }

    #[test]
    fn depth_examples() {
        let g = zpoly(&[1, 0, 1]);
        assert_eq!(separability_depth(&g, &qp(5)).unwrap(), 1);
        let k = Field::cyclotomic(2, 2, 40).unwrap();
        assert_eq!(separability_depth(&g, &k).unwrap(), 9);
        assert_eq!(separability_depth(&zpoly(&[-6, 1]), &qp(3)).unwrap(), 1);
    }

    #[test]
    fn sqrt_minus_one() {
        let g = zpoly(&[1, 0, 1]);
        let r5 = integer_roots_in_field(&g, &qp(5)).unwrap();
        assert_eq!(r5.len(), 2);
        let residues: Vec<u64> = r5.iter().map(|r| r.residue().unwrap()[0]).collect();
        assert!(residues.contains(&2) && residues.contains(&3));
        for r in &r5 {
            assert!(r.mul_ref(r).add_ref(&r.one_like()).is_zero_elem());
        }
        assert!(integer_roots_in_field(&g, &qp(3)).unwrap().is_empty());
        let k = Field::cyclotomic(2, 2, 40).unwrap();
        let rk = integer_roots_in_field(&g, &k).unwrap();
        assert_eq!(rk.len(), 2);
        let zeta = k.uniformizer().add_ref(&k.one());
        assert!(rk.iter().any(|r| r.approx_eq(&zeta)));
        assert!(rk.iter().any(|r| r.approx_eq(&zeta.neg_ref())));
    }

    #[test]
    fn non_integral_roots() {
        // 4x^2 - 1 has roots ±1/2 in Q_2; 9x^2 - 1 has ±1/3 in Q_3.
        let r = integer_roots_in_field(&zpoly(&[-1, 0, 4]), &qp(2)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.valuation().unwrap() == -1));
        let r = integer_roots_in_field(&zpoly(&[-1, 0, 0, 27]), &qp(3)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].valuation().unwrap(), -1);
    }

    #[test]
    fn quadratic_examples() {
        let q3 = qp(3);
        let r = quadratic_roots_in_y(&q3.zero(), &q3.from_int(-1)).unwrap();
        assert_eq!(r.len(), 2);
        let q2 = qp(2);
        assert!(quadratic_roots_in_y(&q2.one(), &q2.one()).unwrap().is_empty());
        assert!(quadratic_roots_in_y(&q2.zero(), &q2.from_int(2)).unwrap().is_empty());
        let f = q2
            .extend(&zpoly(&[1, 1, 1]).into_coeffs(), ExtensionKind::Unramified)
            .unwrap();
        assert_eq!(quadratic_roots_in_y(&f.one(), &f.one()).unwrap().len(), 2);
        let r = quadratic_roots_in_y(&q3.from_int(2), &q3.one()).unwrap();
        assert_eq!(r.len(), 1);
        // T^2 - 17 over Q_2: 17 ≡ 1 mod 8 is a square.
        assert_eq!(quadratic_roots_in_y(&q2.zero(), &q2.from_int(-17)).unwrap().len(), 2);
        // T^2 - 1/4 needs the rescaling step.
        let quarter = q2.from_int(4).inv().unwrap().neg_ref();
        assert_eq!(quadratic_roots_in_y(&q2.zero(), &quarter).unwrap().len(), 2);
    }

    #[test]
    fn roots_in_tower() {
        let q2 = Field::qp(2, 30).unwrap();
        let f = q2
            .extend(&zpoly(&[1, 1, 1]).into_coeffs(), ExtensionKind::Unramified)
            .unwrap();
        let fmu8 = f
            .extend(&shifted_cyclotomic(2, 3), ExtensionKind::Eisenstein)
            .unwrap();
        // x^8 - 1 splits completely in F(μ8); x^3 - 1 too.
        let g = zpoly(&[1, 0, 0, 0, 1]);
        assert_eq!(integer_roots_in_field(&g, &fmu8).unwrap().len(), 4);
        assert_eq!(integer_roots_in_field(&zpoly(&[1, 1, 1]), &fmu8).unwrap().len(), 2);
        assert_eq!(integer_roots_in_field(&zpoly(&[2, 0, 1]), &fmu8).unwrap().len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonresidue(p: u64) -> i64 {
            (2..p as i64)
                .find(|&u| (1..p as i64).all(|x| (x * x - u).rem_euclid(p as i64) != 0))
                .unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn planted_roots_are_found(
                pi in 0usize..3,
                planted in proptest::collection::btree_set(-30i64..30, 1..4),
                denom_pow in 0u32..3,
                num in 1i64..5,
            ) {
                let p = [3u64, 5, 7][pi];
                let k = Field::qp(p, 30).unwrap();
                let u = nonresidue(p);
                // (x^2 - u) has no roots; (p^j x - num) contributes num / p^j.
                let mut g = zpoly(&[-u, 0, 1]);
                for r in &planted {
                    g = g.mul(&zpoly(&[-r, 1]));
                }
                let pj = (p as i64).pow(denom_pow);
                let extra = num * (p as i64) + 1;
                prop_assume!(denom_pow > 0 || !planted.contains(&extra));
                g = g.mul(&zpoly(&[-extra, pj]));
                let mut expected: Vec<Element> = planted.iter().map(|&r| k.from_int(r)).collect();
                let q = k.from_int(extra).mul_ref(&k.from_int(pj).inv().unwrap());
                if !expected.iter().any(|x| x.approx_eq(&q)) {
                    expected.push(q);
                }
                let found = integer_roots_in_field(&g, &k).unwrap();
                prop_assert_eq!(found.len(), expected.len());
                for x in &expected {
                    prop_assert!(found.iter().any(|r| r.approx_eq(x)));
                }
            }
        }
    }
}
