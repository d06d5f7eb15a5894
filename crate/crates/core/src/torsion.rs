//! Torsion of E over Q_p(μ_{p^m}) by counting points killed by q^i, and the
//! certified limit over the whole cyclotomic tower.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{FieldOps, Ring};
use crate::elliptic::{
    points_with_x, CurveModel, DivisionPolynomials, FpGroupInfo, ReductionKind, TorsionGroup,
};
use crate::error::{Error, Result};
use crate::padic::DEFAULT_PRECISION;
use crate::poly::Polynomial;
use crate::roots::{integer_roots_in_field, quadratic_roots_in_y, roots_in_field, Depth, KPoly};
use crate::{Element, Field};

/// Highest cyclotomic level the level-∞ escalation may visit.
pub const LEVEL_CAP: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(u32),
    Infinity,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(m) => write!(f, "{m}"),
            Level::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inf" | "infty" | "oo" => Ok(Level::Infinity),
            "qp" => Ok(Level::Finite(0)),
            "mu4" => Ok(Level::Finite(2)),
            _ => s
                .parse::<u32>()
                .map(Level::Finite)
                .map_err(|_| format!("invalid level `{s}`")),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(m) => s.serialize_u32(*m),
            Level::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(m) => Ok(Level::Finite(m)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub label: Option<String>,
    pub p: u64,
    pub level: Level,
    pub group: TorsionGroup,
    pub kind: ReductionKind,
    pub certificate: Option<String>,
}

impl TorsionReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Base-p digits carried by field elements.
    pub precision: u32,
    /// Scan every prime up to the Hasse bound instead of the divisors of #Ē(F_p).
    pub slow_oracle: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision: DEFAULT_PRECISION,
            slow_oracle: false,
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_divisors(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| n % q == 0 && is_prime(q)).collect()
}

/// Runs `f` at the requested precision, then once more at twice that.
fn with_escalation<T>(precision: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    match f(precision) {
        Err(e) if e.is_precision() => match f(precision * 2) {
            Err(e) if e.is_precision() => Err(Error::Precision(format!(
                "still undecidable at {} digits: {e}",
                precision * 2
            ))),
            other => other,
        },
        other => other,
    }
}

/// #E(K)[n]: one for the identity plus the points over every K-rational root
/// of the n-division polynomial.
pub fn torsion_count(e: &CurveModel, k: &Field, n: u64) -> Result<u64> {
    if !e.has_good_reduction(k.p()) {
        return Err(Error::BadReduction(k.p()));
    }
    if n == 1 {
        return Ok(1);
    }
    let xp = DivisionPolynomials::new(e).x_poly(n);
    let mut t = 1;
    for x in integer_roots_in_field(&xp, k)? {
        t += points_with_x(e, k, &x)?.len() as u64;
    }
    Ok(t)
}

/// Z/q^b × Z/q^a from s_i = #E(K)[q^i], i = 1, 2, ….
pub fn group_from_counts(q: u64, counts: &[u64]) -> Result<TorsionGroup> {
    let (mut a, mut b) = (0u32, 0u32);
    let mut prev = 1u64;
    for &s in counts {
        let r = if s == prev {
            0
        } else if s == prev * q {
            1
        } else if s == prev * q * q {
            2
        } else {
            return Err(Error::Precision(format!(
                "inconsistent torsion counts {counts:?} for q = {q}"
            )));
        };
        if r >= 1 {
            a += 1;
        }
        if r == 2 {
            b += 1;
        }
        prev = s;
    }
    Ok(TorsionGroup::from_invariants(q.pow(b), q.pow(a)))
}

struct QPartSearch<'a> {
    e: &'a CurveModel,
    k: &'a Field,
    q: u64,
    phi: KPoly,
    psi_sq: KPoly,
    b2: Element,
    b4: Element,
}

impl QPartSearch<'_> {
    /// Number of K-points Q with x(qQ) = t, and their distinct x-coordinates.
    fn preimages(&self, t: &Element, two_torsion: bool) -> Result<(u64, Vec<Element>)> {
        let k = self.k;
        let xs = if two_torsion {
            // φ_2 − tψ_2² is the square of X² − 2tX + β when ψ_2²(t) = 0.
            let two = k.from_int(2);
            let beta = self
                .b4
                .add_ref(&self.b2.mul_ref(t))
                .add_ref(&t.mul_ref(t).mul_ref(&k.from_int(4)))
                .neg_ref()
                .div_ref(&two)?;
            quadratic_roots_in_y(&t.mul_ref(&two).neg_ref(), &beta)?
        } else {
            let h = self.phi.sub(&self.psi_sq.scale(t));
            let limit = k.precision_units() / 2;
            roots_in_field(&h, k, Depth::Limit(limit))?
        };
        let mut count = 0;
        let mut found = Vec::new();
        for x in xs {
            let n = points_with_x(self.e, k, &x)?.len() as u64;
            if n > 0 {
                count += n;
                found.push(x);
            }
        }
        Ok((count, found))
    }
}

/// The sequence s_1, s_2, … of #E(K)[q^i], stopping when it stabilizes or
/// reaches `cap`.
pub fn q_power_counts(e: &CurveModel, k: &Field, q: u64, cap: Option<u64>) -> Result<Vec<u64>> {
    let mut dp = DivisionPolynomials::new(e);
    let to_k = |f: &Polynomial<BigInt>| f.map(|c| k.from_bigint(c));
    let mut s1 = 1u64;
    let mut xs: Vec<Element> = Vec::new();
    for x in integer_roots_in_field(&dp.x_poly(q), k)? {
        let n = points_with_x(e, k, &x)?.len() as u64;
        if n > 0 {
            s1 += n;
            xs.push(x);
        }
    }
    let mut counts = vec![s1];
    if s1 == 1 || cap == Some(s1) {
        return Ok(counts);
    }
    let search = QPartSearch {
        e,
        k,
        q,
        phi: to_k(&dp.phi(q)),
        psi_sq: to_k(&dp.psi_sq(q)),
        b2: k.from_bigint(&e.b2()),
        b4: k.from_bigint(&e.b4()),
    };
    let first_layer = xs.len();
    let mut fiber: Vec<u64> = Vec::new();
    let mut frontier = 0usize;
    for _ in 0..64 {
        let end = xs.len();
        for idx in frontier..end {
            let two_torsion = search.q == 2 && idx < first_layer;
            let (n, pre) = search.preimages(&xs[idx].clone(), two_torsion)?;
            fiber.push(n);
            for x in pre {
                if !xs.iter().any(|y| y.approx_eq(&x)) {
                    xs.push(x);
                }
            }
        }
        frontier = end;
        let next = s1 + fiber.iter().sum::<u64>();
        if next == *counts.last().unwrap() {
            return Ok(counts);
        }
        counts.push(next);
        if cap == Some(next) {
            return Ok(counts);
        }
        if let Some(c) = cap {
            if next > c {
                return Err(Error::Precision(format!(
                    "q = {q}: count {next} exceeds the bound {c}"
                )));
            }
        }
    }
    Err(Error::Precision(format!("q = {q}: counts did not stabilize")))
}

/// Primes q whose q-part is computed at a given prime p.
fn candidate_primes(p: u64, info: &FpGroupInfo, slow: bool) -> Vec<u64> {
    let mut qs: Vec<u64> = if slow {
        // All primes below the Hasse cap (√p + 1)².
        let cap = p + 1 + 2 * (p as f64).sqrt().floor() as u64 + 1;
        (2..=cap).filter(|&q| is_prime(q)).collect()
    } else {
        prime_divisors(info.order)
    };
    if !qs.contains(&p) {
        qs.push(p);
    }
    qs.sort_unstable();
    qs
}

fn q_part_at_level(
    e: &CurveModel,
    p: u64,
    level: u32,
    q: u64,
    cap: Option<u64>,
    precision: u32,
) -> Result<TorsionGroup> {
    with_escalation(precision, |n| {
        let k = Field::cyclotomic(p, level, n)?;
        let counts = q_power_counts(e, &k, q, cap)?;
        group_from_counts(q, &counts)
    })
}

/// E(Q_p(μ_{p^m}))_tor.
pub fn torsion_structure(e: &CurveModel, p: u64, level: u32, opts: &Options) -> Result<TorsionReport> {
    let info = e.reduce(p)?.group_structure()?;
    let mut group = TorsionGroup::TRIVIAL;
    for q in candidate_primes(p, &info, opts.slow_oracle) {
        let cap = if q != p && !opts.slow_oracle {
            Some(info.group.q_part(q).order())
        } else {
            None
        };
        group = group.coprime_sum(&q_part_at_level(e, p, level, q, cap, opts.precision)?);
    }
    Ok(TorsionReport {
        label: None,
        p,
        level: Level::Finite(level),
        group,
        kind: info.kind,
        certificate: None,
    })
}

/// 1 for odd p and 2 for p = 2: a point of order p^n that is rational over the
/// cyclotomic tower is already rational at level n + δ.
pub fn fontaine_shift(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut j = 0;
    while n % p == 0 && n > 1 {
        n /= p;
        j += 1;
    }
    j
}

/// E(Q_p(μ_{p^∞}))_tor with a certificate that the p-part has stopped growing.
pub fn cyclotomic_torsion_infty(e: &CurveModel, p: u64, opts: &Options) -> Result<TorsionReport> {
    let info = e.reduce(p)?.group_structure()?;
    let delta = fontaine_shift(p);
    let mut level = 0u32;
    let mut part = q_part_at_level(e, p, 0, p, None, opts.precision)?;
    loop {
        let j = log_p(part.exponent(), p);
        let check = level.max(j + delta);
        if check > LEVEL_CAP {
            return Err(Error::EscalationCap(LEVEL_CAP));
        }
        let next = if check == level {
            part
        } else {
            q_part_at_level(e, p, check, p, None, opts.precision)?
        };
        if log_p(next.exponent(), p) == j {
            let prime_to_p = TorsionGroup::from_invariants(
                info.group.m / info.group.q_part(p).m,
                info.group.exponent() / info.group.q_part(p).exponent(),
            );
            return Ok(TorsionReport {
                label: None,
                p,
                level: Level::Infinity,
                group: next.coprime_sum(&prime_to_p),
                kind: info.kind,
                certificate: Some(format!(
                    "p-part exponent {p}^{j} unchanged at level {check} >= {j} + {delta}"
                )),
            });
        }
        level = check;
        part = next;
    }
}

/// Level at which the classification theorems say the tower stops growing.
pub fn theorem_descent_level(p: u64, kind: ReductionKind) -> u32 {
    match (kind, p) {
        (ReductionKind::Supersingular, _) => 0,
        (ReductionKind::Ordinary, 2) => 3,
        (ReductionKind::Ordinary, _) => 1,
    }
}

/// Memoizes reports by (model, p, level).
pub struct TorsionEngine {
    pub options: Options,
    cache: Mutex<HashMap<(CurveModel, u64, Level), TorsionReport>>,
}

impl TorsionEngine {
    pub fn new(options: Options) -> Self {
        TorsionEngine {
            options,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn report(&self, e: &CurveModel, p: u64, level: Level) -> Result<TorsionReport> {
        let key = (e.clone(), p, level);
        if let Some(r) = self.cache.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let r = match level {
            Level::Finite(m) => torsion_structure(e, p, m, &self.options)?,
            Level::Infinity => cyclotomic_torsion_infty(e, p, &self.options)?,
        };
        self.cache.lock().unwrap().insert(key, r.clone());
        Ok(r)
    }
}
