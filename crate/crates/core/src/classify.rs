//! The index sets I, I_ord, I_ss, the group lists of the classification
//! theorems, the F_p census, and the sharp order bounds.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elliptic::{fp_group_structure, ReducedCurve, ReductionKind, TorsionGroup};
use crate::error::{Error, Result};
use crate::torsion::{Level, TorsionReport};

/// Largest prime accepted by [`census_fp`].
pub const CENSUS_GUARD: u64 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Good,
    Ordinary,
    Supersingular,
}

impl From<ReductionKind> for Kind {
    fn from(k: ReductionKind) -> Self {
        match k {
            ReductionKind::Ordinary => Kind::Ordinary,
            ReductionKind::Supersingular => Kind::Supersingular,
        }
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "good" => Ok(Kind::Good),
            "ordinary" => Ok(Kind::Ordinary),
            "supersingular" => Ok(Kind::Supersingular),
            _ => Err(format!("unknown reduction kind `{s}`")),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Good => "good",
            Kind::Ordinary => "ordinary",
            Kind::Supersingular => "supersingular",
        })
    }
}

/// The fields a list is stated over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ListLevel {
    Qp,
    Mu4,
    Inf,
}

impl FromStr for ListLevel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qp" | "0" => Ok(ListLevel::Qp),
            "mu4" => Ok(ListLevel::Mu4),
            "inf" => Ok(ListLevel::Inf),
            _ => Err(format!("unknown level `{s}` (expected qp, mu4 or inf)")),
        }
    }
}

impl fmt::Display for ListLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ListLevel::Qp => "qp",
            ListLevel::Mu4 => "mu4",
            ListLevel::Inf => "inf",
        })
    }
}

pub type ClassPair = (u64, u64);

/// (√p − 1)² < n < (√p + 1)², in integers.
pub fn in_hasse_window(p: u64, n: u64) -> bool {
    let d = n as i128 - (p as i128 + 1);
    d * d < 4 * p as i128
}

/// Pairs (m, k) with m | p − 1 and k·m² inside the Hasse window.
pub fn set_i(p: u64) -> BTreeSet<ClassPair> {
    let top = p + 1 + 2 * ((p as f64).sqrt().ceil() as u64);
    let mut out = BTreeSet::new();
    for m in (1..p).filter(|m| (p - 1) % m == 0) {
        for k in 1..=top / (m * m) {
            if in_hasse_window(p, k * m * m) {
                out.insert((m, k));
            }
        }
    }
    out
}

pub fn set_i_ord(p: u64) -> BTreeSet<ClassPair> {
    set_i(p)
        .into_iter()
        .filter(|&(m, k)| (k * m * m) % p != 1 % p)
        .collect()
}

pub fn set_i_ss(p: u64) -> BTreeSet<ClassPair> {
    set_i(p)
        .into_iter()
        .filter(|&(m, k)| (k * m * m) % p == 1 % p)
        .collect()
}

/// I_ss as the printed case split for odd p.
pub fn printed_i_ss(p: u64) -> BTreeSet<ClassPair> {
    match p {
        3 => [(1, 1), (1, 4), (1, 7), (2, 1)].into_iter().collect(),
        _ if p % 4 == 1 => [(1, 1 + p)].into_iter().collect(),
        _ => [(1, 1 + p), (2, (1 + p) / 4)].into_iter().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupList {
    pub groups: BTreeSet<TorsionGroup>,
    /// Which reduction type and field the list is for.
    pub clause: String,
}

impl GroupList {
    fn new(groups: impl IntoIterator<Item = TorsionGroup>) -> Self {
        GroupList {
            groups: groups.into_iter().collect(),
            clause: String::new(),
        }
    }

    pub fn contains(&self, g: &TorsionGroup) -> bool {
        self.groups.contains(g)
    }

    pub fn max_order(&self) -> u64 {
        self.groups.iter().map(|g| g.order()).max().unwrap_or(1)
    }
}

fn pairs(set: BTreeSet<ClassPair>) -> impl Iterator<Item = TorsionGroup> {
    set.into_iter().map(|(m, k)| TorsionGroup::new(m, k))
}

fn g(m: u64, k: u64) -> TorsionGroup {
    TorsionGroup::new(m, k)
}

fn not_covered(p: u64, kind: Kind, level: ListLevel) -> Error {
    Error::NotCovered(format!("p = {p}, {kind} reduction, level {level}"))
}

/// The list of groups a theorem clause allows.
pub fn theorem_group_list(p: u64, kind: Kind, level: ListLevel) -> Result<GroupList> {
    let trivial = TorsionGroup::TRIVIAL;
    let ss_qp = || -> GroupList {
        if p == 2 {
            return GroupList::new([trivial, g(1, 3), g(1, 5)]);
        }
        let groups: Vec<TorsionGroup> = match p {
            3 => vec![trivial, g(1, 4), g(1, 7), g(2, 1)],
            _ if p % 4 == 1 => vec![g(1, 1 + p)],
            _ => vec![g(1, 1 + p), g(2, (1 + p) / 4)],
        };
        GroupList::new(groups)
    };
    let mut list = match (kind, level) {
        (Kind::Good, ListLevel::Qp) if p == 2 => GroupList::new(
            [1, 2, 3, 4, 5, 8]
                .map(TorsionGroup::cyclic)
                .into_iter()
                .chain([g(2, 1), g(2, 2)]),
        ),
        (Kind::Good, ListLevel::Qp) => GroupList::new(pairs(set_i(p)).chain([trivial])),
        (Kind::Ordinary, ListLevel::Qp) if p == 2 => {
            GroupList::new([g(1, 2), g(1, 4), g(1, 8), g(2, 1), g(2, 2)])
        }
        (Kind::Ordinary, ListLevel::Qp) => GroupList::new(pairs(set_i_ord(p)).chain([trivial])),
        (Kind::Supersingular, ListLevel::Qp | ListLevel::Inf) => ss_qp(),
        (Kind::Ordinary, ListLevel::Inf) if p == 2 => {
            GroupList::new([g(1, 4), g(1, 8), g(2, 1), g(2, 4), g(4, 1)])
        }
        (Kind::Ordinary, ListLevel::Inf) => {
            let extra = if p <= 5 {
                vec![g(p, 1), g(p, 2)]
            } else {
                vec![g(p, 1)]
            };
            GroupList::new(pairs(set_i_ord(p)).chain(extra))
        }
        (Kind::Ordinary, ListLevel::Mu4) if p == 2 => {
            GroupList::new([g(1, 4), g(2, 1), g(2, 2), g(2, 4), g(4, 1)])
        }
        _ => return Err(not_covered(p, kind, level)),
    };
    let field = match level {
        ListLevel::Qp => "Q_p",
        ListLevel::Mu4 => "Q_p(mu_4)",
        ListLevel::Inf => "Q_p(mu_p^inf)",
    };
    list.clause = format!("{kind} reduction over {field}");
    Ok(list)
}

/// The list a torsion report must belong to. Supersingular torsion does not
/// grow in the tower, so every level uses the Q_p list; ordinary reports at
/// levels other than 0, ∞ and (p = 2) level 2 have no list.
pub fn list_for_report(r: &TorsionReport) -> Result<GroupList> {
    let kind = Kind::from(r.kind);
    let level = match (r.kind, r.level) {
        (ReductionKind::Supersingular, _) | (_, Level::Finite(0)) => ListLevel::Qp,
        (_, Level::Infinity) => ListLevel::Inf,
        (_, Level::Finite(2)) if r.p == 2 => ListLevel::Mu4,
        (_, Level::Finite(n)) => {
            return Err(Error::NotCovered(format!(
                "ordinary reduction at level {n}"
            )))
        }
    };
    theorem_group_list(r.p, kind, level)
}

/// The introduction's sharp bounds on the torsion order.
pub fn max_torsion_bound(p: u64, kind: Kind, level: ListLevel) -> Result<u64> {
    match (kind, level) {
        (Kind::Ordinary, ListLevel::Qp) => Ok((p + 1..)
            .take_while(|&n| in_hasse_window(p, n))
            .last()
            .unwrap_or(p + 1)),
        (Kind::Ordinary, ListLevel::Inf) => Ok(match p {
            2 => 16,
            3 | 5 => 2 * p * p,
            _ => p * p,
        }),
        (Kind::Supersingular, ListLevel::Qp | ListLevel::Inf) => Ok(match p {
            2 => 5,
            3 => 7,
            _ => 1 + p,
        }),
        _ => Err(not_covered(p, kind, level)),
    }
}

/// Every (p, kind, level) combination that [`max_torsion_bound`] covers.
pub fn covered_bound_combinations() -> [(Kind, ListLevel); 4] {
    [
        (Kind::Ordinary, ListLevel::Qp),
        (Kind::Ordinary, ListLevel::Inf),
        (Kind::Supersingular, ListLevel::Qp),
        (Kind::Supersingular, ListLevel::Inf),
    ]
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub all: BTreeSet<TorsionGroup>,
    pub ordinary: BTreeSet<TorsionGroup>,
    pub supersingular: BTreeSet<TorsionGroup>,
    pub curves: u64,
}

/// Group structures of all nonsingular long Weierstrass models over F_p.
pub fn census_fp(p: u64) -> Result<Census> {
    if p > CENSUS_GUARD {
        return Err(Error::OutOfRange(format!(
            "census limited to p <= {CENSUS_GUARD}"
        )));
    }
    let mut out = Census::default();
    let total = p.pow(5);
    for idx in 0..total {
        let mut n = idx;
        let mut a = [0u64; 5];
        for c in a.iter_mut() {
            *c = n % p;
            n /= p;
        }
        let Some(curve) = ReducedCurve::from_coeffs(p, a) else {
            continue;
        };
        let info = fp_group_structure(&curve)?;
        out.curves += 1;
        out.all.insert(info.group);
        match info.kind {
            ReductionKind::Ordinary => out.ordinary.insert(info.group),
            ReductionKind::Supersingular => out.supersingular.insert(info.group),
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(u64, u64)]) -> BTreeSet<ClassPair> {
        v.iter().copied().collect()
    }

    #[test]
    fn index_sets() {
        assert_eq!(set_i_ss(3), set(&[(1, 1), (1, 4), (1, 7), (2, 1)]));
        assert_eq!(set_i_ss(5), set(&[(1, 6)]));
        assert_eq!(
            set_i(3),
            set(&[
                (1, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (1, 6),
                (1, 7),
                (2, 1)
            ])
        );
        assert_eq!(set_i(2), set(&[(1, 1), (1, 2), (1, 3), (1, 4), (1, 5)]));
    }

    #[test]
    fn disjoint_split_and_printed_cases() {
        let primes = (3..100u64).filter(|&n| (2..n).all(|d| n % d != 0));
        for p in primes {
            let (i, o, s) = (set_i(p), set_i_ord(p), set_i_ss(p));
            assert!(o.is_disjoint(&s));
            assert_eq!(o.union(&s).copied().collect::<BTreeSet<_>>(), i);
            assert_eq!(s, printed_i_ss(p), "p = {p}");
        }
    }

    #[test]
    fn lists() {
        let l = theorem_group_list(2, Kind::Good, ListLevel::Qp).unwrap();
        assert_eq!(l.groups.len(), 8);
        assert!(l.contains(&TorsionGroup::cyclic(8)));
        let l = theorem_group_list(2, Kind::Ordinary, ListLevel::Mu4).unwrap();
        assert_eq!(
            l.groups,
            [g(1, 4), g(2, 1), g(2, 2), g(2, 4), g(4, 1)]
                .into_iter()
                .collect()
        );
        let l = theorem_group_list(7, Kind::Supersingular, ListLevel::Qp).unwrap();
        assert_eq!(l.groups, [g(1, 8), g(2, 2)].into_iter().collect());
        assert!(theorem_group_list(3, Kind::Ordinary, ListLevel::Mu4).is_err());
        assert!(theorem_group_list(3, Kind::Good, ListLevel::Inf).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(
            max_torsion_bound(7, Kind::Ordinary, ListLevel::Inf).unwrap(),
            49
        );
        assert_eq!(
            max_torsion_bound(3, Kind::Ordinary, ListLevel::Inf).unwrap(),
            18
        );
        assert_eq!(
            max_torsion_bound(2, Kind::Supersingular, ListLevel::Qp).unwrap(),
            5
        );
        assert_eq!(
            max_torsion_bound(2, Kind::Supersingular, ListLevel::Inf).unwrap(),
            5
        );
        assert_eq!(
            max_torsion_bound(7, Kind::Ordinary, ListLevel::Qp).unwrap(),
            13
        );
        assert!(max_torsion_bound(7, Kind::Good, ListLevel::Qp).is_err());
    }

    #[test]
    fn small_census() {
        let c = census_fp(2).unwrap();
        assert_eq!(
            c.supersingular,
            [g(1, 1), g(1, 3), g(1, 5)].into_iter().collect()
        );
        assert_eq!(c.all, pairs(set_i(2)).collect());
        let c = census_fp(3).unwrap();
        assert_eq!(c.all, pairs(set_i(3)).collect());
        assert_eq!(c.supersingular, pairs(set_i_ss(3)).collect());
    }
}
