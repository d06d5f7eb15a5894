//! Tab-separated curve datasets.
//!
//! Each row is `label a1 a2 a3 a4 a6` followed by any number of
//! `expect:key=value,...` fields. Recognized keys are `p`, `level`, `group`
//! (written `<m>x<mk>`), and the optional `table` and `kind`. Lines starting
//! with `#` and blank lines are ignored.

use std::collections::HashSet;
use std::path::Path;

use num_bigint::BigInt;

use crate::elliptic::{CurveModel, ReductionKind, TorsionGroup};
use crate::error::{Error, Result};
use crate::torsion::Level;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub table: Option<u32>,
    pub p: u64,
    pub level: Level,
    pub kind: Option<ReductionKind>,
    pub group: TorsionGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: String,
    pub model: CurveModel,
    pub expectations: Vec<Expectation>,
}

fn parse_group(s: &str) -> std::result::Result<TorsionGroup, String> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| format!("group `{s}` is not of the form <m>x<mk>"))?;
    let a: u64 = a.parse().map_err(|_| format!("bad group `{s}`"))?;
    let b: u64 = b.parse().map_err(|_| format!("bad group `{s}`"))?;
    if a == 0 || b == 0 || b % a != 0 {
        return Err(format!("group `{s}`: {a} must divide {b}"));
    }
    Ok(TorsionGroup::from_invariants(a, b))
}

fn parse_expectation(field: &str) -> std::result::Result<Expectation, String> {
    let body = field
        .strip_prefix("expect:")
        .ok_or_else(|| format!("unexpected field `{field}`"))?;
    let (mut table, mut p, mut level, mut kind, mut group) = (None, None, None, None, None);
    for kv in body.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("`{kv}` is not key=value"))?;
        match k {
            "table" => table = Some(v.parse().map_err(|_| format!("bad table `{v}`"))?),
            "p" => p = Some(v.parse().map_err(|_| format!("bad prime `{v}`"))?),
            "level" => level = Some(v.parse::<Level>()?),
            "kind" => {
                kind = Some(match v {
                    "ordinary" => ReductionKind::Ordinary,
                    "supersingular" => ReductionKind::Supersingular,
                    _ => return Err(format!("bad kind `{v}`")),
                })
            }
            "group" => group = Some(parse_group(v)?),
            _ => return Err(format!("unknown key `{k}`")),
        }
    }
    Ok(Expectation {
        table,
        p: p.ok_or("expectation without p")?,
        level: level.ok_or("expectation without level")?,
        kind,
        group: group.ok_or("expectation without group")?,
    })
}

pub fn parse_dataset(text: &str) -> Result<Vec<CurveRecord>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let coeffs = fields
            .iter()
            .skip(1)
            .take_while(|f| !f.starts_with("expect:"))
            .count();
        if coeffs != 5 {
            return Err(err(format!("expected 5 coefficients, found {coeffs}")));
        }
        let label = fields[0].to_string();
        let mut a: [BigInt; 5] = Default::default();
        for (j, f) in fields[1..6].iter().enumerate() {
            a[j] = f
                .parse()
                .map_err(|_| err(format!("coefficient `{f}` is not an integer")))?;
        }
        let model = CurveModel::from_bigints(a).map_err(|e| err(e.to_string()))?;
        let expectations = fields[6..]
            .iter()
            .map(|f| parse_expectation(f))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        if !seen.insert(label.clone()) {
            return Err(err(format!("duplicate label `{label}`")));
        }
        out.push(CurveRecord {
            label,
            model,
            expectations,
        });
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<CurveRecord>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_dataset(&text)
}

fn format_expectation(e: &Expectation) -> String {
    let mut parts = Vec::new();
    if let Some(t) = e.table {
        parts.push(format!("table={t}"));
    }
    parts.push(format!("p={}", e.p));
    parts.push(format!("level={}", e.level));
    if let Some(k) = e.kind {
        parts.push(format!("kind={k}"));
    }
    parts.push(format!("group={}x{}", e.group.m, e.group.exponent()));
    format!("expect:{}", parts.join(","))
}

/// Canonical text form: no comments, single tabs, keys in a fixed order.
pub fn serialize_dataset(records: &[CurveRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let mut fields = vec![r.label.clone()];
        fields.extend(r.model.a.iter().map(|c| c.to_string()));
        fields.extend(r.expectations.iter().map(format_expectation));
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

/// Checks each expectation against the reduction at its prime: good
/// reduction, and the declared kind when present.
pub fn validate_dataset(records: &[CurveRecord]) -> Result<()> {
    for r in records {
        for e in &r.expectations {
            let reduced = r.model.reduce(e.p).map_err(|_| {
                Error::OutOfRange(format!("{}: bad reduction at p = {}", r.label, e.p))
            })?;
            if let Some(kind) = e.kind {
                let info = reduced.group_structure()?;
                if info.kind != kind {
                    return Err(Error::OutOfRange(format!(
                        "{}: reduction at p = {} is {}, dataset says {kind}",
                        r.label, e.p, info.kind
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The dataset shipped with the crate.
pub const BUNDLED: &str = include_str!("../data/curves.tsv");

pub fn bundled_dataset() -> Vec<CurveRecord> {
    parse_dataset(BUNDLED).expect("bundled dataset parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_row() {
        let r = parse_dataset("11a1\t0\t-1\t1\t-10\t-20\n").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].label, "11a1");
        assert_eq!(r[0].model.discriminant(), BigInt::from(-161051));
        assert!(parse_dataset("").unwrap().is_empty());
    }

    #[test]
    fn rejects_short_rows() {
        let e = parse_dataset("# header\n11a1\t0\t-1\t1\t-10\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_dataset("a\t0\t0\t0\t0\t0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_dataset("a\t0\t0\t1\t0\t0\na\t0\t0\t1\t0\t0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn expectations() {
        let text = "15a1\t1\t1\t1\t-10\t-10\texpect:p=2,level=inf,group=4x4\texpect:table=6,p=2,level=2,kind=ordinary,group=4x4\n";
        let r = &parse_dataset(text).unwrap()[0];
        assert_eq!(r.expectations[0].group, TorsionGroup::new(4, 1));
        assert_eq!(r.expectations[0].level, Level::Infinity);
        assert_eq!(r.expectations[1].table, Some(6));
        assert_eq!(serialize_dataset(&parse_dataset(text).unwrap()), text);
        assert!(parse_dataset("x\t1\t1\t1\t-10\t-10\texpect:p=2,level=0,group=2x3\n").is_err());
    }

    #[test]
    fn bundled_rows_validate() {
        let data = bundled_dataset();
        assert_eq!(data.len(), 35);
        validate_dataset(&data).unwrap();
        let reparsed = parse_dataset(&serialize_dataset(&data)).unwrap();
        assert_eq!(reparsed, data);
    }
}
