//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any of them fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_torsion::classify::{
    census_fp, covered_bound_combinations, list_for_report, max_torsion_bound,
    printed_i_ss, set_i, set_i_ss, theorem_group_list, Kind, ListLevel,
};
use padic_torsion::dataset::{bundled_dataset, validate_dataset, CurveRecord};
use padic_torsion::elliptic::{CurveModel, TorsionGroup};
use padic_torsion::poly::{zpoly, ZPoly};
use padic_torsion::ram2;
use padic_torsion::roots::integer_roots_in_field;
use padic_torsion::tables::verify_tables;
use padic_torsion::torsion::{
    group_from_counts, q_power_counts, theorem_descent_level, torsion_structure, Level, Options,
    TorsionEngine,
};
use padic_torsion::{Error, Field};

type Outcome = Result<String, String>;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn groups(pairs: BTreeSet<(u64, u64)>) -> BTreeSet<TorsionGroup> {
    pairs.into_iter().map(|(m, k)| TorsionGroup::new(m, k)).collect()
}

fn table_reproduction(engine: &TorsionEngine) -> Outcome {
    let data = bundled_dataset();
    validate_dataset(&data).map_err(|e| e.to_string())?;
    let report = verify_tables(&data, engine);
    let bad: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.ok)
        .map(|r| {
            format!(
                "{} p={} level={} expected {} got {:?} {:?}",
                r.label, r.p, r.level, r.expected, r.computed, r.error
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(format!("{} rows", report.passed))
    } else {
        Err(bad.join("; "))
    }
}

fn census_vs_classification() -> Outcome {
    let mut bad = Vec::new();
    for p in PRIMES {
        let c = census_fp(p).map_err(|e| e.to_string())?;
        if c.all != groups(set_i(p)) {
            bad.push(format!("census at {p} differs from I"));
        }
        if p > 2 {
            if c.supersingular != groups(set_i_ss(p)) {
                bad.push(format!("supersingular census at {p} differs from I_ss"));
            }
            if set_i_ss(p) != printed_i_ss(p) {
                bad.push(format!("I_ss at {p} differs from the printed case split"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("p in {PRIMES:?}"))
    } else {
        Err(bad.join("; "))
    }
}

fn model(data: &[CurveRecord], label: &str) -> CurveModel {
    data.iter().find(|r| r.label == label).unwrap().model.clone()
}

fn bound_sharpness(engine: &TorsionEngine) -> Outcome {
    let mut bad = Vec::new();
    for p in PRIMES {
        for (kind, level) in covered_bound_combinations() {
            let list = theorem_group_list(p, kind, level).map_err(|e| e.to_string())?;
            let bound = max_torsion_bound(p, kind, level).map_err(|e| e.to_string())?;
            if list.max_order() != bound {
                bad.push(format!(
                    "({p}, {kind}, {level}): list max {} vs bound {bound}",
                    list.max_order()
                ));
            }
        }
    }
    let data = bundled_dataset();
    let witnesses = [
        ("15a1", 2, Level::Infinity, Kind::Ordinary, ListLevel::Inf, TorsionGroup::new(4, 1)),
        ("26b1", 3, Level::Finite(0), Kind::Supersingular, ListLevel::Qp, TorsionGroup::cyclic(7)),
    ];
    for (label, p, level, kind, list_level, expected) in witnesses {
        let r = engine
            .report(&model(&data, label), p, level)
            .map_err(|e| e.to_string())?;
        let bound = max_torsion_bound(p, kind, list_level).map_err(|e| e.to_string())?;
        if r.group != expected || r.group.order() != bound {
            bad.push(format!("{label} at {p}: {} does not attain {bound}", r.group));
        }
    }
    if bad.is_empty() {
        Ok("all covered combinations sharp".into())
    } else {
        Err(bad.join("; "))
    }
}

fn theorem_membership(engine: &TorsionEngine) -> Outcome {
    let data = bundled_dataset();
    let mut bad = Vec::new();
    let mut checked = 0;
    for rec in &data {
        let mut jobs: BTreeSet<(u64, Level)> = BTreeSet::new();
        for e in &rec.expectations {
            jobs.insert((e.p, e.level));
            jobs.insert((e.p, Level::Finite(0)));
        }
        for (p, level) in jobs {
            let r = engine.report(&rec.model, p, level).map_err(|e| e.to_string())?;
            let list = list_for_report(&r).map_err(|e| e.to_string())?;
            if !list.contains(&r.group) {
                bad.push(format!("{} p={p} level={level}: {} not in {}", rec.label, r.group, list.clause));
            }
            if level == Level::Finite(0) {
                let good = theorem_group_list(p, Kind::Good, ListLevel::Qp).map_err(|e| e.to_string())?;
                if !good.contains(&r.group) {
                    bad.push(format!("{} p={p}: {} not in {}", rec.label, r.group, good.clause));
                }
            }
            if level == Level::Infinity {
                let n = theorem_descent_level(p, r.kind);
                let at_n = engine
                    .report(&rec.model, p, Level::Finite(n))
                    .map_err(|e| e.to_string())?;
                if at_n.group != r.group {
                    bad.push(format!(
                        "{} p={p}: level {n} gives {}, escalation gives {}",
                        rec.label, at_n.group, r.group
                    ));
                }
            }
            checked += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} reports"))
    } else {
        Err(bad.join("; "))
    }
}

fn reduction_consistency() -> Outcome {
    let data = bundled_dataset();
    let mut bad = Vec::new();
    let mut checked = 0;
    for rec in &data {
        let primes: BTreeSet<u64> = rec.expectations.iter().map(|e| e.p).collect();
        for p in primes {
            let info = rec.model.reduce(p).and_then(|r| r.group_structure()).map_err(|e| e.to_string())?;
            let k = Field::qp(p, 64).map_err(|e| e.to_string())?;
            let n = info.order;
            for q in (2..=n).filter(|&q| n % q == 0 && (2..q).all(|d| q % d != 0) && q != p) {
                let counts = q_power_counts(&rec.model, &k, q, None).map_err(|e| e.to_string())?;
                let local = group_from_counts(q, &counts).map_err(|e| e.to_string())?;
                if local != info.group.q_part(q) {
                    bad.push(format!(
                        "{} p={p} q={q}: {local} vs {}",
                        rec.label,
                        info.group.q_part(q)
                    ));
                }
                checked += 1;
            }
            if p > 2 {
                let slow = Options { slow_oracle: true, ..Options::default() };
                let r = torsion_structure(&rec.model, p, 0, &slow).map_err(|e| e.to_string())?;
                if r.group.q_part(p).order() > info.group.n_torsion_count(p) {
                    bad.push(format!("{} p={p}: p-part {} too large", rec.label, r.group.q_part(p)));
                }
                checked += 1;
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} checks"))
    } else {
        Err(bad.join("; "))
    }
}

fn vp(x: i128, p: i128) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn eval(c: &[i64], a: i128) -> i128 {
    c.iter().rev().fold(0i128, |acc, &x| acc * a + x as i128)
}

fn root_mod(r: &padic_torsion::Element, p3: &BigInt) -> Option<u64> {
    let (shift, prec, c) = r.coords();
    if prec == 0 || shift >= 3 {
        return Some(0);
    }
    if shift < 0 {
        return None;
    }
    let v = BigInt::from(r.field().p()).pow(shift as u32) * &c[0];
    let v = ((v % p3) + p3) % p3;
    u64::try_from(v).ok()
}

fn root_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tested = 0;
    let mut liftable = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let k = Field::qp(p, 32).map_err(|e| e.to_string())?;
        let p3 = p.pow(3);
        let mut done = 0;
        while done < 60 {
            let deg = rng.gen_range(1..=6);
            let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50)).collect();
            if c[deg] == 0 {
                c[deg] = 1;
            }
            let g: ZPoly = zpoly(&c);
            let roots = match integer_roots_in_field(&g, &k) {
                Ok(r) => r,
                Err(Error::NotSquarefree) => continue,
                Err(e) => return Err(format!("{c:?} over Q_{p}: {e}")),
            };
            let dc: Vec<i64> = (1..c.len()).map(|i| c[i] * i as i64).collect();
            let oracle: BTreeSet<u64> = (0..p3)
                .filter(|&a| {
                    let (vg, vd) = (vp(eval(&c, a as i128), p as i128), vp(eval(&dc, a as i128), p as i128));
                    vd != u32::MAX && vg > 2 * vd && vg - vd >= 3
                })
                .collect();
            let integral: Vec<_> = roots
                .iter()
                .filter(|r| r.valuation().map_or(true, |v| v >= 0))
                .collect();
            let found: BTreeSet<u64> = integral
                .iter()
                .filter_map(|r| root_mod(r, &BigInt::from(p3)))
                .collect();
            liftable += oracle.len();
            if !oracle.is_subset(&found) {
                bad.push(format!("{c:?} over Q_{p}: oracle {oracle:?} found {found:?}"));
            }
            for r in &integral {
                let a = root_mod(r, &BigInt::from(p3)).unwrap();
                if vp(eval(&dc, a as i128), p as i128) == 0 && !oracle.contains(&a) {
                    bad.push(format!("{c:?} over Q_{p}: root {a} mod {p3} fails the oracle"));
                }
            }
            done += 1;
            tested += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{tested} polynomials, {liftable} liftable residues"))
    } else {
        Err(bad.join("; "))
    }
}

fn ramification() -> Outcome {
    let mut bad = Vec::new();
    let t1 = ram2::table1().map_err(|e| e.to_string())?;
    let t2 = ram2::table2().map_err(|e| e.to_string())?;
    if t1.len() != 7 || t2.len() != 4 {
        bad.push("wrong table sizes".to_string());
    }
    for r in t1.iter().chain(&t2) {
        if !r.ok {
            bad.push(format!("{}: f={} e={} u={} mu{}", r.name, r.f, r.e, r.u, r.mu_column));
        }
    }
    let prop = ram2::prop_a1_checks().map_err(|e| e.to_string())?;
    if !prop.all_hold() {
        bad.push(format!("{prop:?}"));
    }
    if bad.is_empty() {
        Ok("tables 1-2 and all compositum identities".into())
    } else {
        Err(bad.join("; "))
    }
}

fn main() {
    let engine = TorsionEngine::new(Options::default());
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 7] = [
        ("table reproduction", Box::new(|| table_reproduction(&engine))),
        ("census vs classification", Box::new(census_vs_classification)),
        ("bound sharpness", Box::new(|| bound_sharpness(&engine))),
        ("theorem-list membership", Box::new(|| theorem_membership(&engine))),
        ("reduction-map consistency", Box::new(reduction_consistency)),
        ("root-finder oracle", Box::new(root_oracle)),
        ("ramification tables", Box::new(ramification)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}) [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
