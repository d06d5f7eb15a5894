//! Published tables of torsion groups and the harness that checks a dataset
//! against them.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::dataset::CurveRecord;
use crate::elliptic::{ReductionKind, TorsionGroup};
use crate::torsion::{Level, TorsionEngine};

/// One printed row: table number, prime, Cremona label, and G_{m,k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub table: u32,
    pub p: u64,
    pub label: &'static str,
    pub m: u64,
    pub k: u64,
}

impl TableRow {
    pub fn level(&self) -> Level {
        match self.table {
            3 | 4 => Level::Finite(0),
            6 => Level::Finite(2),
            _ => Level::Infinity,
        }
    }

    pub fn kind(&self) -> ReductionKind {
        match self.table {
            4 | 7 => ReductionKind::Supersingular,
            _ => ReductionKind::Ordinary,
        }
    }

    pub fn group(&self) -> TorsionGroup {
        TorsionGroup::new(self.m, self.k)
    }
}

const fn r(table: u32, p: u64, label: &'static str, m: u64, k: u64) -> TableRow {
    TableRow { table, p, label, m, k }
}

/// Tables 3 (ordinary, Q_p), 4 (supersingular, Q_p), 5 (ordinary, μ_{p^∞}),
/// 6 (Q_2(μ_4)) and 7 (supersingular, μ_{p^∞}).
pub const TABLE_ROWS: &[TableRow] = &[
    r(3, 2, "15a5", 1, 2), r(3, 2, "15a7", 1, 4), r(3, 2, "15a4", 1, 8),
    r(3, 2, "15a2", 2, 1), r(3, 2, "15a1", 2, 2),
    r(3, 3, "26a2", 1, 1), r(3, 3, "14a3", 1, 2), r(3, 3, "26a1", 1, 3),
    r(3, 3, "11a1", 1, 5), r(3, 3, "14a1", 1, 6),
    r(3, 5, "11a2", 1, 1), r(3, 5, "38b2", 1, 2), r(3, 5, "19a1", 1, 3),
    r(3, 5, "39a2", 1, 4), r(3, 5, "11a1", 1, 5), r(3, 5, "26b1", 1, 7),
    r(3, 5, "17a3", 1, 8), r(3, 5, "26a1", 1, 9), r(3, 5, "38b1", 1, 10),
    r(3, 5, "39a1", 2, 1), r(3, 5, "17a1", 2, 2),
    r(3, 7, "26b2", 1, 1), r(3, 7, "104a1", 1, 3), r(3, 7, "17a1", 1, 4),
    r(3, 7, "38b1", 1, 5), r(3, 7, "20a1", 1, 6), r(3, 7, "26b1", 1, 7),
    r(3, 7, "19a2", 1, 9), r(3, 7, "11a1", 1, 10), r(3, 7, "75a1", 1, 11),
    r(3, 7, "30a1", 1, 12), r(3, 7, "57a1", 1, 13), r(3, 7, "17a2", 2, 1),
    r(3, 7, "30a2", 2, 3), r(3, 7, "19a1", 3, 1),
    r(4, 2, "67a1", 1, 1), r(4, 2, "19a1", 1, 3), r(4, 2, "11a1", 1, 5),
    r(4, 3, "140b1", 1, 1), r(4, 3, "17a1", 1, 4), r(4, 3, "17a2", 2, 1),
    r(4, 3, "26b1", 1, 7),
    r(4, 5, "14a1", 1, 6),
    r(4, 7, "15a4", 1, 8), r(4, 7, "15a1", 2, 2),
    r(5, 2, "33a3", 1, 4), r(5, 2, "15a5", 1, 8), r(5, 2, "33a1", 2, 1),
    r(5, 2, "15a2", 2, 4), r(5, 2, "15a1", 4, 1),
    r(5, 3, "56b1", 1, 2), r(5, 3, "26a2", 1, 3), r(5, 3, "11a1", 1, 5),
    r(5, 3, "14a3", 1, 6), r(5, 3, "26a1", 3, 1), r(5, 3, "14a1", 3, 2),
    r(5, 5, "46a1", 1, 2), r(5, 5, "19a1", 1, 3), r(5, 5, "39a2", 1, 4),
    r(5, 5, "11a2", 1, 5), r(5, 5, "26b1", 1, 7), r(5, 5, "17a3", 1, 8),
    r(5, 5, "26a1", 1, 9), r(5, 5, "38b2", 1, 10), r(5, 5, "39a1", 2, 1),
    r(5, 5, "17a1", 2, 2), r(5, 5, "11a1", 5, 1), r(5, 5, "38b1", 5, 2),
    r(5, 7, "104a1", 1, 3), r(5, 7, "17a1", 1, 4), r(5, 7, "38b1", 1, 5),
    r(5, 7, "20a1", 1, 6), r(5, 7, "26b2", 1, 7), r(5, 7, "19a2", 1, 9),
    r(5, 7, "11a1", 1, 10), r(5, 7, "75a1", 1, 11), r(5, 7, "30a1", 1, 12),
    r(5, 7, "57a1", 1, 13), r(5, 7, "17a2", 2, 1), r(5, 7, "30a2", 2, 3),
    r(5, 7, "19a1", 3, 1), r(5, 7, "26b1", 7, 1),
    r(6, 2, "15a5", 1, 4), r(6, 2, "33a1", 2, 1), r(6, 2, "15a2", 2, 2),
    r(6, 2, "15a4", 2, 4), r(6, 2, "15a1", 4, 1),
    r(7, 2, "67a1", 1, 1), r(7, 2, "19a1", 1, 3), r(7, 2, "11a1", 1, 5),
    r(7, 3, "140b1", 1, 1), r(7, 3, "17a1", 1, 4), r(7, 3, "17a2", 2, 1),
    r(7, 3, "26b1", 1, 7),
    r(7, 5, "14a1", 1, 6),
    r(7, 7, "15a4", 1, 8), r(7, 7, "15a1", 2, 2),
];

#[derive(Clone, Debug, Serialize)]
pub struct RowResult {
    pub table: Option<u32>,
    pub label: String,
    pub p: u64,
    pub level: Level,
    pub expected: TorsionGroup,
    pub computed: Option<TorsionGroup>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowResult>,
    pub passed: usize,
    pub failed: usize,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

struct Job<'a> {
    table: Option<u32>,
    label: String,
    p: u64,
    level: Level,
    expected: TorsionGroup,
    record: &'a CurveRecord,
}

/// Computes every expectation in the dataset, and reports each printed table
/// row that the dataset lacks (or disagrees with) as a failure.
pub fn verify_tables(dataset: &[CurveRecord], engine: &TorsionEngine) -> TableReport {
    let mut jobs: Vec<Job> = Vec::new();
    for rec in dataset {
        for e in &rec.expectations {
            jobs.push(Job {
                table: e.table,
                label: rec.label.clone(),
                p: e.p,
                level: e.level,
                expected: e.group,
                record: rec,
            });
        }
    }
    let mut missing = Vec::new();
    for row in TABLE_ROWS {
        let present = dataset.iter().any(|rec| {
            rec.label == row.label
                && rec.expectations.iter().any(|e| {
                    e.p == row.p && e.level == row.level() && e.group == row.group()
                })
        });
        if !present {
            missing.push(RowResult {
                table: Some(row.table),
                label: row.label.to_string(),
                p: row.p,
                level: row.level(),
                expected: row.group(),
                computed: None,
                error: Some("row missing from dataset".into()),
                ok: false,
            });
        }
    }

    let results: Mutex<Vec<RowResult>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = jobs.get(i) else { break };
                let rec = job.record;
                let (computed, error) = match engine.report(&rec.model, job.p, job.level) {
                    Ok(r) => (Some(r.group), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                results.lock().unwrap().push(RowResult {
                    table: job.table,
                    label: job.label.clone(),
                    p: job.p,
                    level: job.level,
                    expected: job.expected,
                    ok: computed == Some(job.expected),
                    computed,
                    error,
                });
            });
        }
    });
    let mut rows = results.into_inner().unwrap();
    rows.extend(missing);
    rows.sort_by(|a, b| {
        (a.table, a.p, &a.label, a.level).cmp(&(b.table, b.p, &b.label, b.level))
    });
    let passed = rows.iter().filter(|r| r.ok).count();
    TableReport {
        failed: rows.len() - passed,
        passed,
        rows,
    }
}
