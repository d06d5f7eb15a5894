use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use padic_torsion::classify::{self, Kind, ListLevel};
use padic_torsion::dataset::{bundled_dataset, load_dataset, validate_dataset, CurveRecord};
use padic_torsion::elliptic::{CurveModel, TorsionGroup};
use padic_torsion::ram2;
use padic_torsion::tables::verify_tables;
use padic_torsion::torsion::{Level, Options, TorsionEngine};
use padic_torsion::Error;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "padic-torsion", version, about = "Torsion of elliptic curves over p-adic cyclotomic fields")]
struct Cli {
    /// p-adic digits carried by the root search.
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    /// Search every candidate prime up to the Hasse bound instead of pruning with #Ē(F_p).
    #[arg(long, global = true)]
    slow_oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Torsion subgroup of a curve over Q_p(μ_{p^m}) or Q_p(μ_{p^∞}).
    Torsion {
        /// A label from the bundled dataset, or a1,a2,a3,a4,a6.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        /// Cyclotomic level m, or `inf`.
        #[arg(long, default_value = "0")]
        level: Level,
        #[arg(long)]
        json: bool,
    },
    /// Group list of a classification theorem, as JSON.
    Classify {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        level: ListLevel,
    },
    /// Group structures of all curves over F_p, as JSON.
    Census {
        #[arg(long)]
        prime: u64,
    },
    /// Check every expectation in a dataset against the torsion engine.
    VerifyTables {
        /// Dataset TSV; the bundled one when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Ramification tables and compositum identities over Q_2.
    Ram2 {
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Verification,
    Input(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precision(_) | Error::IndeterminateValuation | Error::EscalationCap(_) => {
                Failure::Computation(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Failure::Input(format!("{p} is not prime")))
    }
}

fn resolve_curve(spec: &str) -> Result<(Option<String>, CurveModel), Failure> {
    if spec.contains(',') {
        let a: Vec<i64> = spec
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Input(format!("bad coefficient list `{spec}`")))?;
        let a: [i64; 5] = a
            .try_into()
            .map_err(|_| Failure::Input("expected five coefficients a1,a2,a3,a4,a6".into()))?;
        return Ok((None, CurveModel::new(a)?));
    }
    bundled_dataset()
        .into_iter()
        .find(|r| r.label == spec)
        .map(|r| (Some(r.label), r.model))
        .ok_or_else(|| Failure::Input(format!("unknown curve label `{spec}`")))
}

fn groups_json<'a>(gs: impl IntoIterator<Item = &'a TorsionGroup>) -> Value {
    gs.into_iter().map(|g| json!({"m": g.m, "k": g.k})).collect()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let options = Options {
        precision: cli.precision,
        slow_oracle: cli.slow_oracle,
    };
    match cli.command {
        Command::Torsion {
            curve,
            prime,
            level,
            json,
        } => {
            check_prime(prime)?;
            let (label, model) = resolve_curve(&curve)?;
            let engine = TorsionEngine::new(options);
            let mut report = engine.report(&model, prime, level)?;
            report.label = label;
            if json {
                let mut v = serde_json::to_value(&report).expect("json");
                v["schema"] = json!(SCHEMA);
                v["structure"] = json!(report.group.to_string());
                print_json(&v);
            } else {
                println!(
                    "{} p={} level={} kind={} group={} (G_{{{},{}}})",
                    report.label.as_deref().unwrap_or(&curve),
                    report.p,
                    report.level,
                    report.kind,
                    report.group,
                    report.group.m,
                    report.group.k
                );
                if let Some(c) = &report.certificate {
                    println!("certificate: {c}");
                }
            }
        }
        Command::Classify { prime, kind, level } => {
            check_prime(prime)?;
            let list = classify::theorem_group_list(prime, kind, level)?;
            let bound = classify::max_torsion_bound(prime, kind, level).ok();
            print_json(&json!({
                "schema": SCHEMA,
                "p": prime,
                "kind": kind,
                "level": level,
                "clause": list.clause,
                "groups": groups_json(&list.groups),
                "bound": bound,
            }));
        }
        Command::Census { prime } => {
            check_prime(prime)?;
            let c = classify::census_fp(prime)?;
            print_json(&json!({
                "schema": SCHEMA,
                "p": prime,
                "curves": c.curves,
                "groups": groups_json(&c.all),
                "ordinary": groups_json(&c.ordinary),
                "supersingular": groups_json(&c.supersingular),
            }));
        }
        Command::VerifyTables { data, json } => {
            let records: Vec<CurveRecord> = match data {
                Some(path) => load_dataset(path)?,
                None => bundled_dataset(),
            };
            validate_dataset(&records)?;
            let engine = TorsionEngine::new(options);
            let report = verify_tables(&records, &engine);
            if json {
                let mut v = serde_json::to_value(&report).expect("json");
                v["schema"] = json!(SCHEMA);
                print_json(&v);
            } else {
                for r in &report.rows {
                    let table = r.table.map_or("-".to_string(), |t| t.to_string());
                    let got = match (&r.computed, &r.error) {
                        (Some(g), _) => g.to_string(),
                        (None, Some(e)) => format!("error: {e}"),
                        (None, None) => "-".into(),
                    };
                    println!(
                        "{} table={table} {} p={} level={} expected={} computed={got}",
                        if r.ok { "ok  " } else { "FAIL" },
                        r.label,
                        r.p,
                        r.level,
                        r.expected
                    );
                }
                println!("{} passed, {} failed", report.passed, report.failed);
            }
            if !report.all_passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Ram2 { json } => {
            let t1 = ram2::table1()?;
            let t2 = ram2::table2()?;
            let prop = ram2::prop_a1_checks()?;
            let ok = t1.iter().chain(&t2).all(|r| r.ok) && prop.all_hold();
            if json {
                print_json(&json!({
                    "schema": SCHEMA,
                    "table1": t1,
                    "table2": t2,
                    "prop_a1": prop,
                    "ok": ok,
                }));
            } else {
                println!("{:<4} {:<22} f e u  mu_n", "L", "polynomial");
                for r in t1.iter().chain(&t2) {
                    println!(
                        "{:<4} {:<22} {} {} {}  mu{}{}",
                        r.name,
                        format!("{:?}", r.poly),
                        r.f,
                        r.e,
                        r.u,
                        r.mu_column,
                        if r.ok { "" } else { "  MISMATCH" }
                    );
                }
                for id in std::iter::once(&prop.part1).chain(&prop.part2).chain(&prop.part3) {
                    println!("{}: {}", id.statement, id.holds);
                }
            }
            if !ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
