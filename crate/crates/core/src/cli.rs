//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification assertion fails, 2 on
//! usage errors (bad arguments, invalid levels, caps exceeded).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cuspgroup::{order_closed_form, order_with_oracle, OrderResult};
use crate::divlattice::DivisorTable;
use crate::error::Error;
use crate::modsym::{
    compare_index_order, enumerate_eisenstein_maximal, verify_main_theorem, LevelAnalysis,
};
use crate::qseries::{eisenstein_series, residues, DEFAULT_PRECISION};
use crate::verify::{run_suite, square_free_levels, Suite, LATTICE_CAP, MODSYM_CAP};
use crate::SquareFreeLevel;

/// Environment variable raising both level caps.
pub const MAX_LEVEL_ENV: &str = "EISLAB_MAX_LEVEL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "eislab",
    version,
    about = "Cuspidal orders, Eisenstein series and Eisenstein ideals for square-free levels"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Allow levels above the default caps (prints a warning).
    #[arg(long, global = true)]
    pub allow_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order of the cuspidal divisor class C_{M,N}.
    CuspOrder {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        m: u64,
        /// Also run the eta-quotient lattice oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Orders of C_{M,N} for all square-free 6 < N <= max-level and M | N, M != 1.
    Table {
        #[arg(long)]
        max_level: u64,
        #[arg(long)]
        oracle: bool,
    },
    /// q-expansion of the Eisenstein series E_{M,N}.
    Eis {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: usize,
    },
    /// Residues of E_{M,N} at the cusps with closed forms.
    Residues {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        m: u64,
    },
    /// Index of the Eisenstein ideal I_{M,N} in the Hecke ring (all M when omitted).
    HeckeIndex {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Eisenstein maximal ideals of the Hecke ring and the cuspidal check.
    MaximalIdeals {
        #[arg(long)]
        level: u64,
    },
    /// Run a verification suite over a range of levels.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        max_level: Option<u64>,
    },
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) | Error::InfiniteIndex(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Rendered output plus whether any assertion failed.
#[derive(Debug)]
pub struct Rendered {
    pub body: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub order: String,
    pub h: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<String>,
}

impl TableRow {
    fn from_order(r: &OrderResult) -> Self {
        Self {
            n: r.n,
            m: r.m,
            order: r.closed_form_order.to_string(),
            h: r.h,
            oracle_order: r.oracle_order.as_ref().map(BigInt::to_string),
            index: None,
            verdict: None,
        }
    }
}

/// CSV with header `N,M,order,h[,oracle_order,index,verdict]`.
pub fn rows_to_csv(rows: &[TableRow]) -> String {
    let oracle = rows.iter().any(|r| r.oracle_order.is_some());
    let index = rows.iter().any(|r| r.index.is_some());
    let mut out = String::from("N,M,order,h");
    if oracle || index {
        out.push_str(",oracle_order");
    }
    if index {
        out.push_str(",index,verdict");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{},{}", r.n, r.m, r.order, r.h);
        if oracle || index {
            let _ = write!(out, ",{}", r.oracle_order.as_deref().unwrap_or(""));
        }
        if index {
            let _ = write!(
                out,
                ",{},{}",
                r.index.as_deref().unwrap_or(""),
                r.verdict.as_deref().unwrap_or("")
            );
        }
        out.push('\n');
    }
    out
}

/// Parses the output of [`rows_to_csv`].
pub fn rows_from_csv(text: &str) -> Result<Vec<TableRow>, String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty csv")?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let opt = |fields: &[&str], name: &str| {
        col(name)
            .and_then(|i| fields.get(i).copied())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
    };
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let get = |name: &str| {
                col(name)
                    .and_then(|i| f.get(i).copied())
                    .ok_or_else(|| format!("missing column {name}"))
            };
            Ok(TableRow {
                n: get("N")?.parse().map_err(|e| format!("{e}"))?,
                m: get("M")?.parse().map_err(|e| format!("{e}"))?,
                order: get("order")?.to_string(),
                h: get("h")?.parse().map_err(|e| format!("{e}"))?,
                oracle_order: opt(&f, "oracle_order"),
                index: opt(&f, "index"),
                verdict: opt(&f, "verdict"),
            })
        })
        .collect()
}

fn level_caps() -> (u64, u64) {
    match std::env::var(MAX_LEVEL_ENV)
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        Some(v) => (LATTICE_CAP.max(v), MODSYM_CAP.max(v)),
        None => (LATTICE_CAP, MODSYM_CAP),
    }
}

fn check_cap(n: u64, cap: u64, allow: bool) -> Result<(), Failure> {
    if n <= cap {
        return Ok(());
    }
    if allow {
        eprintln!("warning: level {n} exceeds the default cap {cap}; this may be slow");
        Ok(())
    } else {
        Err(Failure::usage(format!(
            "level {n} exceeds the cap {cap}; pass --allow-large or set {MAX_LEVEL_ENV}"
        )))
    }
}

fn level(n: u64) -> Result<SquareFreeLevel, Failure> {
    Ok(SquareFreeLevel::new(n)?)
}

fn envelope(command: &str, args: Value, data: Value) -> String {
    let doc = json!({
        "meta": {
            "tool": "eislab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "args": args,
        },
        "data": data,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::usage(format!("format {format:?} is not available for {command}").to_lowercase())
}

/// Executes a parsed command and renders its output.
pub fn execute(cli: &Cli) -> Result<Rendered, Failure> {
    let (lattice_cap, modsym_cap) = level_caps();
    let allow = cli.allow_large;
    let fmt = cli.format;
    match &cli.command {
        Command::CuspOrder {
            level: n,
            m,
            oracle,
        } => {
            let l = level(*n)?;
            check_cap(*n, lattice_cap, allow)?;
            if *m == 1 {
                return Err(Error::TrivialDivisor.into());
            }
            let r = if *oracle {
                order_with_oracle(&l, *m)?
            } else {
                order_closed_form(&l, *m)?
            };
            let ok = r.agreed != Some(false);
            let body = match fmt {
                Format::Json => envelope(
                    "cusp-order",
                    json!({"level": n, "m": m, "oracle": oracle}),
                    to_value(&r),
                ),
                Format::Csv => rows_to_csv(&[TableRow::from_order(&r)]),
                Format::Text => {
                    let mut s = format!(
                        "N={} M={} order={} h={}",
                        r.n, r.m, r.closed_form_order, r.h
                    );
                    if let Some(o) = &r.oracle_order {
                        let _ = write!(s, " oracle_order={o} agreed={}", r.agreed == Some(true));
                    }
                    if r.outside_hypothesis {
                        s.push_str(" (N <= 6: outside the range where the closed form is claimed)");
                    }
                    s + "\n"
                }
            };
            Ok(Rendered { body, ok })
        }
        Command::Table { max_level, oracle } => {
            check_cap(*max_level, lattice_cap, allow)?;
            let mut rows = Vec::new();
            let mut ok = true;
            for n in square_free_levels(7, *max_level) {
                let l = level(n)?;
                for m in DivisorTable::new(&l)?
                    .values()
                    .into_iter()
                    .filter(|&m| m != 1)
                {
                    let r = if *oracle {
                        order_with_oracle(&l, m)?
                    } else {
                        order_closed_form(&l, m)?
                    };
                    ok &= r.agreed != Some(false);
                    rows.push(TableRow::from_order(&r));
                }
            }
            let body = match fmt {
                Format::Json => envelope(
                    "table",
                    json!({"max_level": max_level, "oracle": oracle}),
                    to_value(&rows),
                ),
                Format::Csv => rows_to_csv(&rows),
                Format::Text => rows
                    .iter()
                    .map(|r| {
                        let mut s = format!("N={} M={} order={} h={}", r.n, r.m, r.order, r.h);
                        if let Some(o) = &r.oracle_order {
                            let _ = write!(s, " oracle_order={o}");
                        }
                        s + "\n"
                    })
                    .collect(),
            };
            Ok(Rendered { body, ok })
        }
        Command::Eis { level: n, m, prec } => {
            let l = level(*n)?;
            check_cap(*n, lattice_cap, allow)?;
            if *prec < 2 {
                return Err(Failure::usage("precision must be at least 2"));
            }
            let f = eisenstein_series(&l, *m, *prec)?;
            let body = match fmt {
                Format::Json => envelope(
                    "eis",
                    json!({"level": n, "m": m, "prec": prec}),
                    to_value(&f),
                ),
                Format::Csv => {
                    let mut s = String::from("n,coeff\n");
                    for (i, c) in f.coeffs().iter().enumerate() {
                        let _ = writeln!(s, "{i},{c}");
                    }
                    s
                }
                Format::Text => {
                    let terms: Vec<String> = f.coeffs().iter().map(BigInt::to_string).collect();
                    format!("E_{{{m},{n}}} = [{}] + O(q^{prec})\n", terms.join(", "))
                }
            };
            Ok(Rendered { body, ok: true })
        }
        Command::Residues { level: n, m } => {
            let l = level(*n)?;
            let r = residues(&l, *m)?;
            let body = match fmt {
                Format::Json => envelope("residues", json!({"level": n, "m": m}), to_value(&r)),
                Format::Csv => {
                    let mut s = String::from("cusp,source,value\n");
                    for x in &r {
                        let src = to_value(&x.source);
                        let _ =
                            writeln!(s, "{},{},{}", x.cusp, src.as_str().unwrap_or(""), x.value);
                    }
                    s
                }
                Format::Text => r
                    .iter()
                    .map(|x| format!("Res at P_{} = {}\n", x.cusp, x.value))
                    .collect(),
            };
            Ok(Rendered { body, ok: true })
        }
        Command::HeckeIndex { level: n, m } => {
            let l = level(*n)?;
            check_cap(*n, modsym_cap, allow)?;
            let analysis = LevelAnalysis::build_with_cap(&l, (*n).max(modsym_cap))?;
            let ms: Vec<u64> = match m {
                Some(m) => {
                    l.check_divisor(*m)?;
                    vec![*m]
                }
                None => DivisorTable::new(&l)?.values(),
            };
            let mut rows = Vec::new();
            let mut ideals = Vec::new();
            let mut ok = true;
            for m in ms {
                let ideal = analysis.ideal(m)?.clone();
                ok &= ideal.cyclic;
                if m != 1 && analysis.ring.genus() > 0 {
                    let cmp = compare_index_order(&analysis, m)?;
                    let closed = order_closed_form(&l, m)?;
                    ok &= cmp.verdict != crate::modsym::Verdict::Violation;
                    rows.push(TableRow {
                        n: *n,
                        m,
                        order: closed.closed_form_order.to_string(),
                        h: closed.h,
                        oracle_order: Some(cmp.cusp_order.to_string()),
                        index: Some(ideal.index.to_string()),
                        verdict: Some(cmp.verdict.to_string()),
                    });
                    ideals.push(json!({"ideal": ideal, "comparison": cmp}));
                } else {
                    ideals.push(json!({"ideal": ideal}));
                }
            }
            let body = match fmt {
                Format::Json => envelope(
                    "hecke-index",
                    json!({"level": n, "m": m}),
                    json!({"genus": analysis.ring.genus(), "ring": analysis.ring.summary(), "ideals": ideals}),
                ),
                Format::Csv => rows_to_csv(&rows),
                Format::Text => {
                    let mut s = format!("N={n} genus={}\n", analysis.ring.genus());
                    for i in &ideals {
                        let id = &i["ideal"];
                        let _ = write!(s, "M={} t={}", id["m"], id["index"]);
                        if let Some(c) = i.get("comparison") {
                            let _ = write!(
                                s,
                                " order={} verdict={}",
                                c["cusp_order"],
                                c["verdict"].as_str().unwrap_or("")
                            );
                        }
                        s.push('\n');
                    }
                    s
                }
            };
            Ok(Rendered { body, ok })
        }
        Command::MaximalIdeals { level: n } => {
            let l = level(*n)?;
            check_cap(*n, modsym_cap, allow)?;
            let analysis = LevelAnalysis::build_with_cap(&l, (*n).max(modsym_cap))?;
            let (records, nonmax) = enumerate_eisenstein_maximal(&analysis)?;
            let checks = verify_main_theorem(&l, &records)?;
            let ok = nonmax.holds && checks.iter().all(|c| c.holds);
            let body = match fmt {
                Format::Json => envelope(
                    "maximal-ideals",
                    json!({"level": n}),
                    json!({"records": records, "nonmaximal": nonmax, "checks": checks}),
                ),
                Format::Csv => return Err(unsupported(fmt, "maximal-ideals")),
                Format::Text => {
                    let mut s = String::new();
                    for c in &checks {
                        let _ = writeln!(
                            s,
                            "ell={} M={} case={} holds={} ({})",
                            c.ell, c.m, c.case, c.holds, c.detail
                        );
                    }
                    if records.is_empty() {
                        s.push_str("no Eisenstein maximal ideals\n");
                    }
                    let _ = writeln!(
                        s,
                        "index of I(1,{n}) = {} check={}",
                        nonmax.index_trivial_m, nonmax.holds
                    );
                    s
                }
            };
            Ok(Rendered { body, ok })
        }
        Command::Verify { suite, max_level } => {
            let cap = if suite.uses_modular_symbols() {
                modsym_cap
            } else {
                lattice_cap
            };
            let max_level = max_level.unwrap_or(suite.default_cap());
            check_cap(max_level, cap, allow)?;
            let report = run_suite(*suite, max_level)?;
            let body = match fmt {
                Format::Json => envelope(
                    "verify",
                    json!({"suite": suite, "max_level": max_level}),
                    to_value(&report),
                ),
                Format::Csv => {
                    let mut s = String::from("N,M,passed\n");
                    for c in &report.cases {
                        let m = c.m.map(|m| m.to_string()).unwrap_or_default();
                        let _ = writeln!(s, "{},{},{}", c.n, m, c.passed);
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for c in report.failures() {
                        let _ = writeln!(s, "FAIL N={} M={:?} {}", c.n, c.m, c.detail);
                    }
                    let _ = writeln!(
                        s,
                        "{}: {} ({} cases, levels {}..={})",
                        suite,
                        if report.passed { "pass" } else { "FAIL" },
                        report.cases.len(),
                        report.min_level,
                        report.max_level
                    );
                    s
                }
            };
            Ok(Rendered {
                body,
                ok: report.passed,
            })
        }
    }
}

/// Parses arguments, runs the command and writes the output.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &r.body),
                None => std::io::stdout().write_all(r.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
