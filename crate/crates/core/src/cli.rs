//! Command-line front end. Reports go to the output stream and one-line
//! diagnostics to the error stream, so reports pipe cleanly.
//!
//! Exit codes: 0 everything matched or passed, 1 a mathematical mismatch,
//! 2 invalid input, 3 work budget exceeded.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::formulas::{default_guard, e_poly, euler_table, poincare, stratum_polys, theorem_a, EulerTable, Family};
use crate::gf::{make_field, FieldCtx};
use crate::json::{rep_from_json, rep_to_json, witness_to_json};
use crate::mat::{group_order_poly, hom_count_poly, GroupFamily};
use crate::orbits::{census_detailed, CensusOptions, StrataCensus, DEFAULT_WORK_BUDGET};
use crate::poly::{bigint_to_json, rational_to_json, CountPoly};
use crate::strata::{classify, witness, StratumLabel};
use crate::verify::{run_suite, Suite, VerifyOptions, DEFAULT_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the default census work budget.
pub const WORK_BUDGET_ENV: &str = "SL2CENSUS_WORK_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "sl2census", version, about = "Exact census of SL2 representation spaces over odd finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count tuples and orbits per stratum.
    Census(CensusArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// E-polynomial coefficients or value.
    Epoly(EpolyArgs),
    /// Poincaré polynomial coefficients or value.
    Poincare(PoincareArgs),
    /// Order of SL_n or GL_n, or of Hom(F_r, -), as a polynomial in q.
    Order(OrderArgs),
    /// Classify a tuple read as JSON from standard input.
    Classify(ClassifyArgs),
    /// Euler characteristics of the character variety and its strata.
    Euler(EulerArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Census budget in matrix multiplications.
    #[arg(long, env = WORK_BUDGET_ENV, default_value_t = DEFAULT_WORK_BUDGET)]
    pub work_budget: u128,
    /// Run even when the estimate exceeds the budget.
    #[arg(long)]
    pub override_budget: bool,
}

impl RunArgs {
    fn census_options(&self) -> CensusOptions {
        CensusOptions {
            threads: self.threads,
            work_budget: self.work_budget,
            override_budget: self.override_budget,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Brute,
    Formula,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub r: u32,
    /// Suites to run; all of them when omitted.
    #[arg(long = "suite", value_enum, value_delimiter = ',')]
    pub suites: Vec<Suite>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct EpolyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub r: u32,
    /// Evaluate at this q instead of printing coefficients.
    #[arg(long, allow_negative_numbers = true)]
    pub eval: Option<i64>,
}

#[derive(Args, Debug)]
pub struct PoincareArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub r: u32,
    /// Evaluate at this t instead of printing coefficients.
    #[arg(long, allow_negative_numbers = true)]
    pub eval: Option<i64>,
    /// Series truncation degree (default 8r).
    #[arg(long)]
    pub guard: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderFamily {
    Sl,
    Gl,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[arg(long, value_enum)]
    pub family: OrderFamily,
    #[arg(long)]
    pub n: u32,
    /// Rank of the free group; prints |Hom(F_r, G)| when given.
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub eval: Option<i64>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Include the conjugator into normal form.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Args, Debug)]
pub struct EulerArgs {
    #[arg(long)]
    pub r: u32,
}

/// Parses `args` and runs the command. Never panics on bad input; clap
/// usage errors exit with code 2 as well.
pub fn run<I, T>(args: I, input: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.code
        }
    }
}

/// A failure with its exit code and a machine-parsable one-line reason.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub reason: String,
}

impl Failure {
    fn invalid(reason: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, kind: "invalid_input", reason: reason.into() }
    }

    pub fn line(&self) -> String {
        format!("error code={} kind={} reason={}", self.code, self.kind, json!(self.reason))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::WorkBudgetExceeded { .. } => (EXIT_BUDGET, "budget_exceeded"),
            Error::EntryLeftBaseField
            | Error::OddIrreducibleOrbitCount(_)
            | Error::SeriesNotPolynomial { .. }
            | Error::InexactDivision => (EXIT_MISMATCH, "mismatch"),
            _ => (EXIT_INVALID, "invalid_input"),
        };
        Failure { code, kind, reason: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INVALID, kind: "io", reason: e.to_string() }
    }
}

type CliResult = std::result::Result<i32, Failure>;

fn dispatch(cmd: Command, input: &mut dyn Read, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Census(a) => cmd_census(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Epoly(a) => cmd_epoly(&a, out),
        Command::Poincare(a) => cmd_poincare(&a, out),
        Command::Order(a) => cmd_order(&a, out),
        Command::Classify(a) => cmd_classify(&a, input, out),
        Command::Euler(a) => cmd_euler(&a, out),
    }
}

fn field(a: &FieldArgs) -> std::result::Result<FieldCtx, Failure> {
    Ok(make_field(a.p, a.k)?)
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

/// One row of a census report. Formula cells are absent in brute mode and
/// brute cells are absent in formula mode.
struct Row {
    label: StratumLabel,
    size: Option<u64>,
    orbits: Option<u64>,
    stab: Option<u64>,
    size_formula: Option<BigInt>,
    orbits_formula: Option<BigInt>,
}

impl Row {
    fn matches(&self, q: u64) -> Option<bool> {
        let (Some(size), Some(orbits), Some(sf), Some(of)) =
            (self.size, self.orbits, &self.size_formula, &self.orbits_formula)
        else {
            return None;
        };
        let stab_ok = size == 0 || self.stab == Some(self.label.stabilizer_order(q));
        Some(BigInt::from(size) == *sf && BigInt::from(orbits) == *of && stab_ok)
    }
}

fn cmd_census(a: &CensusArgs, out: &mut dyn Write) -> CliResult {
    let f = field(&a.field)?;
    let q = f.q() as u64;
    let r = a.r;
    if r == 0 {
        return Err(Failure::invalid("rank must be at least 1"));
    }
    let brute = a.mode != Mode::Formula;
    let formula = a.mode != Mode::Brute;

    let census: Option<StrataCensus> = if brute {
        Some(census_detailed(&f, r, &a.run.census_options())?.census)
    } else {
        None
    };
    // the closed forms need r ≥ 2; brute mode alone still works at r = 1
    let polys = if formula || r >= 2 { Some(stratum_polys(r)?) } else { None };
    let theorem = if r >= 2 { Some(theorem_a(r)?.eval_int(q as i64)?) } else { None };

    let mut rows = Vec::new();
    for label in StratumLabel::ALL {
        let stats = census.as_ref().map(|c| c.stats(label));
        let (size_formula, orbits_formula) = match (&polys, formula) {
            (Some(p), true) => {
                let sp = &p[label.index()];
                (Some(sp.size.eval_int(q as i64)?), Some(sp.orbits.eval_int(q as i64)?))
            }
            _ => (None, None),
        };
        rows.push(Row {
            label,
            size: stats.map(|s| s.size),
            orbits: stats.map(|s| s.orbits),
            stab: match stats {
                Some(s) => s.stab(),
                None => Some(label.stabilizer_order(q)),
            },
            size_formula,
            orbits_formula,
        });
    }

    let total_orbits: BigInt = match &census {
        Some(c) => BigInt::from(c.total_orbits()),
        None => rows.iter().filter_map(|r| r.orbits_formula.clone()).sum(),
    };
    let total_size: BigInt = match &census {
        Some(c) => BigInt::from(c.total_size()),
        None => rows.iter().filter_map(|r| r.size_formula.clone()).sum(),
    };
    let cells_match = rows.iter().all(|row| row.matches(q).unwrap_or(true));
    let uniform = census.as_ref().is_none_or(|c| {
        StratumLabel::ALL.iter().all(|&l| c.stats(l).size == 0 || c.stats(l).stab() == Some(l.stabilizer_order(q)))
    });
    let theorem_match = theorem.as_ref().is_none_or(|t| *t == total_orbits);
    let all_match = cells_match && uniform && theorem_match;

    match a.format {
        Format::Json => {
            let mut strata = Map::new();
            for row in &rows {
                let mut cell = Map::new();
                cell.insert("size".into(), opt_json(row.size.map(BigInt::from).as_ref(), &row.size_formula));
                cell.insert("orbits".into(), opt_json(row.orbits.map(BigInt::from).as_ref(), &row.orbits_formula));
                cell.insert("stab".into(), json!(row.stab));
                if a.mode == Mode::Both {
                    cell.insert("size_formula".into(), big_opt(&row.size_formula));
                    cell.insert("orbits_formula".into(), big_opt(&row.orbits_formula));
                    cell.insert("match".into(), json!(row.matches(q)));
                }
                strata.insert(row.label.as_str().into(), Value::Object(cell));
            }
            let report = json!({
                "p": f.p(),
                "k": f.k(),
                "q": f.q(),
                "r": r,
                "mode": format!("{:?}", a.mode).to_lowercase(),
                "strata": strata,
                "total_size": bigint_to_json(&total_size),
                "total_orbits": bigint_to_json(&total_orbits),
                "theorem_a": big_opt(&theorem),
                "match": all_match,
            });
            emit(out, &report)?;
        }
        Format::Csv => {
            writeln!(out, "stratum,size,orbits,stab,size_formula,orbits_formula,match")?;
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    row.label,
                    cell_str(row.size.map(BigInt::from).as_ref().or(row.size_formula.as_ref())),
                    cell_str(row.orbits.map(BigInt::from).as_ref().or(row.orbits_formula.as_ref())),
                    row.stab.map(|s| s.to_string()).unwrap_or_default(),
                    cell_str(row.size_formula.as_ref()),
                    cell_str(row.orbits_formula.as_ref()),
                    row.matches(q).map(|m| m.to_string()).unwrap_or_default(),
                )?;
            }
            let hom = BigInt::from(q * (q * q - 1)).pow(r);
            writeln!(
                out,
                "total,{},{},,{},{},{}",
                total_size,
                total_orbits,
                if formula { hom.to_string() } else { String::new() },
                cell_str(theorem.as_ref()),
                all_match
            )?;
        }
        Format::Text => {
            writeln!(out, "q = {} (p = {}, k = {}), r = {}", f.q(), f.p(), f.k(), r)?;
            writeln!(
                out,
                "{:<6}{:>14}{:>12}{:>8}{:>16}{:>16}  match",
                "label", "size", "orbits", "stab", "size_formula", "orbits_formula"
            )?;
            for row in &rows {
                writeln!(
                    out,
                    "{:<6}{:>14}{:>12}{:>8}{:>16}{:>16}  {}",
                    row.label.as_str(),
                    cell_str(row.size.map(BigInt::from).as_ref().or(row.size_formula.as_ref())),
                    cell_str(row.orbits.map(BigInt::from).as_ref().or(row.orbits_formula.as_ref())),
                    row.stab.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                    cell_str(row.size_formula.as_ref()),
                    cell_str(row.orbits_formula.as_ref()),
                    row.matches(q).map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
                )?;
            }
            writeln!(out, "total orbits {total_orbits}, closed form {}", cell_str(theorem.as_ref()))?;
            writeln!(out, "match: {all_match}")?;
        }
    }
    Ok(exit_for(all_match))
}

fn opt_json(brute: Option<&BigInt>, formula: &Option<BigInt>) -> Value {
    big_opt(&brute.cloned().or_else(|| formula.clone()))
}

fn big_opt(v: &Option<BigInt>) -> Value {
    v.as_ref().map_or(Value::Null, bigint_to_json)
}

fn cell_str(v: Option<&BigInt>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let f = field(&a.field)?;
    if a.r == 0 {
        return Err(Failure::invalid("rank must be at least 1"));
    }
    let suites = if a.suites.is_empty() { Suite::ALL.to_vec() } else { a.suites.clone() };
    let opts = VerifyOptions { census: a.run.census_options(), seed: a.seed, samples: a.samples };
    let mut reports = Vec::new();
    for &s in &suites {
        reports.push(run_suite(&f, a.r, s, &opts)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    match a.format {
        Format::Json => {
            let list: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite.as_str(),
                        "pass": r.pass,
                        "summary": r.summary,
                        "counterexample": r.counterexample.as_ref().map(|c| rep_to_json(&f, c)),
                    })
                })
                .collect();
            emit(out, &json!({"p": f.p(), "k": f.k(), "q": f.q(), "r": a.r, "suites": list, "pass": pass}))?;
        }
        Format::Csv => {
            writeln!(out, "suite,pass,summary")?;
            for r in &reports {
                writeln!(out, "{},{},\"{}\"", r.suite, r.pass, r.summary.replace('"', "\"\""))?;
            }
        }
        Format::Text => {
            for r in &reports {
                if reports.len() == 1 {
                    writeln!(out, "{r}")?;
                } else {
                    writeln!(out, "{}: {r}", r.suite)?;
                }
                if let Some(c) = &r.counterexample {
                    writeln!(out, "  counterexample: {}", rep_to_json(&f, c))?;
                }
            }
        }
    }
    Ok(exit_for(pass))
}

fn print_poly(out: &mut dyn Write, p: &CountPoly, at: Option<i64>) -> std::io::Result<()> {
    match at {
        Some(x) => {
            let v = p.eval(&BigRational::from_integer(x.into()));
            writeln!(out, "{}", rational_to_json(&v))
        }
        None => writeln!(out, "{}", p.to_json()),
    }
}

fn cmd_epoly(a: &EpolyArgs, out: &mut dyn Write) -> CliResult {
    print_poly(out, &e_poly(a.family, a.r)?, a.eval)?;
    Ok(EXIT_OK)
}

fn cmd_poincare(a: &PoincareArgs, out: &mut dyn Write) -> CliResult {
    let guard = a.guard.unwrap_or_else(|| default_guard(a.r));
    print_poly(out, &poincare(a.family, a.r, guard)?, a.eval)?;
    Ok(EXIT_OK)
}

fn cmd_order(a: &OrderArgs, out: &mut dyn Write) -> CliResult {
    if a.n == 0 {
        return Err(Failure::invalid("matrix size must be at least 1"));
    }
    let family = match a.family {
        OrderFamily::Sl => GroupFamily::Sl,
        OrderFamily::Gl => GroupFamily::Gl,
    };
    let p = match a.r {
        Some(0) => return Err(Failure::invalid("rank must be at least 1")),
        Some(r) => hom_count_poly(family, a.n, r),
        None => group_order_poly(family, a.n),
    };
    print_poly(out, &p, a.eval)?;
    Ok(EXIT_OK)
}

fn cmd_classify(a: &ClassifyArgs, input: &mut dyn Read, out: &mut dyn Write) -> CliResult {
    let f = field(&a.field)?;
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("bad JSON: {e}")))?;
    let rep = rep_from_json(&f, &v)?;
    let label = classify(&f, &rep);
    let w = if a.witness {
        witness(&f, &rep).map_or(Value::Null, |w| witness_to_json(&f, &w))
    } else {
        Value::Null
    };
    writeln!(out, "{}", json!({"label": label.as_str(), "witness": w}))?;
    Ok(EXIT_OK)
}

fn cmd_euler(a: &EulerArgs, out: &mut dyn Write) -> CliResult {
    let table = euler_table(a.r)?;
    let ok = table == EulerTable::closed_form(a.r)?;
    let names = ["chi", "chi_smooth", "chi_singular", "chi_singular_smooth", "chi_singular_singular"];
    let mut obj = Map::new();
    obj.insert("r".into(), json!(a.r));
    for (name, v) in names.iter().zip(table.as_array()) {
        obj.insert((*name).into(), bigint_to_json(&v));
    }
    obj.insert("match".into(), json!(ok));
    emit(out, &Value::Object(obj))?;
    Ok(exit_for(ok))
}
