//! Command-line front end.
//!
//! Exit codes: 0 pass or holds, 1 counterexample or failed verification,
//! 2 budget exceeded, 3 invalid input.

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::axioms::{
    check_axioms, check_essential_dictatorship, check_independence, check_unanimity,
    independence_violation, Axiom, Caf, Witness,
};
use crate::document::{jsonl_line, load_caf, CafDocument, LoadedCaf};
use crate::error::{Error, Result};
use crate::model::{Budget, Category, CategoryNames, Params};
use crate::rules::{table1_params, table1_plurality, table1_profiles, table1_top, RuleSpec};
use crate::search::{enumerate_independent_cafs, SearchSpec, TableConstraint};
use crate::theorem_lab::{
    extract_dictator_exhaustive, extract_dictator_pivotal, verify_claim, Claim, ClaimOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Environment variable naming a directory that overrides the embedded golden files.
pub const GOLDEN_DIR_ENV: &str = "CLASSAGG_GOLDEN_DIR";

const TABLE1_GOLDEN: &str = include_str!("../golden/table1.txt");

#[derive(Parser, Debug)]
#[command(
    name = "classagg",
    version,
    about = "Exhaustive checks for classification aggregation functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check axioms on a CAF document or a named rule.
    Check(CheckArgs),
    /// Enumerate valid independent CAFs as JSONL.
    Enumerate(EnumerateArgs),
    /// Verify a theorem instance exhaustively.
    Verify(VerifyArgs),
    /// Extract the essential dictator of an independent CAF.
    Extract(ExtractArgs),
    /// Reproduce a worked example and compare it with the golden output.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct SizeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
}

impl SizeArgs {
    fn given(&self) -> Option<Result<Params>> {
        match (self.n, self.m, self.rho) {
            (None, None, None) => None,
            (Some(n), Some(m), Some(rho)) => Some(Params::new(n, m, rho)),
            _ => Some(Err(Error::InvalidParams(
                "give all of --n, --m and --rho".into(),
            ))),
        }
    }

    fn required(&self) -> Result<Params> {
        self.given().unwrap_or_else(|| {
            Err(Error::InvalidParams(
                "--n, --m and --rho are required".into(),
            ))
        })
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Path to a CAF document.
    #[arg(long)]
    caf: Option<PathBuf>,
    /// Named rule: plurality-table1, plurality, dictator:D, essential:D:PERM, majority:tie=P.
    #[arg(long)]
    rule: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    size: SizeArgs,
    /// Comma-separated axioms; all of them by default.
    #[arg(long, value_delimiter = ',')]
    axioms: Vec<String>,
    #[arg(long, default_value_t = Budget::default().0)]
    budget: u64,
    /// Render two categories as p/q.
    #[arg(long)]
    letters: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    size: SizeArgs,
    /// Comma-separated axioms required on top of validity.
    #[arg(long, value_delimiter = ',')]
    require: Vec<String>,
    /// Restrict tables to alpha(p, ..., p) = p.
    #[arg(long)]
    unanimous_tables: bool,
    #[arg(long, default_value_t = Budget::default().0)]
    budget: u64,
    /// Category-symmetry pruning.
    #[arg(long)]
    prune: bool,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the JSONL stream here and the report to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    claim: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    #[arg(long, default_value_t = Budget::default().0)]
    budget: u64,
    #[arg(long)]
    prune: bool,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtractMethod {
    Pivotal,
    Exhaustive,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long, value_enum, default_value_t = ExtractMethod::Pivotal)]
    method: ExtractMethod,
    #[arg(long, default_value_t = Budget::default().0)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoName {
    Table1,
}

#[derive(Args, Debug)]
struct DemoArgs {
    name: DemoName,
    /// Directory holding the golden files; overrides the built-in copy.
    #[arg(long)]
    golden_dir: Option<PathBuf>,
}

/// Failure carrying its own exit code and a structured message.
struct Exit {
    code: i32,
    error: Error,
}

impl From<Error> for Exit {
    fn from(error: Error) -> Self {
        Exit {
            code: exit_code(&error),
            error,
        }
    }
}

/// Exit code for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::VerificationFailed(_)
        | Error::PreconditionFailed(_)
        | Error::NotABijection(_)
        | Error::NoWitness { .. } => EXIT_FAIL,
        _ => EXIT_INVALID,
    }
}

fn error_json(error: &Error) -> String {
    serde_json::json!({"error": {"kind": error.kind(), "message": error.to_string()}}).to_string()
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    invocation: Vec<String>,
}

impl Io<'_> {
    fn report<T: Serialize>(&mut self, value: &T, to_stderr: bool) -> Result<()> {
        let mut value = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
        if let Value::Object(map) = &mut value {
            map.insert("invocation".into(), self.invocation.clone().into());
        }
        let text = serde_json::to_string_pretty(&value).expect("valid JSON value");
        let sink: &mut dyn Write = if to_stderr {
            &mut *self.stderr
        } else {
            &mut *self.stdout
        };
        writeln!(sink, "{text}")?;
        Ok(())
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn dispatch(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            return if shown {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            } else {
                let _ = write!(stderr, "{text}");
                EXIT_INVALID
            };
        }
    };
    let mut io = Io {
        stdout,
        stderr,
        invocation: argv.iter().skip(1).cloned().collect(),
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run(cli.command, &mut io)));
    let result = match outcome {
        Ok(result) => result,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            Err(Exit {
                code: EXIT_INVALID,
                error: Error::InvalidParams(format!("internal error: {message}")),
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(Exit { code, error }) => {
            let _ = writeln!(io.stderr, "{}", error_json(&error));
            code
        }
    }
}

fn run(command: Command, io: &mut Io) -> std::result::Result<i32, Exit> {
    match command {
        Command::Check(args) => run_check(args, io),
        Command::Enumerate(args) => run_enumerate(args, io),
        Command::Verify(args) => run_verify(args, io),
        Command::Extract(args) => run_extract(args, io),
        Command::Demo(args) => run_demo(args, io),
    }
}

fn load_source(source: &Source, size: &SizeArgs, budget: Budget) -> Result<(String, LoadedCaf)> {
    if let Some(path) = &source.caf {
        let doc = load_caf(path)?;
        if let Some(params) = size.given() {
            let params = params?;
            if params != doc.params() {
                return Err(Error::Mismatch(format!(
                    "document is for {}, flags say {params}",
                    doc.params()
                )));
            }
        }
        return Ok((path.display().to_string(), doc.load(budget)?));
    }
    let name = source.rule.as_deref().expect("clap enforces one source");
    let rule: RuleSpec = name.parse()?;
    let params = match (size.given(), rule.fixed_params()) {
        (Some(p), _) => p?,
        (None, Some(p)) => p,
        (None, None) => {
            return Err(Error::InvalidParams(format!(
                "rule {name} needs --n, --m and --rho"
            )))
        }
    };
    let doc = CafDocument::Rule { params, rule };
    Ok((name.to_string(), doc.load(budget)?))
}

fn parse_axioms(names: &[String]) -> Result<Vec<Axiom>> {
    names.iter().map(|s| s.trim().parse()).collect()
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    source: String,
    params: Params,
    passed: bool,
    reports: Vec<Value>,
}

fn run_check(args: CheckArgs, io: &mut Io) -> std::result::Result<i32, Exit> {
    let budget = Budget(args.budget);
    let (source, loaded) = load_source(&args.source, &args.size, budget)?;
    let axioms = if args.axioms.is_empty() {
        Axiom::ALL.to_vec()
    } else {
        parse_axioms(&args.axioms)?
    };
    let caf = loaded.caf();
    let params = caf.params();
    let names = CategoryNames {
        letters: args.letters,
    };
    let mut reports = check_axioms(caf, &axioms, budget)?;
    if let LoadedCaf::Rule(RuleSpec::PluralityTable1, _) = &loaded {
        // the fixture's published pair, confirmed by evaluation
        let (c, c_prime) = table1_profiles();
        if let Some(w) = independence_violation(caf, &c, &c_prime) {
            for r in reports
                .iter_mut()
                .filter(|r| r.axiom == Axiom::Independence)
            {
                r.witness = Some(w.clone());
            }
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    for r in reports.iter().filter(|r| !r.passed) {
        let summary = r
            .witness
            .as_ref()
            .map(|w| w.describe(params.rho(), names))
            .unwrap_or_default();
        let _ = writeln!(io.stderr, "{}: fail: {summary}", r.axiom);
    }
    let reports = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("plain report");
            if let Some(w) = &r.witness {
                v["summary"] = w.describe(params.rho(), names).into();
            }
            v
        })
        .collect();
    io.report(
        &CheckReport {
            command: "check",
            source,
            params,
            passed,
            reports,
        },
        false,
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

fn run_enumerate(args: EnumerateArgs, io: &mut Io) -> std::result::Result<i32, Exit> {
    let params = args.size.required()?;
    let mut spec = SearchSpec::new(params)
        .budget(args.budget)
        .prune(args.prune)
        .workers(args.workers);
    if args.unanimous_tables {
        spec = spec.constraint(TableConstraint::UnanimousOnConstants);
    }
    for axiom in parse_axioms(&args.require)? {
        spec = spec.require(axiom);
    }
    let outcome = enumerate_independent_cafs(&spec)?;
    let mut stream = String::new();
    for caf in &outcome.cafs {
        stream.push_str(&jsonl_line(caf));
        stream.push('\n');
    }
    let mut report = serde_json::to_value(&outcome.report).map_err(|e| Error::Io(e.to_string()))?;
    report["command"] = "enumerate".into();
    match &args.out {
        Some(path) => {
            fs::write(path, stream).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            io.report(&report, false)?;
        }
        None => {
            io.stdout
                .write_all(stream.as_bytes())
                .map_err(Error::from)?;
            io.report(&report, true)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs, io: &mut Io) -> std::result::Result<i32, Exit> {
    let claim: Claim = args.claim.parse()?;
    let (m, rho) = match (claim, args.m, args.rho) {
        (_, Some(m), Some(rho)) => (m, rho),
        (Claim::Prop1, m, rho) => (m.unwrap_or(2), rho.unwrap_or(2)),
        _ => return Err(Error::InvalidParams(format!("claim {claim} needs --m and --rho")).into()),
    };
    let params = Params::new(args.n, m, rho)?;
    let options = ClaimOptions {
        budget: args.budget,
        prune: args.prune,
        workers: args.workers,
    };
    let verdict = verify_claim(claim, &params, options)?;
    let mut report = serde_json::to_value(&verdict).map_err(|e| Error::Io(e.to_string()))?;
    report["command"] = "verify".into();
    io.report(&report, false)?;
    if !verdict.holds {
        let _ = writeln!(io.stderr, "{claim} does not hold at {params}");
    }
    Ok(if verdict.holds { EXIT_OK } else { EXIT_FAIL })
}

fn run_extract(args: ExtractArgs, io: &mut Io) -> std::result::Result<i32, Exit> {
    let budget = Budget(args.budget);
    let (source, loaded) = load_source(&args.source, &args.size, budget)?;
    let caf = loaded.independent().ok_or_else(|| {
        Error::InvalidParams(format!("{source} is not given as per-object tables"))
    })?;
    let report = match args.method {
        ExtractMethod::Pivotal => extract_dictator_pivotal(&caf, budget)?,
        ExtractMethod::Exhaustive => extract_dictator_exhaustive(&caf, budget)?,
    };
    let mut value = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    value["command"] = "extract".into();
    value["source"] = source.into();
    value["params"] = serde_json::to_value(caf.params_ref()).expect("plain struct");
    io.report(&value, false)?;
    Ok(EXIT_OK)
}

fn golden_table1(dir: Option<&Path>) -> Result<String> {
    let dir = dir
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(GOLDEN_DIR_ENV).map(PathBuf::from));
    match dir {
        Some(dir) => {
            let path = dir.join("table1.txt");
            fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => Ok(TABLE1_GOLDEN.to_string()),
    }
}

fn run_demo(args: DemoArgs, io: &mut Io) -> std::result::Result<i32, Exit> {
    let DemoName::Table1 = args.name;
    let rendered = render_table1()?;
    let golden = golden_table1(args.golden_dir.as_deref())?;
    io.stdout
        .write_all(rendered.as_bytes())
        .map_err(Error::from)?;
    if rendered == golden {
        let _ = writeln!(io.stderr, "table1: matches golden output");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(io.stderr, "table1: differs from golden output");
        for (i, (got, want)) in rendered.lines().zip(golden.lines()).enumerate() {
            if got != want {
                let _ = writeln!(io.stderr, "line {}:\n  want: {want}\n  got:  {got}", i + 1);
            }
        }
        let (a, b) = (rendered.lines().count(), golden.lines().count());
        if a != b {
            let _ = writeln!(io.stderr, "line count: want {b}, got {a}");
        }
        Ok(EXIT_FAIL)
    }
}

/// The plurality example: both profiles, both outputs, and the axiom verdicts.
pub fn render_table1() -> Result<String> {
    let params = table1_params();
    let plurality = table1_plurality();
    let (c, c_prime) = table1_profiles();
    let names = CategoryNames { letters: true };
    let rho = params.rho();
    let objects = ["x", "y", "z"];
    let name = |cat: Category| names.name(cat, rho);
    let out_c = plurality.evaluate(&c);
    let out_cp = plurality.evaluate(&c_prime);

    let mut text = String::new();
    text.push_str("Table 1: plurality rule with tie-breaking, n=3, m=3, rho=2\n");
    let top = table1_top();
    let top: Vec<String> = objects
        .iter()
        .zip(top.categories())
        .map(|(x, &p)| format!("{x}->{}", name(p)))
        .collect();
    text.push_str(&format!("maximal element of T: {}\n\n", top.join(" ")));
    text.push_str("object | c1 c2 c3 | alpha(c) | c'1 c'2 c'3 | alpha(c')\n");
    text.push_str("-------+----------+----------+-------------+----------\n");
    for (x, label) in objects.iter().enumerate() {
        let row = |p: &crate::model::Profile| -> Vec<String> {
            p.members().iter().map(|m| name(m.get(x))).collect()
        };
        let (a, b) = (row(&c), row(&c_prime));
        text.push_str(&format!(
            "{label:<6} | {:<2} {:<2} {:<2} | {:<8} | {:<3} {:<3} {:<3} | {}\n",
            a[0],
            a[1],
            a[2],
            name(out_c[x]),
            b[0],
            b[1],
            b[2],
            name(out_cp[x])
        ));
    }
    text.push('\n');

    let budget = Budget::default();
    let unanimity = check_unanimity(&plurality);
    text.push_str(&format!(
        "unanimity: {}\n",
        if unanimity.passed { "pass" } else { "fail" }
    ));
    // the example's own pair, rather than the first violation a scan finds
    let x = (0..params.m())
        .find(|&x| c.column(x).ok() == c_prime.column(x).ok() && out_c[x] != out_cp[x]);
    match x {
        Some(x) => {
            let column = c.column(x)?;
            text.push_str(&format!(
                "independence: fail at object {}: column ({}) in both profiles, alpha(c) = {}, alpha(c') = {}\n",
                objects[x],
                names.join(column.entries(), rho),
                name(out_c[x]),
                name(out_cp[x])
            ));
        }
        None => {
            let independence = check_independence(&plurality, budget)?;
            let verdict = match &independence.report.witness {
                Some(w @ Witness::IndependenceViolation { .. }) => {
                    format!("fail: {}", w.describe(rho, names))
                }
                _ => "pass".to_string(),
            };
            text.push_str(&format!("independence: {verdict}\n"));
        }
    }
    let dictator = check_essential_dictatorship(&plurality, budget)?;
    text.push_str(&format!(
        "essential dictatorship: {}\n",
        match dictator {
            Some(d) => format!("individual {}", d.individual),
            None => "none".to_string(),
        }
    ));
    Ok(text)
}
