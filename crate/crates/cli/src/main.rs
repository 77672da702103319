use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};

use lln_core::arith::FactorBudget;
use lln_core::classnum::{class_number, tally_class_numbers};
use lln_core::families::{generate, FamilyId};
use lln_core::lehmer::{half_power, has_primitive_divisor, lehmer_number_abs, LehmerParams, PrimitiveDivisor};
use lln_core::pell::{solutions, PellForm};
use lln_core::search::{brute_force, parse_corpus, verify_corpus, SolutionTuple};
use lln_core::solver::{
    classify_small_n, condition_report, solve, verify_certificate, Certificate, Outcome,
    ProblemInstance, Verdict,
};

mod render;

macro_rules! out {
    ($($arg:tt)*) => {
        put(format_args!($($arg)*))
    };
}

/// Writes one line to stdout. A closed pipe ends the process quietly.
fn put(args: fmt::Arguments) {
    let mut stdout = io::stdout().lock();
    let written = stdout.write_fmt(args).and_then(|()| stdout.write_all(b"\n"));
    match written {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => panic!("cannot write to stdout: {e}"),
    }
}

#[derive(Parser, Debug)]
#[command(name = "lln", about = "Solve, search and certify a*x^2 + b^(2l) = 4*y^n")]
struct Cli {
    /// Emit JSON on stdout.
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated rows on stdout.
    #[arg(long, global = true)]
    tsv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(short = 'a', allow_negative_numbers = true)]
    a: BigInt,
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: BigInt,
    #[arg(short = 'l', default_value_t = 1)]
    l: u32,
    #[arg(short = 'n')]
    n: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an instance and print the verdict with its certificate.
    Solve(InstanceArgs),
    /// Brute-force search over 1 <= y <= y-max.
    Search {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 10_000)]
        y_max: u64,
        /// Worker threads; the y-range is split into this many chunks.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Repeat the search for every l from -l up to this value.
        #[arg(long)]
        l_max: Option<u32>,
    },
    /// Members of the infinite families for a = 7, n = 3.
    Families {
        /// F1 .. F6; all families when omitted.
        #[arg(long)]
        id: Option<FamilyId>,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Solutions of u^2 - D v^2 = N for N in {1, -1, 4, -4}.
    Pell {
        #[arg(long)]
        d: BigInt,
        #[arg(long = "n-const", allow_negative_numbers = true)]
        n_const: i64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Keep only solutions with u and v both odd.
        #[arg(long)]
        odd: bool,
    },
    /// Class number h(-a), or the list of a <= bound with a given h.
    Classnum {
        #[arg(short = 'a', required_unless_present = "tally")]
        a: Option<u64>,
        #[arg(long, requires_all = ["h", "bound"])]
        tally: bool,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Lehmer pair data for (u, v, p, n); without -u/-v, the small-n case analysis for p.
    Lehmer {
        #[arg(short = 'u', allow_negative_numbers = true, requires = "v")]
        u: Option<BigInt>,
        #[arg(short = 'v', allow_negative_numbers = true, requires = "u")]
        v: Option<BigInt>,
        #[arg(short = 'p')]
        p: BigInt,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Check every tuple of a corpus file.
    VerifyCorpus { path: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Human,
    Json,
    Tsv,
}

enum Failure {
    /// Exit 1: a check ran and did not pass.
    Verification,
    /// Exit 2: the input could not be used.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.json {
        Mode::Json
    } else if cli.tsv {
        Mode::Tsv
    } else {
        Mode::Human
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(args, mode),
        Command::Search { instance, y_max, threads, l_max } => {
            run_search(instance, y_max, threads, l_max, mode)
        }
        Command::Families { id, count } => run_families(id, count, mode),
        Command::Pell { d, n_const, count, odd } => run_pell(d, n_const, count, odd, mode),
        Command::Classnum { a, tally, h, bound } => run_classnum(a, tally, h, bound, mode),
        Command::Lehmer { u, v, p, n } => run_lehmer(u, v, p, n, mode),
        Command::VerifyCorpus { path } => run_verify(path, mode),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn instance(args: InstanceArgs) -> Result<ProblemInstance, Failure> {
    ProblemInstance::new(args.a, args.b, args.l, args.n).map_err(usage)
}

fn run_solve(args: InstanceArgs, mode: Mode) -> CmdResult {
    let inst = instance(args)?;
    let verdict = solve(&inst);
    let report = condition_report(&inst);
    let cert_ok = verdict.certificate().is_none_or(verify_certificate);
    match mode {
        Mode::Json => emit(&json!({
            "instance": render::instance(&inst),
            "verdict": render::verdict(&verdict),
            "conditions": render::conditions(&report),
        })),
        Mode::Tsv => out!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            inst.a(),
            inst.b(),
            inst.l(),
            inst.n(),
            verdict.kind(),
            verdict.certificate().map_or("-", Certificate::kind)
        ),
        Mode::Human => print_verdict(&inst, &verdict, &report),
    }
    if cert_ok {
        Ok(())
    } else {
        eprintln!("certificate failed re-verification");
        Err(Failure::Verification)
    }
}

fn print_verdict(
    inst: &ProblemInstance,
    verdict: &Verdict,
    report: &lln_core::solver::ConditionReport,
) {
    out!("instance     {inst}");
    out!("verdict      {}", verdict.kind());
    if let Some(c) = verdict.certificate() {
        let body = match c {
            Certificate::TheoremCitation { theorem, .. } => theorem.to_string(),
            Certificate::ResidueContradiction(rc) => rc.to_string(),
            Certificate::Mod4Reduction { a } => format!("{a} x^2 + b^(2l) is never 0 mod 4"),
        };
        let status = if verify_certificate(c) { "verified" } else { "FAILED" };
        out!("certificate  {}: {body} [{status}]", c.kind());
    }
    match verdict {
        Verdict::NoSolution { evidence, .. } => {
            for s in evidence {
                out!("  {}", describe_subcase(s));
            }
        }
        Verdict::FamilyCase { families, screening } => {
            let ids: Vec<String> = families.iter().map(|f| f.to_string()).collect();
            out!("families     {}", ids.join(", "));
            out!("screening    b^l = {}: {screening:?}", inst.b().pow(inst.l()));
        }
        Verdict::SporadicExcluded { tuples, .. } => {
            for (t, r) in tuples {
                out!("  excluded {t}, residue {r}");
            }
        }
        Verdict::Undecided { reasons } => {
            for r in reasons {
                out!("  reason: {r}");
            }
        }
    }
    let pp = report.b_prime_power.as_ref().map_or("no".to_string(), |p| p.to_string());
    out!(
        "conditions   a mod 4 = {}, square-free = {}, b prime power = {pp}, residues = {}/{}, \
         congruence ok = {}, gcd(n, b) = 1: {}, h = {}, special = {}",
        report.a_mod4,
        report.is_squarefree,
        report.residue,
        report.residue_neg,
        report.congruence_ok,
        report.gcd_n_b_ok,
        report.h.map_or("-".to_string(), |h| h.to_string()),
        report.a_in_special_set
    );
}

fn describe_subcase(s: &lln_core::solver::Subcase) -> String {
    let head = match &s.detail {
        Some(d) => format!("{} ({d})", s.label),
        None => s.label.clone(),
    };
    let body = match &s.outcome {
        Outcome::Contradiction(rc) => format!("contradiction {rc}"),
        Outcome::Family { equation, families } => {
            let ids: Vec<String> = families.iter().map(|f| f.to_string()).collect();
            format!("family {equation} -> {}", ids.join(", "))
        }
        Outcome::Sporadic(ts) => {
            let ts: Vec<String> = ts.iter().map(SolutionTuple::to_string).collect();
            format!("sporadic {}", ts.join(" "))
        }
        Outcome::Rejected(r) => format!("rejected: {r}"),
    };
    format!("{head}: {body}")
}

fn run_search(args: InstanceArgs, y_max: u64, threads: usize, l_max: Option<u32>, mode: Mode) -> CmdResult {
    if y_max == 0 {
        return Err(usage("--y-max must be at least 1"));
    }
    let threads = threads.max(1);
    let l_min = args.l;
    let l_max = l_max.unwrap_or(l_min);
    if l_max < l_min {
        return Err(usage("--l-max must not be below -l"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(usage)?;
    let mut reports = Vec::new();
    for l in l_min..=l_max {
        let inst = ProblemInstance::new(args.a.clone(), args.b.clone(), l, args.n).map_err(usage)?;
        let report = pool.install(|| brute_force(&inst, y_max, threads));
        if mode == Mode::Human {
            let found = report.solutions.len();
            eprintln!(
                "{inst}: {found} solution{} with y <= {y_max} ({} chunks, {:?})",
                if found == 1 { "" } else { "s" },
                report.partitions,
                report.elapsed
            );
        }
        reports.push(report);
    }
    match mode {
        Mode::Json => emit(&Value::Array(reports.iter().map(render::search_report).collect())),
        Mode::Tsv => {
            for t in reports.iter().flat_map(|r| &r.solutions) {
                out!("{}\t{}\t{}\t{}\t{}\t{}", t.a, t.x, t.y, t.b, t.l, t.n);
            }
        }
        Mode::Human => {
            for t in reports.iter().flat_map(|r| &r.solutions) {
                out!("{t}");
            }
        }
    }
    Ok(())
}

fn run_families(id: Option<FamilyId>, count: usize, mode: Mode) -> CmdResult {
    let ids = id.map_or(FamilyId::ALL.to_vec(), |id| vec![id]);
    let members: Vec<_> = ids.into_iter().flat_map(|id| generate(id, count)).collect();
    match mode {
        Mode::Json => emit(&Value::Array(members.iter().map(render::member).collect())),
        Mode::Tsv => {
            for m in &members {
                out!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    m.id, m.index, m.u, m.v, m.x, m.y, m.blpow, m.congruence_residue
                );
            }
        }
        Mode::Human => {
            for m in &members {
                let pp = m.prime_power.as_ref().map_or("not a prime power".to_string(), |p| p.to_string());
                out!(
                    "{} #{}: (u, v) = ({}, {}), x = {}, y = {}, b^l = {} [{pp}], 4 b^l mod 7 = {}{}",
                    m.id,
                    m.index,
                    m.u,
                    m.v,
                    m.x,
                    m.y,
                    m.blpow,
                    m.congruence_residue,
                    if m.coprime { "" } else { ", gcd(x, y) > 1" }
                );
            }
        }
    }
    Ok(())
}

fn run_pell(d: BigInt, n: i64, count: usize, odd: bool, mode: Mode) -> CmdResult {
    let form = PellForm::new(d, n).map_err(usage)?;
    let found: Vec<_> = if odd {
        solutions(&form).take(count.saturating_mul(10)).filter(|s| s.is_odd()).take(count).collect()
    } else {
        solutions(&form).take(count).collect()
    };
    if found.is_empty() && mode == Mode::Human {
        eprintln!("u^2 - {}v^2 = {n} has no solutions", form.d());
    }
    match mode {
        Mode::Json => emit(&Value::Array(
            found
                .iter()
                .map(|s| json!({ "index": s.index(), "u": render::int(s.u()), "v": render::int(s.v()) }))
                .collect(),
        )),
        Mode::Tsv => {
            for s in &found {
                out!("{}\t{}\t{}", s.index(), s.u(), s.v());
            }
        }
        Mode::Human => {
            for s in &found {
                out!("({}, {})", s.u(), s.v());
            }
        }
    }
    Ok(())
}

fn run_classnum(a: Option<u64>, tally: bool, h: Option<u64>, bound: Option<u64>, mode: Mode) -> CmdResult {
    if tally {
        let (h, bound) = (h.expect("required by clap"), bound.expect("required by clap"));
        let list = tally_class_numbers(h, bound);
        match mode {
            Mode::Json => emit(&json!({ "h": h, "bound": bound, "count": list.len(), "values": list })),
            Mode::Tsv => list.iter().for_each(|a| out!("{a}")),
            Mode::Human => {
                out!("{} square-free a <= {bound} with h(-a) = {h}", list.len());
                let items: Vec<String> = list.iter().map(u64::to_string).collect();
                out!("{}", items.join(" "));
            }
        }
        return Ok(());
    }
    let a = a.expect("required by clap");
    let r = class_number(a).map_err(usage)?;
    match mode {
        Mode::Json => emit(&json!({ "a": r.a, "discriminant": r.discriminant, "h": r.h })),
        Mode::Tsv => out!("{}\t{}\t{}", r.a, r.discriminant, r.h),
        Mode::Human => out!("h(-{}) = {} (discriminant {})", r.a, r.h, r.discriminant),
    }
    Ok(())
}

fn run_lehmer(u: Option<BigInt>, v: Option<BigInt>, p: BigInt, n: u32, mode: Mode) -> CmdResult {
    let (Some(u), Some(v)) = (u, v) else {
        let subs = classify_small_n(&p, n).map_err(usage)?;
        match mode {
            Mode::Json => emit(&Value::Array(subs.iter().map(render::subcase).collect())),
            Mode::Tsv => {
                for s in &subs {
                    let line = describe_subcase(s);
                    let (_, body) = line.split_once(": ").unwrap_or(("", &line));
                    out!("{}\t{}\t{body}", s.label, s.detail.as_deref().unwrap_or("-"));
                }
            }
            Mode::Human => subs.iter().for_each(|s| out!("{}", describe_subcase(s))),
        }
        return Ok(());
    };
    let z = half_power(&u, &v, &p, n).map_err(usage)?;
    let params = LehmerParams::new(u.clone(), v.clone(), p.clone()).map_err(usage)?;
    let term = lehmer_number_abs(&params, n).map_err(usage)?;
    let primitive = has_primitive_divisor(&params, n, FactorBudget::default()).map_err(usage)?;
    let primitive_text = match &primitive {
        PrimitiveDivisor::Yes(q) => format!("yes ({q})"),
        PrimitiveDivisor::No => "no".to_string(),
        PrimitiveDivisor::Unknown => "unknown".to_string(),
    };
    let y = params.norm();
    match mode {
        Mode::Json => emit(&json!({
            "u": render::int(&u),
            "v": render::int(&v),
            "p": render::int(&p),
            "n": n,
            "real": render::int(&z.a),
            "imag": render::int(&z.b),
            "norm": render::int(&y),
            "lehmer_abs": render::int(&term),
            "primitive_divisor": primitive_text,
        })),
        Mode::Tsv => out!("{u}\t{v}\t{p}\t{n}\t{}\t{}\t{term}\t{primitive_text}", z.a, z.b),
        Mode::Human => {
            let (sign, mag) = if z.b.sign() == Sign::Minus { ("-", -&z.b) } else { ("+", z.b.clone()) };
            out!("(({u} + {v} sqrt(-{p}))/2)^{n} = ({} {sign} {mag} sqrt(-{p}))/2", z.a);
            out!("norm y = {y}, y^n = {}", y.pow(n));
            out!("|u_n| = {term}, primitive divisor: {primitive_text}");
        }
    }
    Ok(())
}

fn run_verify(path: PathBuf, mode: Mode) -> CmdResult {
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let entries = parse_corpus(&text).map_err(usage)?;
    let checks = verify_corpus(&entries);
    match mode {
        Mode::Json => emit(&Value::Array(checks.iter().map(render::corpus_check).collect())),
        _ => {
            for c in &checks {
                let e = &c.entry;
                let status = if c.passed() { "PASS" } else { "FAIL" };
                let residues = c.residues.map_or("-".to_string(), |(r, s)| format!("{r}/{s}"));
                if mode == Mode::Tsv {
                    out!(
                        "{}\t{status}\t{}\t{}\t{}\t{}\t{}\t{}\t{residues}\t{}",
                        e.line, e.a, e.x, e.y, e.b, e.l, e.n, c.failures.join("; ")
                    );
                } else {
                    let tail = if c.failures.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", c.failures.join("; "))
                    };
                    out!(
                        "{status} line {}: ({}, {}, {}, {}, {}, {}) residues {residues}, b {}{tail}",
                        e.line,
                        e.a,
                        e.x,
                        e.y,
                        e.b,
                        e.l,
                        e.n,
                        render::b_kind(&c.b_kind)
                    );
                }
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        Ok(())
    } else {
        eprintln!("{failed} of {} entries failed", checks.len());
        Err(Failure::Verification)
    }
}
