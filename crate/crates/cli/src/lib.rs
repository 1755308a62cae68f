//! Command-line front end: system files, element expressions, and the
//! `xshift` subcommands.
//!
//! Exit codes: 0 success, 1 a verification failed or an equality is false,
//! 2 bad input.

pub mod expr;
pub mod system;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crossed_shift::crossed::{equals, expectation_f, expectation_g, grande_h, normal_form, CrossedError, Restriction};
use crossed_shift::cylfun::CylFun;
use crossed_shift::oracle::{OracleError, OracleRegistry};
use crossed_shift::random::Sampler;
use crossed_shift::report::Report;
use crossed_shift::sft::{analyze, topfree_bruteforce, EvPerPoint, Symbol, Word};
use crossed_shift::suites::{SuiteContext, SuiteRegistry};

use expr::{print_element, print_fun, Env};
use system::SystemFile;

#[derive(Parser, Debug)]
#[command(name = "xshift", version, about = "Exact computations in crossed products of shifts of finite type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of the shift: column sums, closed symbol sets, topological freeness.
    Analyze {
        file: PathBuf,
        /// Cylinder depth for the brute-force freeness search.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Invariant measure of the fiber weights, with exact masses.
    Measure { file: PathBuf },
    /// Run identity suites.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Random cases per identity.
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
    /// Evaluate expressions.
    Eval {
        file: PathBuf,
        #[arg(long = "expr", required = true)]
        exprs: Vec<String>,
        #[arg(long, value_enum)]
        op: Op,
        /// Equality decider used by `--op equals`.
        #[arg(long, default_value = "normal-form")]
        oracle: String,
    },
    /// Restriction onto a predecessor-closed symbol set, with kernel witnesses.
    Quotient {
        file: PathBuf,
        /// Comma-separated symbols, e.g. `0` or `0,2`.
        #[arg(long)]
        keep: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// Cylinder indicator h at an eventually periodic point with h·Sⁿ·S*ᵐ·h = 0.
    Grandeh {
        file: PathBuf,
        /// Point as `pre:cycle`, e.g. `:01` for (01)^∞.
        #[arg(long)]
        point: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Longest cylinder tried.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    #[value(name = "normal-form")]
    NormalForm,
    #[value(name = "equals")]
    Equals,
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    #[value(name = "adjoint")]
    Adjoint,
    #[value(name = "product")]
    Product,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn input_error(msg: impl Into<String>) -> Self {
        Output { code: 2, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

/// Runs `xshift` with `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output::ok(text)
            };
        }
    };
    match cli.command {
        Command::Analyze { file, depth } => with_system(&file, |s| cmd_analyze(s, depth)),
        Command::Measure { file } => with_system(&file, cmd_measure),
        Command::Verify { file, suite, seed, depth, cases } => {
            with_system(&file, |s| cmd_verify(s, &suite, seed, depth, cases))
        }
        Command::Eval { file, exprs, op, oracle } => with_system(&file, |s| cmd_eval(s, &exprs, op, &oracle)),
        Command::Quotient { file, keep, seed, cases } => with_system(&file, |s| cmd_quotient(s, &keep, seed, cases)),
        Command::Grandeh { file, point, n, m, depth } => with_system(&file, |s| cmd_grandeh(s, &point, n, m, depth)),
    }
}

fn with_system(path: &PathBuf, f: impl FnOnce(&SystemFile) -> Output) -> Output {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Output::input_error(format!("{}: {e}", path.display())),
    };
    match SystemFile::parse(&text) {
        Ok(s) => f(&s),
        Err(e) => Output::input_error(format!("{}: {e}", path.display())),
    }
}

fn fmt_set(s: &BTreeSet<Symbol>) -> String {
    let parts: Vec<String> = s.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Pairs `n > m` with `n ≤ bound`; the coincidence condition is symmetric.
fn freeness_pairs(bound: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=bound).flat_map(|n| (0..n).map(move |m| (n, m)))
}

fn cmd_analyze(sys: &SystemFile, depth: usize) -> Output {
    let a = &sys.matrix;
    let rep = analyze(a);
    let mut out = String::new();
    let sums: Vec<String> = rep.column_sums.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "symbols: {}", sys.symbols.join(" "));
    let _ = writeln!(out, "column sums: {}", sums.join(" "));
    match rep.constant_p {
        Some(p) => {
            let _ = writeln!(out, "constant column sum: p = {p}");
        }
        None => {
            let _ = writeln!(out, "constant column sum: none");
        }
    }
    let _ = writeln!(out, "strongly connected: {}", yes_no(rep.strongly_connected));
    if rep.predecessor_closed.is_empty() {
        let _ = writeln!(out, "predecessor-closed sets: none (symbol-level irreducible)");
    } else {
        for c in &rep.predecessor_closed {
            let _ = writeln!(
                out,
                "predecessor-closed set: {} ({})",
                fmt_set(&c.symbols),
                if c.valid_subshift { "restriction is a shift of finite type" } else { "restriction has dead symbols" }
            );
        }
    }
    let witness = freeness_pairs(3).find_map(|(n, m)| topfree_bruteforce(a, n, m, depth).map(|w| (w, n, m)));
    let mut verdict =
        if rep.topologically_free() { "topologically free".to_string() } else { "not topologically free".to_string() };
    if let Some((w, n, m)) = &witness {
        let _ = write!(verdict, "; witness cylinder [{w}] for (n,m)=({n},{m})");
    }
    if !rep.predecessor_closed.is_empty() {
        let sets: Vec<String> = rep.predecessor_closed.iter().map(|c| fmt_set(&c.symbols)).collect();
        let _ = write!(verdict, "; predecessor-closed {}", sets.join(" "));
    }
    let _ = writeln!(out, "verdict: {verdict}");
    let (agree, code) = match (rep.topologically_free(), witness.is_some()) {
        (true, false) => ("agrees (no witness)", 0),
        (false, true) => ("agrees (witness found)", 0),
        (false, false) => ("inconclusive (no witness within bounds)", 0),
        (true, true) => ("DISAGREES: free verdict but a witness was found", 1),
    };
    let _ = writeln!(out, "brute force (n > m, n <= 3, depth <= {depth}): {agree}");
    Output { code, stdout: out, stderr: String::new() }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_measure(sys: &SystemFile) -> Output {
    let mu = &sys.measure;
    let mut out = String::new();
    if sys.weights.is_uniform() {
        let _ = writeln!(out, "weights: uniform");
    } else {
        let _ = writeln!(out, "weights:");
        for ((b, c), w) in sys.weights.edges() {
            let _ = writeln!(out, "  w({}) = {w}", Word(vec![*b, *c]));
        }
    }
    for (c, m) in mu.masses().iter().enumerate() {
        let _ = writeln!(out, "mass [{}] = {m}", sys.symbols[c]);
    }
    let _ = writeln!(out, "fully supported: {}", yes_no(mu.fully_supported()));
    let _ = writeln!(out, "stationary: {}", yes_no(mu.is_stationary()));
    Output::ok(out)
}

fn render_reports(reports: &[Report]) -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;
    for r in reports {
        let _ = writeln!(out, "{r}");
        ok &= r.all_passed();
    }
    (out, ok)
}

fn cmd_verify(sys: &SystemFile, suite: &str, seed: u64, depth: usize, cases: usize) -> Output {
    let registry = SuiteRegistry::standard();
    let ctx = SuiteContext { matrix: sys.matrix.clone(), measure: sys.measure.clone(), seed, depth, cases };
    let Some(reports) = registry.run(suite, &ctx) else {
        return Output::input_error(format!(
            "unknown suite `{suite}`; available: {}, all",
            registry.names().join(", ")
        ));
    };
    let (mut out, ok) = render_reports(&reports);
    let _ = writeln!(out, "overall: {}", if ok { "PASS" } else { "FAIL" });
    Output { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() }
}

fn cmd_eval(sys: &SystemFile, exprs: &[String], op: Op, oracle: &str) -> Output {
    let env = Env::new(&sys.matrix, &sys.functions);
    let mut xs = Vec::new();
    for (k, e) in exprs.iter().enumerate() {
        match env.parse(e) {
            Ok(x) => xs.push(x),
            Err(err) => return Output::input_error(format!("--expr #{}: {err}", k + 1)),
        }
    }
    let arity = match op {
        Op::Equals | Op::Product => 2,
        _ => 1,
    };
    if xs.len() != arity {
        return Output::input_error(format!("--op {op:?} takes {arity} expression(s), got {}", xs.len()));
    }
    let text = match op {
        Op::NormalForm => normal_form(&xs[0]).to_string(),
        Op::F => print_element(&expectation_f(&xs[0])),
        Op::G => print_fun(&expectation_g(&xs[0])),
        Op::Adjoint => print_element(&xs[0].adjoint()),
        Op::Product => print_element(&xs[0].mul(&xs[1])),
        Op::Equals => {
            let registry = OracleRegistry::standard(&sys.matrix, Some(&sys.measure));
            let Some(o) = registry.get(oracle) else {
                return Output::input_error(format!(
                    "unknown oracle `{oracle}`; available: {}",
                    registry.names().join(", ")
                ));
            };
            return match o.equal(&xs[0], &xs[1]) {
                Ok(true) => Output::ok("true\n".into()),
                Ok(false) => Output { code: 1, stdout: "false\n".into(), stderr: String::new() },
                Err(e @ OracleError::Unavailable { .. }) => Output::input_error(e.to_string()),
                Err(e) => Output { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
            };
        }
    };
    Output::ok(format!("{text}\n"))
}

fn parse_keep(sys: &SystemFile, text: &str) -> Result<BTreeSet<Symbol>, String> {
    let mut keep = BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let idx = match part.parse::<usize>() {
            Ok(i) => i,
            Err(_) => {
                sys.symbols.iter().position(|s| s == part).ok_or_else(|| format!("--keep: unknown symbol `{part}`"))?
            }
        };
        let s = sys.matrix.check_symbol(idx).map_err(|e| format!("--keep: {e}"))?;
        keep.insert(s);
    }
    if keep.is_empty() {
        return Err("--keep: empty symbol set".into());
    }
    Ok(keep)
}

fn cmd_quotient(sys: &SystemFile, keep: &str, seed: u64, cases: usize) -> Output {
    let a = &sys.matrix;
    let keep = match parse_keep(sys, keep) {
        Ok(k) => k,
        Err(e) => return Output::input_error(e),
    };
    let psi = match Restriction::new(a, &keep) {
        Ok(p) => p,
        Err(e) => return Output::input_error(format!("--keep {}: {e}", fmt_set(&keep))),
    };
    let sub = psi.sub_matrix();
    let mut out = String::new();
    let rows: Vec<String> = sub
        .rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(out, "restriction to V' = {}: matrix [{}]", fmt_set(&keep), rows.join(","));

    let mut report = Report::new(format!("restriction homomorphism onto {}", fmt_set(&keep)));
    let _ = writeln!(out, "kernel witnesses:");
    for c in a.symbols().filter(|c| !keep.contains(c)) {
        let f = CylFun::indicator(a, &Word(vec![c])).expect("single symbol is admissible");
        let img = psi.apply_fun(&f);
        let nonzero = !f.is_zero();
        let _ = writeln!(out, "  1_[{c}] -> {}", if img.is_zero() { "0" } else { "nonzero" });
        report.check(format!("1_[{c}] is a nonzero element of the kernel"), nonzero && img.is_zero(), || {
            format!("image {}", print_fun(&img))
        });
    }
    let one = crossed_shift::crossed::CrossedElement::one(a);
    let s = crossed_shift::crossed::CrossedElement::s(a);
    report.check("ψ(1) = 1", equals(&psi.apply(&one), &crossed_shift::crossed::CrossedElement::one(sub)), String::new);
    report.check("ψ(S) = S", equals(&psi.apply(&s), &crossed_shift::crossed::CrossedElement::s(sub)), String::new);
    let mut sampler = Sampler::new(a, seed);
    let (mut bad_mul, mut bad_adj, mut bad_add) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..cases {
        let x = sampler.element(2, 2, 2);
        let y = sampler.element(2, 2, 2);
        if !equals(&psi.apply(&x.mul(&y)), &psi.apply(&x).mul(&psi.apply(&y))) {
            bad_mul.push(k);
        }
        if !equals(&psi.apply(&x.adjoint()), &psi.apply(&x).adjoint()) {
            bad_adj.push(k);
        }
        if !equals(&psi.apply(&x.add(&y)), &psi.apply(&x).add(&psi.apply(&y))) {
            bad_add.push(k);
        }
    }
    let cases_of = |v: &Vec<usize>| format!("failing cases {v:?}");
    report.check(format!("ψ(xy) = ψ(x)ψ(y), {cases} products"), bad_mul.is_empty(), || cases_of(&bad_mul));
    report.check(format!("ψ(x*) = ψ(x)*, {cases} cases"), bad_adj.is_empty(), || cases_of(&bad_adj));
    report.check(format!("ψ(x + y) = ψ(x) + ψ(y), {cases} cases"), bad_add.is_empty(), || cases_of(&bad_add));
    let ok = report.all_passed();
    let _ = writeln!(out, "{report}");
    Output { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() }
}

fn cmd_grandeh(sys: &SystemFile, point: &str, n: usize, m: usize, depth: usize) -> Output {
    let a = &sys.matrix;
    let x0 = match EvPerPoint::parse(a, point) {
        None => return Output::input_error(format!("--point `{point}`: expected `pre:cycle` in digits")),
        Some(Err(e)) => return Output::input_error(format!("--point `{point}`: {e}")),
        Some(Ok(p)) => p,
    };
    match grande_h(a, &x0, n, m, depth) {
        Ok(h) => {
            let w = h.support().into_iter().next().expect("indicator of a nonempty cylinder");
            Output::ok(format!("point: {x0}\nh = 1_[{w}]\nverified: h*S^{n}*S^{m}'*h = 0\n"))
        }
        Err(e @ CrossedError::Precondition(_)) => Output::input_error(e.to_string()),
        Err(e) => Output { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
