//! The `trimat` command line.
//!
//! Every subcommand prints either plain text or, with `--json`, one JSON
//! object per line carrying `command`, `inputs` and the value(s). Numbers are
//! always full decimal strings.
//!
//! Exit codes: 0 on success, 1 when an identity fails, 2 on usage or parse
//! errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::analytic::{self, RealApprox, MIN_PRECISION};
use crate::exact::{self, word_count, BuiltinSeq, Sequence, SequenceSpec};
use crate::genfunc::{
    builtin_gf, matrix_gf_coefficients, scalar_gf_coefficients, BuiltinGf, GfKind,
};
use crate::identity::{
    builtin_corpus, check_identity, conjecture_probe, parse_corpus_file, parse_identity,
    CheckReport, SeqEnv,
};
use crate::matrix_seq::matrix;
use crate::sums::{sum_closed, sum_direct, Level, SumQuery, SumValue};
use crate::{Error, Index, Mat3, Rational};

pub const DEFAULT_BITS: u32 = 192;
pub const BITS_ENV: &str = "TRIMAT_BITS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trimat",
    version,
    about = "Exact Tribonacci and Tribonacci-Lucas toolkit"
)]
struct Cli {
    /// Emit one JSON record per result line.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact terms of T, K or a recurrence read from a TOML file.
    Eval {
        /// `T`, `K`, or a path to a spec file
        sequence: String,
        /// index `n` or inclusive range `lo..hi`
        #[arg(allow_hyphen_values = true)]
        index: Option<String>,
        #[arg(long = "n", allow_hyphen_values = true, conflicts_with = "index")]
        n: Option<String>,
    },
    /// The 3x3 matrix T_n or K_n.
    Matrix {
        sequence: String,
        #[arg(allow_negative_numbers = true)]
        index: Option<Index>,
        #[arg(long = "n", allow_negative_numbers = true, conflicts_with = "index")]
        n: Option<Index>,
    },
    /// The roots of x^3 - x^2 - x - 1.
    Roots {
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Binet evaluation with its distance from the exact term.
    Binet {
        sequence: String,
        #[arg(allow_negative_numbers = true)]
        index: Option<Index>,
        #[arg(long = "n", allow_negative_numbers = true, conflicts_with = "index")]
        n: Option<Index>,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Power series coefficients of a builtin generating function.
    Gf {
        /// T_POS, K_POS, T_NEG, K_NEG, TMAT_NEG or KMAT_NEG
        kind: GfKind,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Closed-form value of sum_{i<n} S_{-m i - j}.
    Sum {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "scalar")]
        level: Level,
        #[arg(long)]
        m: Index,
        #[arg(long, default_value_t = 0)]
        j: Index,
        #[arg(long)]
        n: Index,
        /// Also add the terms directly and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Check identities from a file or `--expr` over an index range.
    Check {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        expr: Option<String>,
        /// inclusive `lo..hi`
        #[arg(long, allow_hyphen_values = true, default_value = "-100..100")]
        range: String,
    },
    /// Check beyond a threshold N, then down to -M.
    Probe {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 20)]
        positive: Index,
        #[arg(long, default_value_t = 200)]
        negative: Index,
    },
    /// Run the builtin identity corpus.
    Corpus {
        #[arg(long, allow_hyphen_values = true, default_value = "-100..100")]
        range: String,
    },
    /// Time linear iteration against matrix powering.
    Bench {
        /// sizes |n| to time; defaults to 1000, 10000 and 100000
        #[arg(long = "n", allow_negative_numbers = true)]
        n: Vec<Index>,
    },
}

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    bits: u32,
}

type CmdResult = std::result::Result<i32, String>;

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

impl Ctx<'_> {
    fn record(
        &mut self,
        command: &str,
        inputs: Value,
        fields: Value,
    ) -> std::result::Result<(), String> {
        let mut obj = json!({ "command": command, "inputs": inputs });
        if let (Some(o), Value::Object(extra)) = (obj.as_object_mut(), fields) {
            o.extend(extra);
        }
        self.line(&obj.to_string())
    }

    fn line(&mut self, s: &str) -> std::result::Result<(), String> {
        writeln!(self.out, "{s}").map_err(|e| e.to_string())
    }

    fn warn(&mut self, s: &str) {
        let _ = writeln!(self.err, "warning: {s}");
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let bits = match default_bits() {
        Ok(b) => b,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        out,
        err,
        bits,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn default_bits() -> std::result::Result<u32, String> {
    match std::env::var(BITS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map_err(|_| format!("{BITS_ENV} must be a positive integer, got `{v}`"))
            .and_then(check_bits),
        Err(_) => Ok(DEFAULT_BITS),
    }
}

fn check_bits(bits: u32) -> std::result::Result<u32, String> {
    if bits < MIN_PRECISION {
        Err(format!(
            "precision must be at least {MIN_PRECISION} bits, got {bits}"
        ))
    } else {
        Ok(bits)
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> CmdResult {
    match command {
        Command::Eval { sequence, index, n } => {
            let target = index
                .or(n)
                .ok_or("missing index: give `n`, `lo..hi` or `--n=N`")?;
            cmd_eval(ctx, &sequence, &target)
        }
        Command::Matrix { sequence, index, n } => {
            let n = index.or(n).ok_or("missing index")?;
            cmd_matrix(ctx, &sequence, n)
        }
        Command::Roots { bits } => {
            let bits = check_bits(bits.unwrap_or(ctx.bits))?;
            cmd_roots(ctx, bits)
        }
        Command::Binet {
            sequence,
            index,
            n,
            bits,
        } => {
            let n = index.or(n).ok_or("missing index")?;
            let bits = check_bits(bits.unwrap_or(ctx.bits))?;
            cmd_binet(ctx, &sequence, n, bits)
        }
        Command::Gf { kind, count } => cmd_gf(ctx, kind, count),
        Command::Sum {
            family,
            level,
            m,
            j,
            n,
            oracle,
        } => {
            let family = builtin(&family)?;
            let q = lib(SumQuery::new(family, level, m, j, n))?;
            cmd_sum(ctx, &q, oracle)
        }
        Command::Check { file, expr, range } => {
            let (lo, hi) = parse_range(&range)?;
            let entries = match (file, expr) {
                (_, Some(e)) => vec![("expr".to_string(), e)],
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    lib(parse_corpus_file(&text))?
                }
                (None, None) => return Err("give a corpus file or --expr".into()),
            };
            cmd_check(ctx, "check", &entries, lo, hi)
        }
        Command::Probe {
            expr,
            positive,
            negative,
        } => cmd_probe(ctx, &expr, positive, negative),
        Command::Corpus { range } => {
            let (lo, hi) = parse_range(&range)?;
            cmd_check(ctx, "corpus", &builtin_corpus(), lo, hi)
        }
        Command::Bench { n } => {
            let sizes = if n.is_empty() {
                vec![1_000, 10_000, 100_000]
            } else {
                n
            };
            cmd_bench(ctx, &sizes)
        }
    }
}

fn builtin(name: &str) -> std::result::Result<BuiltinSeq, String> {
    BuiltinSeq::from_symbol(name)
        .ok_or_else(|| Error::UnknownSequence(name.to_string()).to_string())
}

/// `lo..hi`, both ends inclusive.
pub fn parse_range(s: &str) -> std::result::Result<(Index, Index), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range `lo..hi`, got `{s}`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<Index>()
            .map_err(|_| format!("bad range bound `{t}` in `{s}`"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi.trim_start_matches('='))?);
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi }.to_string());
    }
    Ok((lo, hi))
}

enum Target {
    One(Index),
    Range(Index, Index),
}

fn parse_target(s: &str) -> std::result::Result<Target, String> {
    if s.contains("..") {
        let (lo, hi) = parse_range(s)?;
        Ok(Target::Range(lo, hi))
    } else {
        s.trim()
            .parse()
            .map(Target::One)
            .map_err(|_| format!("expected an integer index or `lo..hi`, got `{s}`"))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecNumber {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
struct SpecFile {
    name: Option<String>,
    coefficients: Vec<SpecNumber>,
    initials: Vec<SpecNumber>,
}

fn spec_rational(v: &SpecNumber) -> std::result::Result<Rational, String> {
    match v {
        SpecNumber::Int(i) => Ok(Rational::from_integer(BigInt::from(*i))),
        SpecNumber::Text(t) => t
            .trim()
            .parse::<Rational>()
            .map_err(|_| format!("`{t}` is not an integer or fraction")),
    }
}

fn spec_integer(v: &SpecNumber) -> std::result::Result<BigInt, String> {
    let r = spec_rational(v)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(format!("coefficient {r} must be an integer"))
    }
}

/// Reads a recurrence from TOML:
///
/// ```toml
/// name = "P"
/// coefficients = [1, 1, 1]   # w(n) = a1 w(n-1) + a2 w(n-2) + a3 w(n-3)
/// initials = [0, 1, "1/2"]   # w(0), w(1), w(2)
/// ```
pub fn load_spec_file(path: &Path) -> std::result::Result<SequenceSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: SpecFile = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let coefficients = file
        .coefficients
        .iter()
        .map(spec_integer)
        .collect::<Result<_, _>>()?;
    let initials = file
        .initials
        .iter()
        .map(spec_rational)
        .collect::<Result<_, _>>()?;
    let name = file.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "spec".into())
    });
    lib(SequenceSpec::new(name, coefficients, initials))
}

fn cmd_eval(ctx: &mut Ctx<'_>, source: &str, target: &str) -> CmdResult {
    let seq: Sequence = match BuiltinSeq::from_symbol(source) {
        Some(b) => b.into(),
        None if Path::new(source).is_file() => load_spec_file(Path::new(source))?.into(),
        None => return Err(format!("`{source}` is neither T, K nor a spec file")),
    };
    let values: Vec<(Index, Rational)> = match parse_target(target)? {
        Target::One(n) => vec![(n, seq.eval(n))],
        Target::Range(lo, hi) => (lo..=hi)
            .zip(lib(exact::sequence_slice(&seq, lo, hi))?)
            .collect(),
    };
    let single = values.len() == 1 && !target.contains("..");
    for (n, v) in values {
        if ctx.json {
            ctx.record(
                "eval",
                json!({ "sequence": source, "n": n.to_string() }),
                json!({ "value": v.to_string() }),
            )?;
        } else if single {
            ctx.line(&v.to_string())?;
        } else {
            ctx.line(&format!("{n} {v}"))?;
        }
    }
    Ok(EXIT_OK)
}

fn mat_json<T: ToString>(m: &Mat3<T>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn cmd_matrix(ctx: &mut Ctx<'_>, source: &str, n: Index) -> CmdResult {
    let seq = builtin(source)?;
    let m = matrix(seq, n);
    if ctx.json {
        ctx.record(
            "matrix",
            json!({ "sequence": source, "n": n.to_string() }),
            json!({ "value": mat_json(&m) }),
        )?;
    } else {
        ctx.line(&m.to_string())?;
    }
    Ok(EXIT_OK)
}

fn digits_for(bits: u32) -> usize {
    (bits as usize * 3 / 10).max(1)
}

fn cmd_roots(ctx: &mut Ctx<'_>, bits: u32) -> CmdResult {
    let roots = analytic::tribonacci_roots(bits);
    let d = digits_for(bits);
    let alpha = format!("{:.*}", d, roots.alpha);
    let beta = (
        format!("{:.*}", d, roots.beta.re),
        format!("{:.*}", d, roots.beta.im),
    );
    let gamma = (
        format!("{:.*}", d, roots.gamma.re),
        format!("{:.*}", d, roots.gamma.im),
    );
    if ctx.json {
        ctx.record(
            "roots",
            json!({ "bits": bits.to_string() }),
            json!({
                "alpha": alpha,
                "beta": { "re": beta.0, "im": beta.1 },
                "gamma": { "re": gamma.0, "im": gamma.1 },
            }),
        )?;
    } else {
        ctx.line(&format!("alpha = {alpha}"))?;
        ctx.line(&format!("beta  = {:.*}", d, roots.beta))?;
        ctx.line(&format!("gamma = {:.*}", d, roots.gamma))?;
    }
    Ok(EXIT_OK)
}

fn cmd_binet(ctx: &mut Ctx<'_>, source: &str, n: Index, bits: u32) -> CmdResult {
    let seq = builtin(source)?;
    let value = analytic::binet(seq, n, bits);
    let exact = seq.eval(n);
    let residual = &value - &RealApprox::from_int(exact.clone(), bits);
    let d = digits_for(bits);
    let value_s = format!("{:.*}", d, value);
    let residual_s = format!("{:.*}", d, residual);
    if ctx.json {
        ctx.record(
            "binet",
            json!({ "sequence": source, "n": n.to_string(), "bits": bits.to_string() }),
            json!({ "value": value_s, "exact": exact.to_string(), "residual": residual_s }),
        )?;
    } else {
        ctx.line(&format!("value    = {value_s}"))?;
        ctx.line(&format!("exact    = {exact}"))?;
        ctx.line(&format!("residual = {residual_s}"))?;
    }
    Ok(EXIT_OK)
}

fn cmd_gf(ctx: &mut Ctx<'_>, kind: GfKind, count: usize) -> CmdResult {
    if count == 0 {
        return Err("--count must be at least 1".into());
    }
    let inputs = json!({ "kind": kind.name(), "count": count.to_string() });
    match builtin_gf(kind) {
        BuiltinGf::Scalar(gf) => {
            if !ctx.json {
                ctx.line(&format!("{kind} = {gf}"))?;
            }
            for (i, c) in lib(scalar_gf_coefficients(kind, count))?.iter().enumerate() {
                if ctx.json {
                    ctx.record(
                        "gf",
                        inputs.clone(),
                        json!({ "index": i.to_string(), "value": c.to_string() }),
                    )?;
                } else {
                    ctx.line(&format!("{i} {c}"))?;
                }
            }
        }
        BuiltinGf::Matrix(_) => {
            for (i, c) in lib(matrix_gf_coefficients(kind, count))?.iter().enumerate() {
                if ctx.json {
                    ctx.record(
                        "gf",
                        inputs.clone(),
                        json!({ "index": i.to_string(), "value": mat_json(c) }),
                    )?;
                } else {
                    ctx.line(&format!("[{i}]"))?;
                    ctx.line(&c.to_string())?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn sum_json(v: &SumValue) -> Value {
    match v {
        SumValue::Scalar(x) => Value::String(x.to_string()),
        SumValue::Matrix(m) => mat_json(m),
    }
}

fn cmd_sum(ctx: &mut Ctx<'_>, q: &SumQuery, oracle: bool) -> CmdResult {
    if q.offset_exceeds_stride() {
        ctx.warn(&format!(
            "offset j = {} is not below stride m = {}; evaluating the closed form anyway",
            q.j, q.m
        ));
    }
    let closed = lib(sum_closed(q))?;
    let direct = if oracle {
        Some(lib(sum_direct(q))?)
    } else {
        None
    };
    if ctx.json {
        let inputs = json!({
            "family": q.family.symbol(),
            "level": q.level.to_string(),
            "m": q.m.to_string(),
            "j": q.j.to_string(),
            "n": q.n.to_string(),
        });
        let mut fields = json!({ "value": sum_json(&closed) });
        if let Some(d) = &direct {
            fields["oracle"] = sum_json(d);
            fields["agree"] = Value::Bool(*d == closed);
        }
        ctx.record("sum", inputs, fields)?;
    } else {
        ctx.line(&closed.to_string())?;
        if let Some(d) = &direct {
            ctx.line("oracle:")?;
            ctx.line(&d.to_string())?;
            ctx.line(if *d == closed {
                "agree: yes"
            } else {
                "agree: no"
            })?;
        }
    }
    Ok(match direct {
        Some(d) if d != closed => EXIT_IDENTITY_FAILED,
        _ => EXIT_OK,
    })
}

fn report_json(rep: &CheckReport) -> Value {
    let first = rep.first_failure().map(
        |f| json!({ "n": f.n.to_string(), "lhs": f.lhs.to_string(), "rhs": f.rhs.to_string() }),
    );
    let mut v = json!({
        "verdict": rep.verdict.to_string(),
        "failure_count": rep.failure_count.to_string(),
        "first_failure": first,
    });
    if let Some(p) = rep.probe {
        v["probe"] = Value::String(p.to_string());
    }
    v
}

fn report_line(rep: &CheckReport, width: usize) -> String {
    let mut s = format!(
        "{:<width$}  {:<5}  failures={}",
        rep.name, rep.verdict, rep.failure_count
    );
    if let Some(f) = rep.first_failure() {
        s.push_str(&format!("  first: n={} lhs={} rhs={}", f.n, f.lhs, f.rhs));
    }
    s
}

fn cmd_check(
    ctx: &mut Ctx<'_>,
    command: &str,
    entries: &[(String, String)],
    lo: Index,
    hi: Index,
) -> CmdResult {
    let env = SeqEnv::new();
    let mut reports = Vec::with_capacity(entries.len());
    for (name, text) in entries {
        let ast = parse_identity(text).map_err(|e| format!("{name}: {e}"))?;
        let rep = check_identity(&ast, lo, hi, &env).map_err(|e| format!("{name}: {e}"))?;
        reports.push(rep.with_name(name.clone()));
    }
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for (rep, (_, text)) in reports.iter().zip(entries) {
        if ctx.json {
            ctx.record(
                command,
                json!({
                    "name": rep.name,
                    "identity": text,
                    "lo": lo.to_string(),
                    "hi": hi.to_string(),
                }),
                report_json(rep),
            )?;
        } else {
            ctx.line(&report_line(rep, width))?;
        }
    }
    Ok(if reports.iter().all(CheckReport::holds) {
        EXIT_OK
    } else {
        EXIT_IDENTITY_FAILED
    })
}

fn cmd_probe(ctx: &mut Ctx<'_>, expr: &str, positive: Index, negative: Index) -> CmdResult {
    let ast = parse_identity(expr).map_err(|e| e.to_string())?;
    let rep = lib(conjecture_probe(&ast, &SeqEnv::new(), positive, negative))?.with_name("expr");
    let outcome = rep.probe.expect("probe sets the outcome");
    if ctx.json {
        ctx.record(
            "probe",
            json!({
                "identity": expr,
                "positive": positive.to_string(),
                "negative": negative.to_string(),
            }),
            report_json(&rep),
        )?;
    } else {
        ctx.line(&format!("probe: {outcome} on {}..{}", rep.lo, rep.hi))?;
        ctx.line(&report_line(&rep, 4))?;
    }
    Ok(if rep.holds() {
        EXIT_OK
    } else {
        EXIT_IDENTITY_FAILED
    })
}

fn time<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn cmd_bench(ctx: &mut Ctx<'_>, sizes: &[Index]) -> CmdResult {
    if !ctx.json {
        ctx.line("n          iterative_ms  matrix_ms  speedup  words  agree")?;
    }
    let mut all_agree = true;
    for &size in sizes {
        let (iter, t_iter) = time(|| exact::tribonacci_iterative(size));
        let (pow, t_pow) = time(|| exact::tribonacci_matrix_power(size));
        let agree = iter == pow;
        all_agree &= agree;
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let speedup = ms(t_iter) / ms(t_pow).max(1e-6);
        let words = word_count(&pow);
        if ctx.json {
            ctx.record(
                "bench",
                json!({ "n": size.to_string() }),
                json!({
                    "iterative_ms": format!("{:.3}", ms(t_iter)),
                    "matrix_ms": format!("{:.3}", ms(t_pow)),
                    "speedup": format!("{speedup:.2}"),
                    "words": words.to_string(),
                    "agree": agree,
                }),
            )?;
        } else {
            ctx.line(&format!(
                "{size:<10} {:>12.3}  {:>9.3}  {:>7.1}  {words:>5}  {}",
                ms(t_iter),
                ms(t_pow),
                speedup,
                if agree { "yes" } else { "no" }
            ))?;
        }
    }
    Ok(if all_agree {
        EXIT_OK
    } else {
        EXIT_IDENTITY_FAILED
    })
}
