use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ast::{Expr, IdentityAST};
use crate::exact::{sequence_slice, BuiltinSeq, Sequence};
use crate::{Error, Index, Rational, Result};

/// Failures kept per report; the rest are only counted.
pub const FAILURE_CAP: usize = 32;

/// Width of the positive window a probe checks first.
pub const PROBE_WINDOW: Index = 200;

/// Name to sequence bindings. `T` and `K` are always present.
#[derive(Clone, Debug)]
pub struct SeqEnv {
    bindings: BTreeMap<String, Sequence>,
}

impl Default for SeqEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl SeqEnv {
    pub fn new() -> Self {
        let bindings = [BuiltinSeq::Trib, BuiltinSeq::TribLucas]
            .into_iter()
            .map(|s| (s.symbol().to_string(), Sequence::Builtin(s)))
            .collect();
        SeqEnv { bindings }
    }

    /// Adds a binding. Names are case-sensitive and may not be rebound.
    pub fn bind(&mut self, name: impl Into<String>, seq: impl Into<Sequence>) -> Result<()> {
        let name = name.into();
        if name == "n" || name == "frac" || !is_identifier(&name) {
            return Err(Error::InvalidArgument(format!(
                "`{name}` cannot be used as a sequence name"
            )));
        }
        if self.bindings.contains_key(&name) {
            return Err(Error::InvalidArgument(format!("`{name}` is already bound")));
        }
        self.bindings.insert(name, seq.into());
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Sequence> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn linear_index(a: Index, b: Index, n: Index) -> Result<Index> {
    a.checked_mul(n)
        .and_then(|x| x.checked_add(b))
        .ok_or_else(|| Error::InvalidArgument(format!("index {a}*{n}+{b} overflows")))
}

/// Exact value of `e` at index `n`.
pub fn eval_expr(e: &Expr, n: Index, env: &SeqEnv) -> Result<Rational> {
    eval_with(e, n, &mut |name, i| {
        env.get(name)
            .map(|seq| seq.eval(i))
            .ok_or_else(|| Error::UnknownSequence(name.to_string()))
    })
}

fn eval_with<F>(e: &Expr, n: Index, term: &mut F) -> Result<Rational>
where
    F: FnMut(&str, Index) -> Result<Rational>,
{
    Ok(match e {
        Expr::IntConst(v) => Rational::from_integer(v.clone()),
        Expr::IndexVar => Rational::from_integer(BigInt::from(n)),
        Expr::AltSign => {
            if n.rem_euclid(2) == 0 {
                Rational::one()
            } else {
                -Rational::one()
            }
        }
        Expr::SeqTerm { name, a, b } => term(name, linear_index(*a, *b, n)?)?,
        Expr::Neg(x) => -eval_with(x, n, term)?,
        Expr::Add(x, y) => eval_with(x, n, term)? + eval_with(y, n, term)?,
        Expr::Sub(x, y) => eval_with(x, n, term)? - eval_with(y, n, term)?,
        Expr::Mul(x, y) => eval_with(x, n, term)? * eval_with(y, n, term)?,
        Expr::Pow(x, k) => num_traits::pow(eval_with(x, n, term)?, *k as usize),
        Expr::RatScale(r, x) => r * eval_with(x, n, term)?,
    })
}

fn collect_spans(
    e: &Expr,
    lo: Index,
    hi: Index,
    spans: &mut BTreeMap<String, (Index, Index)>,
) -> Result<()> {
    match e {
        Expr::SeqTerm { name, a, b } => {
            let (x, y) = (linear_index(*a, *b, lo)?, linear_index(*a, *b, hi)?);
            let span = spans.entry(name.clone()).or_insert((x.min(y), x.max(y)));
            *span = (span.0.min(x).min(y), span.1.max(x).max(y));
        }
        Expr::Neg(x) | Expr::Pow(x, _) | Expr::RatScale(_, x) => collect_spans(x, lo, hi, spans)?,
        Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) => {
            collect_spans(x, lo, hi, spans)?;
            collect_spans(y, lo, hi, spans)?;
        }
        Expr::IntConst(_) | Expr::IndexVar | Expr::AltSign => {}
    }
    Ok(())
}

/// Every term the identity needs on `lo..=hi`, one slice per sequence name.
struct TermTable {
    slices: BTreeMap<String, (Index, Vec<Rational>)>,
}

impl TermTable {
    fn build(ast: &IdentityAST, lo: Index, hi: Index, env: &SeqEnv) -> Result<Self> {
        let mut spans = BTreeMap::new();
        collect_spans(&ast.lhs, lo, hi, &mut spans)?;
        collect_spans(&ast.rhs, lo, hi, &mut spans)?;
        let mut slices = BTreeMap::new();
        for (name, (from, to)) in spans {
            let seq = env
                .get(&name)
                .ok_or_else(|| Error::UnknownSequence(name.clone()))?;
            slices.insert(name, (from, sequence_slice(seq, from, to)?));
        }
        Ok(TermTable { slices })
    }

    fn get(&self, name: &str, i: Index) -> Result<Rational> {
        let (from, values) = self
            .slices
            .get(name)
            .ok_or_else(|| Error::UnknownSequence(name.to_string()))?;
        Ok(values[(i - from) as usize].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub n: Index,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Where a conjecture probe stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Holds,
    /// The identity already fails on `(N, N+200]`, so nothing is established.
    PositiveRangeFailure,
    /// Holds beyond `N` but fails somewhere in `[-M, N]`.
    NegativeRangeCounterexample,
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeOutcome::Holds => "holds",
            ProbeOutcome::PositiveRangeFailure => "positive-range failure",
            ProbeOutcome::NegativeRangeCounterexample => "negative-range counterexample",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub text: String,
    pub lo: Index,
    pub hi: Index,
    pub verdict: Verdict,
    /// First failures in increasing `n`, at most [`FAILURE_CAP`].
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub positive_threshold: Option<Index>,
    pub negative_depth: Option<Index>,
    pub probe: Option<ProbeOutcome>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Evaluates `lhs - rhs` at every `n` in `lo..=hi`.
pub fn check_identity(
    ast: &IdentityAST,
    lo: Index,
    hi: Index,
    env: &SeqEnv,
) -> Result<CheckReport> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let table = TermTable::build(ast, lo, hi, env)?;
    let mut term = |name: &str, i: Index| table.get(name, i);
    let mut failures = Vec::new();
    let mut failure_count = 0u64;
    for n in lo..=hi {
        let lhs = eval_with(&ast.lhs, n, &mut term)?;
        let rhs = eval_with(&ast.rhs, n, &mut term)?;
        if !(&lhs - &rhs).is_zero() {
            failure_count += 1;
            if failures.len() < FAILURE_CAP {
                failures.push(Failure { n, lhs, rhs });
            }
        }
    }
    Ok(CheckReport {
        name: String::new(),
        text: ast.to_string(),
        lo,
        hi,
        verdict: if failure_count == 0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        failures,
        failure_count,
        positive_threshold: None,
        negative_depth: None,
        probe: None,
    })
}

/// Checks `(N, N+200]` first; only if that holds does it look at `[-M, N]`.
pub fn conjecture_probe(
    ast: &IdentityAST,
    env: &SeqEnv,
    positive_threshold: Index,
    negative_depth: Index,
) -> Result<CheckReport> {
    if positive_threshold < 1 || negative_depth < 1 {
        return Err(Error::InvalidArgument(format!(
            "probe bounds must be positive, got N={positive_threshold}, M={negative_depth}"
        )));
    }
    let top = positive_threshold
        .checked_add(PROBE_WINDOW)
        .ok_or_else(|| Error::InvalidArgument("N is too large".into()))?;
    let positive = check_identity(ast, positive_threshold + 1, top, env)?;
    let (mut report, outcome) = if !positive.holds() {
        (positive, ProbeOutcome::PositiveRangeFailure)
    } else {
        let negative = check_identity(ast, -negative_depth, positive_threshold, env)?;
        if negative.holds() {
            let mut all = negative;
            all.hi = top;
            (all, ProbeOutcome::Holds)
        } else {
            (negative, ProbeOutcome::NegativeRangeCounterexample)
        }
    };
    report.positive_threshold = Some(positive_threshold);
    report.negative_depth = Some(negative_depth);
    report.probe = Some(outcome);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SequenceSpec;
    use crate::identity::parse_identity;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn eval_examples() {
        let env = SeqEnv::new();
        assert_eq!(
            eval_expr(&Expr::term("T", 1, 0), -12, &env).unwrap(),
            r(-20)
        );
        assert_eq!(eval_expr(&Expr::AltSign, -3, &env).unwrap(), r(-1));
        assert_eq!(eval_expr(&Expr::AltSign, -4, &env).unwrap(), r(1));
        let e = Expr::term("K", 1, 0).mul(Expr::int(2));
        assert_eq!(eval_expr(&e, 4, &env).unwrap(), r(22));
        assert_eq!(
            eval_expr(&Expr::term("F", 1, 0), 0, &env),
            Err(Error::UnknownSequence("F".into()))
        );
    }

    #[test]
    fn check_examples() {
        let env = SeqEnv::new();
        let eq3 = parse_identity("K(n) = 3*T(n+1) - 2*T(n) - T(n-1)").unwrap();
        assert!(check_identity(&eq3, -50, 50, &env).unwrap().holds());

        let broken = parse_identity("K(n) = 3*T(n+1) - 2*T(n)").unwrap();
        let rep = check_identity(&broken, 0, 5, &env).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);
        let f = rep.first_failure().unwrap();
        assert_eq!((f.n, f.lhs.clone(), f.rhs.clone()), (2, r(3), r(4)));

        let refl = parse_identity("T(n) = T(n)").unwrap();
        assert!(check_identity(&refl, -5, 5, &env).unwrap().holds());
        assert_eq!(
            check_identity(&refl, 5, -5, &env),
            Err(Error::InvalidRange { lo: 5, hi: -5 })
        );
    }

    #[test]
    fn unknown_name_is_reported_even_for_empty_work() {
        let env = SeqEnv::new();
        let ast = parse_identity("0*P(n) = 0").unwrap();
        assert_eq!(
            check_identity(&ast, 0, 0, &env),
            Err(Error::UnknownSequence("P".into()))
        );
    }

    #[test]
    fn failure_list_is_capped() {
        let env = SeqEnv::new();
        let ast = parse_identity("n = n + 1").unwrap();
        let rep = check_identity(&ast, -50, 49, &env).unwrap();
        assert_eq!(rep.failure_count, 100);
        assert_eq!(rep.failures.len(), FAILURE_CAP);
        assert_eq!(rep.failures[0].n, -50);
    }

    #[test]
    fn probe_examples() {
        let env = SeqEnv::new();
        for text in [
            "K(n) = T(n) + 2*T(n-1) + 3*T(n-2)",
            "22*T(n) = 5*K(n+2) - 3*K(n+1) - 4*K(n)",
        ] {
            let rep = conjecture_probe(&parse_identity(text).unwrap(), &env, 10, 100).unwrap();
            assert_eq!(rep.probe, Some(ProbeOutcome::Holds), "{text}");
            assert_eq!((rep.lo, rep.hi), (-100, 210));
        }
        let parity = parse_identity("(-1)^n * T(n) = T(n)").unwrap();
        let rep = conjecture_probe(&parity, &env, 10, 100).unwrap();
        assert_eq!(rep.probe, Some(ProbeOutcome::PositiveRangeFailure));
        assert_eq!(rep.first_failure().unwrap().n, 11);
    }

    #[test]
    fn probe_finds_negative_counterexample() {
        // P(n) = P(n-250) with a single 1 at n = 249, hence also at n = -1.
        let mut coeffs = vec![0i64; 250];
        coeffs[249] = 1;
        let mut initials = vec![0i64; 250];
        initials[249] = 1;
        let mut env = SeqEnv::new();
        env.bind(
            "P",
            SequenceSpec::from_i64("P", &coeffs, &initials).unwrap(),
        )
        .unwrap();
        let ast = parse_identity("P(n) = 0").unwrap();
        let rep = conjecture_probe(&ast, &env, 10, 20).unwrap();
        assert_eq!(rep.probe, Some(ProbeOutcome::NegativeRangeCounterexample));
        assert_eq!(rep.failure_count, 1);
        assert_eq!(rep.first_failure().unwrap().n, -1);
        assert!(conjecture_probe(&ast, &env, 10, 0).is_err());
    }

    #[test]
    fn env_rules() {
        let mut env = SeqEnv::new();
        assert!(env.bind("T", BuiltinSeq::Trib).is_err());
        assert!(env.bind("n", BuiltinSeq::Trib).is_err());
        assert!(env.bind("t", BuiltinSeq::Trib).is_ok());
        assert_eq!(env.names().collect::<Vec<_>>(), ["K", "T", "t"]);
    }
}
