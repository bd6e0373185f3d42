//! The eleven acceptance criteria, each reported as one PASS/FAIL line.
//!
//! Run with `cargo test -p trimat --test acceptance -- --nocapture` to see the report.

use std::process::Command;
use std::time::{Duration, Instant};

use trimat::analytic::{
    self, binet_coefficients, consecutive_ratio, lift, max_distance_to_exact, max_entry_distance,
    tribonacci_roots, ComplexApprox, Direction, RealApprox,
};
use trimat::exact::{tribonacci_iterative, tribonacci_matrix_power};
use trimat::genfunc::{matrix_gf_coefficients, scalar_gf_coefficients, GfKind};
use trimat::identity::{
    builtin_corpus, check_identity, conjecture_probe, parse_identity, ProbeOutcome, SeqEnv,
};
use trimat::matrix_seq::{k_matrix, matrix, t_matrix};
use trimat::sums::{
    k_prefix_sum_special, sum_closed, sum_closed_k_scalar, sum_direct, sum_matrix_form,
    t_prefix_sum_special, KCorrection, Level, SumQuery, SumValue,
};
use trimat::{tribonacci, tribonacci_lucas, BigInt, BuiltinSeq, IntMat3, Mat3, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type ScalarCase = (GfKind, fn(i64) -> BigInt, i64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

const T_POS: [i64; 13] = [0, 1, 1, 2, 4, 7, 13, 24, 44, 81, 149, 274, 504];
const T_NEG: [i64; 13] = [0, 0, 1, -1, 0, 2, -3, 1, 4, -8, 5, 7, -20];
const K_POS: [i64; 13] = [3, 1, 3, 7, 11, 21, 39, 71, 131, 241, 443, 815, 1499];
const K_NEG: [i64; 13] = [3, -1, -1, 5, -5, -1, 11, -15, 3, 23, -41, 21, 43];

fn tables() -> Outcome {
    let start = Instant::now();
    let mut got = Vec::with_capacity(50);
    for n in -12..=12i64 {
        got.push((n, tribonacci(n), tribonacci_lucas(n)));
    }
    let elapsed = start.elapsed();
    for (n, t, k) in got {
        let i = n.unsigned_abs() as usize;
        let (te, ke) = if n >= 0 {
            (T_POS[i], K_POS[i])
        } else {
            (T_NEG[i], K_NEG[i])
        };
        ensure(t == BigInt::from(te), || {
            format!("T({n}) = {t}, table says {te}")
        })?;
        ensure(k == BigInt::from(ke), || {
            format!("K({n}) = {k}, table says {ke}")
        })?;
    }
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("50 values in {elapsed:?}"))
}

fn inverse_law() -> Outcome {
    let start = Instant::now();
    for n in 0..=300 {
        let p = &t_matrix(-n) * &t_matrix(n);
        ensure(p == IntMat3::identity(), || format!("T_-{n} T_{n} != I"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("n = 0..300 in {elapsed:?}"))
}

fn homomorphism() -> Outcome {
    let start = Instant::now();
    let ts: Vec<IntMat3> = (-80..=80).map(t_matrix).collect();
    let ks: Vec<IntMat3> = (-80..=80).map(k_matrix).collect();
    let k0 = k_matrix(0);
    let at = |v: &[IntMat3], i: i64| v[(i + 80) as usize].clone();
    for m in -40..=40i64 {
        for n in -40..=40i64 {
            ensure(&at(&ts, m) * &at(&ts, n) == at(&ts, m + n), || {
                format!("T_{m} T_{n} != T_{}", m + n)
            })?;
            ensure(
                &at(&ks, -m) * &at(&ks, -n) == &k0 * &at(&ks, -m - n),
                || format!("K_{} K_{} != K_0 K_{}", -m, -n, -m - n),
            )?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("81 x 81 grid in {elapsed:?}"))
}

fn determinants() -> Outcome {
    for n in -200..=200 {
        ensure(t_matrix(n).det() == BigInt::from(1), || {
            format!("det T_{n} != 1")
        })?;
        ensure(k_matrix(n).det() == BigInt::from(44), || {
            format!("det K_{n} != 44")
        })?;
    }
    Ok("n = -200..200".into())
}

fn binet_agreement() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    for n in -60..=60i64 {
        let bits = 128 + 2 * n.unsigned_abs() as u32;
        for fam in [BuiltinSeq::Trib, BuiltinSeq::TribLucas] {
            let approx = analytic::binet(fam, n, bits);
            let exact = RealApprox::from_int(fam.eval(n), bits);
            let err = (&approx - &exact).abs().to_f64();
            worst = worst.max(err);
            ensure(err < 1e-10, || {
                format!("|binet {fam}({n}) - exact| = {err:e}")
            })?;
        }
    }
    for n in -30..=30i64 {
        let bits = 128 + 2 * n.unsigned_abs() as u32;
        for fam in [BuiltinSeq::Trib, BuiltinSeq::TribLucas] {
            let approx = analytic::binet_matrix(fam, n, bits);
            let err = max_distance_to_exact(&approx, &matrix(fam, n)).to_f64();
            worst = worst.max(err);
            ensure(err < 1e-10, || {
                format!("matrix binet {fam}_{n} off by {err:e}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("worst error {worst:e} in {elapsed:?}"))
}

fn coefficient_equalities() -> Outcome {
    const BITS: u32 = 256;
    let small = |x: &RealApprox| x.abs_below_pow2(-96);
    for fam in [BuiltinSeq::Trib, BuiltinSeq::TribLucas] {
        let pos = binet_coefficients(fam, Direction::Positive, BITS);
        let neg = binet_coefficients(fam, Direction::Negative, BITS);
        for (i, (p, q)) in pos.as_array().iter().zip(neg.as_array()).enumerate() {
            let d = max_entry_distance(p, q);
            ensure(small(&d), || {
                format!("{fam} coefficient {i}: directions differ by {d}")
            })?;
        }
    }
    let t = binet_coefficients(BuiltinSeq::Trib, Direction::Positive, BITS);
    let zero: Mat3<ComplexApprox> = lift(&IntMat3::zero(), BITS);
    let coeffs = t.as_array();
    for (i, x) in coeffs.iter().enumerate() {
        for (j, y) in coeffs.iter().enumerate() {
            let prod = *x * *y;
            let target = if i == j { (*x).clone() } else { zero.clone() };
            let d = max_entry_distance(&prod, &target);
            ensure(small(&d), || {
                format!("coefficient product ({i},{j}) off by {d}")
            })?;
        }
    }
    Ok("A, B, C agree across directions; idempotent and mutually annihilating at 2^-96".into())
}

fn generating_functions() -> Outcome {
    let start = Instant::now();
    let r = |x: BigInt| Rational::from_integer(x);
    let scalar: [ScalarCase; 4] = [
        (GfKind::TPos, tribonacci, 1),
        (GfKind::KPos, tribonacci_lucas, 1),
        (GfKind::TNeg, tribonacci, -1),
        (GfKind::KNeg, tribonacci_lucas, -1),
    ];
    for (kind, f, sign) in scalar {
        let coeffs = scalar_gf_coefficients(kind, 64).map_err(|e| e.to_string())?;
        ensure(coeffs.len() == 64, || {
            format!("{kind}: {} coefficients", coeffs.len())
        })?;
        for (n, c) in coeffs.into_iter().enumerate() {
            let expect = r(f(sign * n as i64));
            ensure(c == expect, || {
                format!("{kind}[{n}] = {c}, expected {expect}")
            })?;
        }
    }
    for (kind, f) in [
        (GfKind::TMatNeg, t_matrix as fn(i64) -> IntMat3),
        (GfKind::KMatNeg, k_matrix),
    ] {
        let coeffs = matrix_gf_coefficients(kind, 64).map_err(|e| e.to_string())?;
        ensure(coeffs.len() == 64, || {
            format!("{kind}: {} coefficients", coeffs.len())
        })?;
        for (n, c) in coeffs.into_iter().enumerate() {
            ensure(c == f(-(n as i64)), || format!("{kind}[{n}] mismatch"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "4 scalar + 2 matrix series, 64 terms each, in {elapsed:?}"
    ))
}

fn sums() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut plus_j_failures = 0usize;
    for m in 1..=6 {
        for j in 0..m {
            for n in 1..=40 {
                for fam in [BuiltinSeq::Trib, BuiltinSeq::TribLucas] {
                    for level in [Level::Scalar, Level::Matrix] {
                        let q = SumQuery::new(fam, level, m, j, n).map_err(|e| e.to_string())?;
                        let closed = sum_closed(&q).map_err(|e| e.to_string())?;
                        let direct = sum_direct(&q).map_err(|e| e.to_string())?;
                        ensure(closed == direct, || {
                            format!("{q:?}: closed {closed} != direct {direct}")
                        })?;
                        checked += 1;
                    }
                }
                let direct =
                    sum_direct(&SumQuery::new(BuiltinSeq::Trib, Level::Matrix, m, j, n).unwrap())
                        .unwrap();
                match sum_matrix_form(m, j, n) {
                    Ok(inv) => ensure(SumValue::Matrix(inv) == direct, || {
                        format!("matrix form differs at m={m} j={j} n={n}")
                    })?,
                    Err(trimat::Error::SingularMatrix) => {}
                    Err(e) => return Err(e.to_string()),
                }
                let k_direct = sum_direct(
                    &SumQuery::new(BuiltinSeq::TribLucas, Level::Scalar, m, j, n).unwrap(),
                )
                .unwrap();
                let minus = sum_closed_k_scalar(m, j, n, KCorrection::MinusMMinusJ).unwrap();
                ensure(SumValue::Scalar(minus) == k_direct, || {
                    format!("K_(-m-j) variant fails at m={m} j={j} n={n}")
                })?;
                let plus = sum_closed_k_scalar(m, j, n, KCorrection::MinusMPlusJ).unwrap();
                if SumValue::Scalar(plus) != k_direct {
                    plus_j_failures += 1;
                }
            }
        }
    }
    ensure(plus_j_failures > 0, || {
        "the K_(-m+j) variant never fails".into()
    })?;
    for n in 1..=40 {
        let t =
            sum_direct(&SumQuery::new(BuiltinSeq::Trib, Level::Scalar, 1, 0, n).unwrap()).unwrap();
        let k = sum_direct(&SumQuery::new(BuiltinSeq::TribLucas, Level::Scalar, 1, 0, n).unwrap())
            .unwrap();
        ensure(t == SumValue::Scalar(t_prefix_sum_special(n)), || {
            format!("T prefix sum n={n}")
        })?;
        ensure(k == SumValue::Scalar(k_prefix_sum_special(n)), || {
            format!("K prefix sum n={n}")
        })?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "{checked} grid points; K_(-m+j) variant fails at {plus_j_failures}; {elapsed:?}"
    ))
}

fn corpus() -> Outcome {
    let start = Instant::now();
    let env = SeqEnv::new();
    let entries = builtin_corpus();
    ensure(entries.len() >= 20, || {
        format!("only {} corpus entries", entries.len())
    })?;
    for (name, text) in &entries {
        let ast = parse_identity(text).map_err(|e| format!("{name}: {e}"))?;
        let rep = check_identity(&ast, -100, 100, &env).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || {
            format!("{name} fails at {:?}", rep.first_failure())
        })?;
        let probe = conjecture_probe(&ast, &env, 20, 200).map_err(|e| e.to_string())?;
        ensure(probe.probe == Some(ProbeOutcome::Holds), || {
            format!("{name}: probe reports {:?}", probe.probe)
        })?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;

    let bin = env!("CARGO_BIN_EXE_trimat");
    let code = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map(|o| o.status.code())
            .map_err(|e| e.to_string())
    };
    ensure(code(&["corpus"])? == Some(0), || {
        "`corpus` did not exit 0".into()
    })?;
    ensure(
        code(&[
            "check",
            "--expr",
            "K(n) = 3*T(n+1) - 2*T(n)",
            "--range",
            "0..5",
        ])? == Some(1),
        || "failing identity did not exit 1".into(),
    )?;
    ensure(code(&["check", "--expr", "K(n = 3"])? == Some(2), || {
        "parse error did not exit 2".into()
    })?;
    Ok(format!(
        "{} identities checked and probed in {elapsed:?}; exit codes 0/1/2",
        entries.len()
    ))
}

fn ratio_limit() -> Outcome {
    let ratio = consecutive_ratio(100, 128).map_err(|e| e.to_string())?;
    let alpha = tribonacci_roots(128).alpha;
    let err = (&ratio - &alpha).abs().to_f64();
    ensure(err < 1e-15, || format!("|T(101)/T(100) - alpha| = {err:e}"))?;
    Ok(format!("error {err:e}"))
}

fn performance() -> Outcome {
    const N: i64 = 100_000;
    let start = Instant::now();
    let fast = tribonacci_matrix_power(N);
    let t_fast = start.elapsed();
    let start = Instant::now();
    let slow = tribonacci_iterative(N);
    let t_slow = start.elapsed();
    ensure(fast == slow, || "strategies disagree at n = 1e5".into())?;
    let speedup = t_slow.as_secs_f64() / t_fast.as_secs_f64().max(1e-9);
    ensure(speedup >= 10.0, || {
        format!("matrix power {t_fast:?} vs iteration {t_slow:?}: only {speedup:.1}x")
    })?;
    Ok(format!(
        "matrix power {t_fast:?}, iteration {t_slow:?}, {speedup:.0}x"
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("table reproduction", tables),
        ("inverse law", inverse_law),
        ("homomorphism grid", homomorphism),
        ("determinant invariants", determinants),
        ("binet agreement", binet_agreement),
        ("coefficient equalities", coefficient_equalities),
        ("generating functions", generating_functions),
        ("sums", sums),
        ("identity corpus", corpus),
        ("ratio limit", ratio_limit),
        ("performance sanity", performance),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
