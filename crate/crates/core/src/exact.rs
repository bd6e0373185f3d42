//! Exact evaluation of Tribonacci-type sequences at signed indices.
//!
//! Two strategies share one contract: a linear walk along the recurrence
//! (forwards for positive indices, backwards for negative ones) and a
//! logarithmic one that raises the companion matrix to the `n`-th power.
//! [`tribonacci`] and [`tribonacci_lucas`] switch to the matrix route once
//! `|n|` exceeds [`LINEAR_CUTOFF`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::mat3::IntMat3;
use crate::{Error, Index, Rational, Result};

/// Largest `|n|` evaluated by the linear walk in the default entry points.
pub const LINEAR_CUTOFF: u64 = 64;

const TRIB_INITIALS: [i64; 3] = [0, 1, 1];
const LUCAS_INITIALS: [i64; 3] = [3, 1, 3];

/// The two built-in sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinSeq {
    Trib,
    TribLucas,
}

impl BuiltinSeq {
    pub fn initials(self) -> [i64; 3] {
        match self {
            BuiltinSeq::Trib => TRIB_INITIALS,
            BuiltinSeq::TribLucas => LUCAS_INITIALS,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BuiltinSeq::Trib => "T",
            BuiltinSeq::TribLucas => "K",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "T" => Some(BuiltinSeq::Trib),
            "K" => Some(BuiltinSeq::TribLucas),
            _ => None,
        }
    }

    pub fn eval(self, n: Index) -> BigInt {
        match self {
            BuiltinSeq::Trib => tribonacci(n),
            BuiltinSeq::TribLucas => tribonacci_lucas(n),
        }
    }

    /// The same sequence as a generic order-3 recurrence.
    pub fn as_spec(self) -> SequenceSpec {
        let name = match self {
            BuiltinSeq::Trib => "tribonacci",
            BuiltinSeq::TribLucas => "tribonacci-lucas",
        };
        SequenceSpec::from_i64(name, &[1, 1, 1], &self.initials())
            .expect("builtin spec is well formed")
    }
}

impl fmt::Display for BuiltinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `w(n) = a_1 w(n-1) + ... + a_k w(n-k)` with initials `w(0) .. w(k-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    name: String,
    coefficients: Vec<BigInt>,
    initials: Vec<Rational>,
}

impl SequenceSpec {
    pub fn new(
        name: impl Into<String>,
        coefficients: Vec<BigInt>,
        initials: Vec<Rational>,
    ) -> Result<Self> {
        let k = coefficients.len();
        if k == 0 {
            return Err(Error::InvalidSpec("order must be at least 1".into()));
        }
        if initials.len() != k {
            return Err(Error::InvalidSpec(format!(
                "{} coefficients but {} initial values",
                k,
                initials.len()
            )));
        }
        if coefficients[k - 1].is_zero() {
            return Err(Error::InvalidSpec(
                "last coefficient is zero, backward extension is undefined".into(),
            ));
        }
        Ok(SequenceSpec {
            name: name.into(),
            coefficients,
            initials,
        })
    }

    pub fn from_i64(
        name: impl Into<String>,
        coefficients: &[i64],
        initials: &[i64],
    ) -> Result<Self> {
        Self::new(
            name,
            coefficients.iter().map(|&c| BigInt::from(c)).collect(),
            initials
                .iter()
                .map(|&w| Rational::from_integer(w.into()))
                .collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn initials(&self) -> &[Rational] {
        &self.initials
    }

    /// `window` holds `w(i) .. w(i+k-1)`; returns `w(i+k)`.
    fn step_forward(&self, window: &[Rational]) -> Rational {
        let k = self.order();
        let mut acc = Rational::zero();
        for (j, a) in self.coefficients.iter().enumerate() {
            if !a.is_zero() {
                acc += &window[k - 1 - j] * a;
            }
        }
        acc
    }

    /// `window` holds `w(i) .. w(i+k-1)`; returns `w(i-1)`.
    fn step_backward(&self, window: &[Rational]) -> Rational {
        let k = self.order();
        // w(i+k-1) = a_1 w(i+k-2) + ... + a_{k-1} w(i) + a_k w(i-1)
        let mut acc = window[k - 1].clone();
        for j in 0..k - 1 {
            let a = &self.coefficients[j];
            if !a.is_zero() {
                acc -= &window[k - 2 - j] * a;
            }
        }
        acc / Rational::from_integer(self.coefficients[k - 1].clone())
    }
}

/// Either a built-in sequence or a user recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequence {
    Builtin(BuiltinSeq),
    Spec(SequenceSpec),
}

impl Sequence {
    pub fn eval(&self, n: Index) -> Rational {
        match self {
            Sequence::Builtin(b) => Rational::from_integer(b.eval(n)),
            Sequence::Spec(s) => eval_sequence(s, n),
        }
    }
}

impl From<BuiltinSeq> for Sequence {
    fn from(b: BuiltinSeq) -> Self {
        Sequence::Builtin(b)
    }
}

impl From<SequenceSpec> for Sequence {
    fn from(s: SequenceSpec) -> Self {
        Sequence::Spec(s)
    }
}

/// Evaluates a recurrence at any signed index by walking from the initials.
pub fn eval_sequence(spec: &SequenceSpec, n: Index) -> Rational {
    let k = spec.order() as i64;
    if (0..k).contains(&n) {
        return spec.initials[n as usize].clone();
    }
    let mut window = spec.initials.clone();
    if n >= k {
        for _ in k..=n {
            let next = spec.step_forward(&window);
            window.rotate_left(1);
            *window.last_mut().unwrap() = next;
        }
        window.pop().unwrap()
    } else {
        for _ in n..0 {
            let prev = spec.step_backward(&window);
            window.rotate_right(1);
            window[0] = prev;
        }
        window.swap_remove(0)
    }
}

/// Values at `lo..=hi` in index order, computed in a single pass.
pub fn sequence_slice(seq: &Sequence, lo: Index, hi: Index) -> Result<Vec<Rational>> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let len = (hi - lo + 1) as usize;
    match seq {
        Sequence::Builtin(b) => Ok(builtin_run(*b, lo, len)
            .into_iter()
            .map(Rational::from_integer)
            .collect()),
        Sequence::Spec(spec) => {
            let k = spec.order();
            let mut window: Vec<Rational> =
                (0..k as i64).map(|i| eval_sequence(spec, lo + i)).collect();
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let next = spec.step_forward(&window);
                window.rotate_left(1);
                let first = std::mem::replace(window.last_mut().unwrap(), next);
                out.push(first);
            }
            Ok(out)
        }
    }
}

/// `T(n)` for any signed `n`.
pub fn tribonacci(n: Index) -> BigInt {
    if n.unsigned_abs() <= LINEAR_CUTOFF {
        tribonacci_iterative(n)
    } else {
        tribonacci_matrix_power(n)
    }
}

/// `K(n)` for any signed `n`.
pub fn tribonacci_lucas(n: Index) -> BigInt {
    if n.unsigned_abs() <= LINEAR_CUTOFF {
        tribonacci_lucas_iterative(n)
    } else {
        tribonacci_lucas_matrix_power(n)
    }
}

pub fn tribonacci_iterative(n: Index) -> BigInt {
    walk(TRIB_INITIALS, n)
}

pub fn tribonacci_lucas_iterative(n: Index) -> BigInt {
    walk(LUCAS_INITIALS, n)
}

/// Reads `T(n)` off the first column of `C^n`, where `C` is the companion matrix.
pub fn tribonacci_matrix_power(n: Index) -> BigInt {
    let [_, t_n, _] = trib_column(n);
    t_n
}

/// `K(n) = 3 T(n+1) - 2 T(n) - T(n-1)` with the triple taken from `C^n`.
pub fn tribonacci_lucas_matrix_power(n: Index) -> BigInt {
    let [next, cur, prev] = trib_column(n);
    lucas_from_triple(&next, &cur, &prev)
}

fn lucas_from_triple(next: &BigInt, cur: &BigInt, prev: &BigInt) -> BigInt {
    next * 3 - cur * 2 - prev
}

pub(crate) fn companion() -> IntMat3 {
    IntMat3::from_i64([[1, 1, 1], [1, 0, 0], [0, 1, 0]])
}

pub(crate) fn companion_inverse() -> IntMat3 {
    IntMat3::from_i64([[0, 1, 0], [0, 0, 1], [1, -1, -1]])
}

/// `C^n` for signed `n`; the inverse companion matrix is integral.
pub(crate) fn companion_power(n: Index) -> IntMat3 {
    if n >= 0 {
        companion().pow(n as u64)
    } else {
        companion_inverse().pow(n.unsigned_abs())
    }
}

/// `[T(n+1), T(n), T(n-1)]`.
fn trib_column(n: Index) -> [BigInt; 3] {
    let m = companion_power(n);
    let [r0, r1, r2] = m.into_rows();
    let [a, ..] = r0;
    let [b, ..] = r1;
    let [c, ..] = r2;
    [a, b, c]
}

fn walk(initials: [i64; 3], n: Index) -> BigInt {
    let [mut a, mut b, mut c] = initials.map(BigInt::from);
    if n >= 0 {
        // (a, b, c) = (w(i), w(i+1), w(i+2)), starting at i = 0
        for _ in 0..n {
            let next = &a + &b + &c;
            a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
        }
        a
    } else {
        for _ in 0..n.unsigned_abs() {
            // w(i-1) = w(i+2) - w(i+1) - w(i)
            let prev = &c - &b - &a;
            c = std::mem::replace(&mut b, std::mem::replace(&mut a, prev));
        }
        a
    }
}

/// `len` consecutive values starting at `start`, seeded by a single evaluation.
pub(crate) fn builtin_run(seq: BuiltinSeq, start: Index, len: usize) -> Vec<BigInt> {
    // T(start-1) .. T(start+len) covers every K(i) = 3T(i+1) - 2T(i) - T(i-1)
    let t = trib_run(start - 1, len + 2);
    match seq {
        BuiltinSeq::Trib => t[1..=len].to_vec(),
        BuiltinSeq::TribLucas => t
            .windows(3)
            .map(|w| lucas_from_triple(&w[2], &w[1], &w[0]))
            .collect(),
    }
}

fn trib_run(start: Index, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len.max(3));
    let [next, cur, prev] = if start.unsigned_abs() <= LINEAR_CUTOFF {
        [
            tribonacci_iterative(start + 1),
            tribonacci_iterative(start),
            tribonacci_iterative(start - 1),
        ]
    } else {
        trib_column(start)
    };
    out.push(cur);
    out.push(next);
    let mut prev = prev;
    while out.len() < len {
        let l = out.len();
        let value = &out[l - 1] + &out[l - 2] + &prev;
        prev = out[l - 2].clone();
        out.push(value);
    }
    out.truncate(len);
    out
}

/// Number of 64-bit words in the magnitude of `x`.
pub fn word_count(x: &BigInt) -> usize {
    x.magnitude().to_u64_digits().len()
}

impl SequenceSpec {
    /// Extends `steps` terms below index 0, then runs forward again, returning
    /// the reconstructed initials. Equal to [`SequenceSpec::initials`] whenever
    /// the backward step is exact.
    pub fn backward_forward_roundtrip(&self, steps: usize) -> Vec<Rational> {
        let k = self.order();
        let lo = -(steps as i64);
        let mut window: Vec<Rational> =
            (0..k as i64).map(|i| eval_sequence(self, lo + i)).collect();
        for _ in 0..steps {
            let next = self.step_forward(&window);
            window.rotate_left(1);
            *window.last_mut().unwrap() = next;
        }
        window
    }
}
