//! Partial sums `sum_{i=0}^{n-1} S_{-mi-j}` of negatively indexed terms.
//!
//! The closed form divides by `K(-m) - K(m)`:
//!
//! ```text
//!   S_{-mn+m-j} + S_{-mn-m-j} + (1 - K(-m)) S_{-mn-j}
//! - S_{-m-j}    - S_{m-j}     - (1 - K(-m)) S_{-j}
//! ```
//!
//! and [`sum_direct`] adds the terms one by one as an oracle.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{tribonacci_lucas, BuiltinSeq};
use crate::mat3::{IntMat3, RatMat3};
use crate::matrix_seq::{matrix, t_stride_sum_via_inverse};
use crate::{Error, Index, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Scalar,
    Matrix,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(Level::Scalar),
            "matrix" => Ok(Level::Matrix),
            _ => Err(Error::InvalidArgument(format!(
                "level must be `scalar` or `matrix`, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Scalar => "scalar",
            Level::Matrix => "matrix",
        })
    }
}

/// `sum_{i=0}^{n-1} S_{-m i - j}` for `S` in `family`, scalar or matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumQuery {
    pub family: BuiltinSeq,
    pub level: Level,
    /// stride, at least 1
    pub m: Index,
    /// offset, at least 0
    pub j: Index,
    /// number of terms, at least 1
    pub n: Index,
}

impl SumQuery {
    pub fn new(family: BuiltinSeq, level: Level, m: Index, j: Index, n: Index) -> Result<Self> {
        let q = SumQuery {
            family,
            level,
            m,
            j,
            n,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidArgument(format!(
                "stride m must be at least 1, got {}",
                self.m
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidArgument(format!(
                "term count n must be at least 1, got {}",
                self.n
            )));
        }
        if self.j < 0 {
            return Err(Error::InvalidArgument(format!(
                "offset j must be non-negative, got {}",
                self.j
            )));
        }
        Ok(())
    }

    /// `j >= m` lies outside the range the closed form is usually stated for.
    /// It is still evaluated; callers may want to warn.
    pub fn offset_exceeds_stride(&self) -> bool {
        self.j >= self.m
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumValue {
    Scalar(Rational),
    Matrix(RatMat3),
}

impl fmt::Display for SumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumValue::Scalar(x) => write!(f, "{x}"),
            SumValue::Matrix(m) => write!(f, "{m}"),
        }
    }
}

fn stride_denominator(m: Index) -> Result<BigInt> {
    let d = tribonacci_lucas(-m) - tribonacci_lucas(m);
    if d.is_zero() {
        return Err(Error::ZeroDenominator(format!("K(-{m}) = K({m})")));
    }
    Ok(d)
}

/// Which index the first correction term of the K-scalar closed form uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KCorrection {
    /// `K_{-m-j}`, matching the T form and the matrix form.
    MinusMMinusJ,
    /// `K_{-m+j}`, which only agrees with the direct sum when `j = 0`.
    MinusMPlusJ,
}

/// Integer combination `sum c_i X(index_i)` evaluated through `value`.
fn combine<V, F>(terms: &[(BigInt, Index)], mut value: F, zero: V) -> V
where
    F: FnMut(Index) -> V,
    V: std::ops::Add<Output = V>,
    for<'a> &'a V: std::ops::Mul<&'a BigInt, Output = V>,
{
    terms.iter().fold(zero, |acc, (c, i)| acc + &value(*i) * c)
}

fn closed_terms(q: &SumQuery, correction: KCorrection) -> Result<(Vec<(BigInt, Index)>, BigInt)> {
    q.validate()?;
    let SumQuery { m, j, n, .. } = *q;
    let d = stride_denominator(m)?;
    let w = BigInt::from(1) - tribonacci_lucas(-m);
    let first_correction = match correction {
        KCorrection::MinusMMinusJ => -m - j,
        KCorrection::MinusMPlusJ => -m + j,
    };
    let one = BigInt::from(1);
    let terms = vec![
        (one.clone(), -m * n + m - j),
        (one.clone(), -m * n - m - j),
        (w.clone(), -m * n - j),
        (-&one, first_correction),
        (-&one, -j + m),
        (-w, -j),
    ];
    Ok((terms, d))
}

fn closed_with(q: &SumQuery, correction: KCorrection) -> Result<SumValue> {
    let (terms, d) = closed_terms(q, correction)?;
    let inv = Rational::new(BigInt::from(1), d);
    let seq = q.family;
    Ok(match q.level {
        Level::Scalar => {
            let num = combine(&terms, |i| seq.eval(i), BigInt::zero());
            SumValue::Scalar(Rational::from_integer(num) * inv)
        }
        Level::Matrix => {
            let num = combine(&terms, |i| matrix(seq, i), IntMat3::zero());
            SumValue::Matrix(num.to_rational().scale(&inv))
        }
    })
}

/// Closed-form evaluation.
pub fn sum_closed(q: &SumQuery) -> Result<SumValue> {
    closed_with(q, KCorrection::MinusMMinusJ)
}

/// The scalar K closed form with a chosen first correction index.
pub fn sum_closed_k_scalar(
    m: Index,
    j: Index,
    n: Index,
    correction: KCorrection,
) -> Result<Rational> {
    let q = SumQuery::new(BuiltinSeq::TribLucas, Level::Scalar, m, j, n)?;
    match closed_with(&q, correction)? {
        SumValue::Scalar(x) => Ok(x),
        SumValue::Matrix(_) => unreachable!("scalar query"),
    }
}

/// Term-by-term summation.
pub fn sum_direct(q: &SumQuery) -> Result<SumValue> {
    q.validate()?;
    let indices = (0..q.n).map(|i| -q.m * i - q.j);
    Ok(match q.level {
        Level::Scalar => SumValue::Scalar(Rational::from_integer(
            indices.map(|i| q.family.eval(i)).sum(),
        )),
        Level::Matrix => SumValue::Matrix(
            indices
                .map(|i| matrix(q.family, i))
                .fold(IntMat3::zero(), |acc, x| &acc + &x)
                .to_rational(),
        ),
    })
}

/// `(T_{-mn+m-j} - T_{m-j}) (T_0 - T_m)^{-1}`, the T-matrix sum by inversion.
pub fn sum_matrix_form(m: Index, j: Index, n: Index) -> Result<RatMat3> {
    SumQuery::new(BuiltinSeq::Trib, Level::Matrix, m, j, n)?;
    t_stride_sum_via_inverse(m, j, n)
}

/// `sum_{i<n} T(-i) = (T(-n+1) + T(-n-1) + 2T(-n) - 1) / -2`
pub fn t_prefix_sum_special(n: Index) -> Rational {
    use crate::exact::tribonacci as t;
    let num = t(-n + 1) + t(-n - 1) + t(-n) * 2 - 1;
    Rational::new(num, BigInt::from(-2))
}

/// `sum_{i<n} K(-i) = (K(-n+1) + K(-n-1) + 2K(-n) - 6) / -2`
pub fn k_prefix_sum_special(n: Index) -> Rational {
    use crate::exact::tribonacci_lucas as k;
    let num = k(-n + 1) + k(-n - 1) + k(-n) * 2 - 6;
    Rational::new(num, BigInt::from(-2))
}
