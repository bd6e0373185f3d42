//! Power-series coefficients of rational generating functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::mat3::{IntMat3, Mat3};
use crate::{Error, Rational, Result};

/// `numerator(x) / denominator(x)`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGF {
    numerator: Vec<BigInt>,
    denominator: Vec<BigInt>,
}

impl RationalGF {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> Result<Self> {
        match denominator.first() {
            Some(c) if !c.is_zero() => Ok(RationalGF {
                numerator,
                denominator,
            }),
            _ => Err(Error::ZeroDenominator(
                "generating function denominator has zero constant term".into(),
            )),
        }
    }

    pub fn from_i64(numerator: &[i64], denominator: &[i64]) -> Result<Self> {
        Self::new(
            numerator.iter().map(|&c| c.into()).collect(),
            denominator.iter().map(|&c| c.into()).collect(),
        )
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }
}

fn fmt_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (deg, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let mag = if neg { -c } else { c.clone() };
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let one = mag == BigInt::from(1);
        match deg {
            0 => write!(f, "{mag}")?,
            1 if one => f.write_str("x")?,
            1 => write!(f, "{mag}x")?,
            _ if one => write!(f, "x^{deg}")?,
            _ => write!(f, "{mag}x^{deg}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_poly(f, &self.numerator)?;
        f.write_str(")/(")?;
        fmt_poly(f, &self.denominator)?;
        f.write_str(")")
    }
}

/// First `count` Maclaurin coefficients of `gf`.
///
/// Driven by the recurrence the denominator imposes:
/// `q_0 c_n = p_n - q_1 c_{n-1} - ... - q_d c_{n-d}`.
pub fn gf_coefficients(gf: &RationalGF, count: usize) -> Result<Vec<Rational>> {
    let q = &gf.denominator;
    let q0 = match q.first() {
        Some(c) if !c.is_zero() => Rational::from_integer(c.clone()),
        _ => {
            return Err(Error::ZeroDenominator(
                "generating function denominator has zero constant term".into(),
            ))
        }
    };
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc = gf
            .numerator
            .get(n)
            .map(|p| Rational::from_integer(p.clone()))
            .unwrap_or_else(Rational::zero);
        for (i, qi) in q.iter().enumerate().skip(1).take(n) {
            if !qi.is_zero() {
                acc -= &out[n - i] * qi;
            }
        }
        out.push(acc / &q0);
    }
    Ok(out)
}

/// A 3x3 grid of numerators over one shared denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGF {
    numerators: Mat3<Vec<BigInt>>,
    denominator: Vec<BigInt>,
}

impl MatrixGF {
    pub fn new(numerators: Mat3<Vec<BigInt>>, denominator: Vec<BigInt>) -> Result<Self> {
        RationalGF::new(Vec::new(), denominator.clone())?;
        Ok(MatrixGF {
            numerators,
            denominator,
        })
    }

    pub fn entry(&self, row: usize, col: usize) -> RationalGF {
        RationalGF {
            numerator: self.numerators.get(row, col).clone(),
            denominator: self.denominator.clone(),
        }
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }
}

/// The generating functions that ship with the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GfKind {
    /// `sum T(n) x^n`
    TPos,
    /// `sum K(n) x^n`
    KPos,
    /// `sum T(-n) x^n`
    TNeg,
    /// `sum K(-n) x^n`
    KNeg,
    /// `sum T_{-n} x^n`
    TMatNeg,
    /// `sum K_{-n} x^n`
    KMatNeg,
}

impl GfKind {
    pub const ALL: [GfKind; 6] = [
        GfKind::TPos,
        GfKind::KPos,
        GfKind::TNeg,
        GfKind::KNeg,
        GfKind::TMatNeg,
        GfKind::KMatNeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GfKind::TPos => "T_POS",
            GfKind::KPos => "K_POS",
            GfKind::TNeg => "T_NEG",
            GfKind::KNeg => "K_NEG",
            GfKind::TMatNeg => "TMAT_NEG",
            GfKind::KMatNeg => "KMAT_NEG",
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, GfKind::TMatNeg | GfKind::KMatNeg)
    }
}

impl fmt::Display for GfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        GfKind::ALL
            .into_iter()
            .find(|k| k.name() == up)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generating function `{s}`")))
    }
}

/// Either shape of builtin generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinGf {
    Scalar(RationalGF),
    Matrix(MatrixGF),
}

const POS_DENOM: [i64; 4] = [1, -1, -1, -1];
const NEG_DENOM: [i64; 4] = [1, 1, 1, -1];

fn poly(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| x.into()).collect()
}

pub fn builtin_gf(kind: GfKind) -> BuiltinGf {
    let scalar = |num: &[i64], den: &[i64]| {
        BuiltinGf::Scalar(RationalGF::from_i64(num, den).expect("builtin denominator"))
    };
    let matrix = |rows: [[&[i64]; 3]; 3]| {
        BuiltinGf::Matrix(
            MatrixGF::new(Mat3::from_rows(rows.map(|r| r.map(poly))), poly(&NEG_DENOM))
                .expect("builtin denominator"),
        )
    };
    match kind {
        GfKind::TPos => scalar(&[0, 1], &POS_DENOM),
        GfKind::KPos => scalar(&[3, -2, -1], &POS_DENOM),
        GfKind::TNeg => scalar(&[0, 0, 1], &NEG_DENOM),
        GfKind::KNeg => scalar(&[3, 2, 1], &NEG_DENOM),
        GfKind::TMatNeg => matrix([
            [&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]],
            [&[0, 0, 1], &[1, 1], &[0, 1]],
            [&[0, 1], &[0, -1, 1], &[1]],
        ]),
        GfKind::KMatNeg => matrix([
            [&[1, 4, 3], &[2, 0, 4], &[3, 2, 1]],
            [&[3, 2, 1], &[-2, 2, 2], &[-1, -2, 3]],
            [&[-1, -2, 3], &[4, 4, -2], &[-1, 4, -1]],
        ]),
    }
}

/// The first `count` matrix coefficients of a matrix generating function.
pub fn matrix_gf_coefficients(kind: GfKind, count: usize) -> Result<Vec<IntMat3>> {
    let gf = match builtin_gf(kind) {
        BuiltinGf::Matrix(m) => m,
        BuiltinGf::Scalar(_) => {
            return Err(Error::InvalidArgument(format!(
                "{kind} is not a matrix generating function"
            )))
        }
    };
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let coeffs = gf_coefficients(&gf.entry(i, j), count)?;
            cols.push(coeffs.into_iter().map(integral).collect::<Result<_>>()?);
        }
    }
    Ok((0..count)
        .map(|n| {
            Mat3::from_rows(std::array::from_fn(|i| {
                std::array::from_fn(|j| cols[3 * i + j][n].clone())
            }))
        })
        .collect())
}

fn integral(c: Rational) -> Result<BigInt> {
    if c.is_integer() {
        Ok(c.to_integer())
    } else {
        Err(Error::InvalidArgument(format!(
            "non-integral coefficient {c}"
        )))
    }
}

/// Coefficients of any builtin, flattened to rationals for scalar kinds.
pub fn scalar_gf_coefficients(kind: GfKind, count: usize) -> Result<Vec<Rational>> {
    match builtin_gf(kind) {
        BuiltinGf::Scalar(gf) => gf_coefficients(&gf, count),
        BuiltinGf::Matrix(_) => Err(Error::InvalidArgument(format!(
            "{kind} is a matrix generating function"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_seq::{k_matrix, t_matrix};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn scalar_examples() {
        let t = RationalGF::from_i64(&[0, 1], &[1, -1, -1, -1]).unwrap();
        assert_eq!(gf_coefficients(&t, 6).unwrap(), ints(&[0, 1, 1, 2, 4, 7]));
        let geo = RationalGF::from_i64(&[1], &[1, -1]).unwrap();
        assert_eq!(gf_coefficients(&geo, 4).unwrap(), ints(&[1, 1, 1, 1]));
        let k = RationalGF::from_i64(&[3, -2, -1], &[1, -1, -1, -1]).unwrap();
        assert_eq!(gf_coefficients(&k, 5).unwrap(), ints(&[3, 1, 3, 7, 11]));
    }

    #[test]
    fn non_unit_leading_denominator() {
        // 1 / (2 - x) = sum x^n / 2^(n+1)
        let gf = RationalGF::from_i64(&[1], &[2, -1]).unwrap();
        let c = gf_coefficients(&gf, 4).unwrap();
        assert_eq!(c[3], Rational::new(1.into(), 16.into()));
    }

    #[test]
    fn zero_constant_term_rejected() {
        assert!(matches!(
            RationalGF::from_i64(&[1], &[0, 1]),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn builtins() {
        match builtin_gf(GfKind::TNeg) {
            BuiltinGf::Scalar(g) => {
                assert_eq!(g.numerator(), poly(&[0, 0, 1]).as_slice());
                assert_eq!(g.denominator(), poly(&[1, 1, 1, -1]).as_slice());
            }
            _ => panic!("scalar expected"),
        }
        assert_eq!(
            scalar_gf_coefficients(GfKind::KNeg, 5).unwrap(),
            ints(&[3, -1, -1, 5, -5])
        );
        match builtin_gf(GfKind::TMatNeg) {
            BuiltinGf::Matrix(m) => {
                assert_eq!(
                    m.entry(0, 0).to_string(),
                    "(1 + x + x^2)/(1 + x + x^2 - x^3)"
                )
            }
            _ => panic!("matrix expected"),
        }
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(
            matrix_gf_coefficients(GfKind::TMatNeg, 1).unwrap(),
            vec![IntMat3::identity()]
        );
        assert_eq!(
            matrix_gf_coefficients(GfKind::TMatNeg, 3).unwrap()[2],
            t_matrix(-2)
        );
        assert_eq!(
            matrix_gf_coefficients(GfKind::KMatNeg, 2).unwrap()[1],
            k_matrix(-1)
        );
        assert!(matrix_gf_coefficients(GfKind::TPos, 2).is_err());
        assert!(matrix_gf_coefficients(GfKind::KMatNeg, 0).is_err());
    }

    #[test]
    fn kind_names_parse() {
        for k in GfKind::ALL {
            assert_eq!(k.name().parse::<GfKind>().unwrap(), k);
        }
        assert_eq!("tmat-neg".parse::<GfKind>().unwrap(), GfKind::TMatNeg);
        assert!("nope".parse::<GfKind>().is_err());
    }
}
