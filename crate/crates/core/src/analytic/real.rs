//! Binary fixed-point reals and complex numbers of arbitrary precision.
//!
//! A [`RealApprox`] with `bits` of precision stores `round(x * 2^bits)` in a
//! `BigInt`. Products and quotients round back to the same scale, so the
//! absolute error of a single operation is at most one unit in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealApprox {
    mantissa: BigInt,
    bits: u32,
}

/// `round(num / den)` with ties toward positive infinity; `den` must be positive.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if (r << 1u32) >= *den {
        q + 1
    } else {
        q
    }
}

impl RealApprox {
    pub fn zero(bits: u32) -> Self {
        RealApprox {
            mantissa: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(value: impl Into<BigInt>, bits: u32) -> Self {
        RealApprox {
            mantissa: value.into() << bits,
            bits,
        }
    }

    pub fn from_rational(value: &Rational, bits: u32) -> Self {
        RealApprox {
            mantissa: div_round(&(value.numer() << bits), value.denom()),
            bits,
        }
    }

    pub fn from_mantissa(mantissa: BigInt, bits: u32) -> Self {
        RealApprox { mantissa, bits }
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Same value rescaled to another precision.
    pub fn with_precision(&self, bits: u32) -> Self {
        let mantissa = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa << (bits - self.bits),
            Ordering::Less => div_round(&self.mantissa, &(BigInt::from(1) << (self.bits - bits))),
        };
        RealApprox { mantissa, bits }
    }

    pub fn abs(&self) -> Self {
        RealApprox {
            mantissa: self.mantissa.abs(),
            bits: self.bits,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// `|self| < 2^exp`.
    pub fn abs_below_pow2(&self, exp: i64) -> bool {
        let shift = self.bits as i64 + exp;
        if shift < 0 {
            return self.mantissa.is_zero();
        }
        self.mantissa.magnitude().bits() as i64 <= shift
    }

    pub fn recip(&self) -> Self {
        &RealApprox::from_int(1, self.bits) / self
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        RealApprox {
            mantissa: (&self.mantissa << self.bits).sqrt(),
            bits: self.bits,
        }
    }

    pub fn cbrt(&self) -> Self {
        RealApprox {
            mantissa: (&self.mantissa << (2 * self.bits)).cbrt(),
            bits: self.bits,
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = RealApprox::from_int(1, self.bits);
        let mut base = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        // keep the mantissa inside f64 range before scaling
        let excess = self.bits.saturating_sub(960);
        let m = &self.mantissa >> excess;
        let scale = (self.bits - excess) as i32;
        m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-scale)
    }

    /// Nearest integer, ties toward positive infinity.
    pub fn round(&self) -> BigInt {
        div_round(&self.mantissa, &(BigInt::from(1) << self.bits))
    }

    /// Exact value of the stored approximation.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::from(1) << self.bits)
    }

    /// Truncated decimal expansion with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = (self.mantissa.abs() * BigInt::from(10).pow(digits as u32)) >> self.bits;
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    fn check_scale(&self, other: &Self) {
        assert_eq!(
            self.bits, other.bits,
            "mixed precision arithmetic ({} vs {} bits)",
            self.bits, other.bits
        );
    }
}

impl PartialOrd for RealApprox {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check_scale(other);
        Some(self.mantissa.cmp(&other.mantissa))
    }
}

impl fmt::Display for RealApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.bits as usize) * 3 / 10).min(60));
        f.write_str(&self.to_decimal(digits))
    }
}

impl Add for &RealApprox {
    type Output = RealApprox;
    fn add(self, rhs: &RealApprox) -> RealApprox {
        self.check_scale(rhs);
        RealApprox {
            mantissa: &self.mantissa + &rhs.mantissa,
            bits: self.bits,
        }
    }
}

impl Sub for &RealApprox {
    type Output = RealApprox;
    fn sub(self, rhs: &RealApprox) -> RealApprox {
        self.check_scale(rhs);
        RealApprox {
            mantissa: &self.mantissa - &rhs.mantissa,
            bits: self.bits,
        }
    }
}

impl Mul for &RealApprox {
    type Output = RealApprox;
    fn mul(self, rhs: &RealApprox) -> RealApprox {
        self.check_scale(rhs);
        RealApprox {
            mantissa: div_round(
                &(&self.mantissa * &rhs.mantissa),
                &(BigInt::from(1) << self.bits),
            ),
            bits: self.bits,
        }
    }
}

impl Div for &RealApprox {
    type Output = RealApprox;
    fn div(self, rhs: &RealApprox) -> RealApprox {
        self.check_scale(rhs);
        assert!(!rhs.is_zero(), "division by zero");
        let (num, den) = if rhs.is_negative() {
            (-(&self.mantissa << self.bits), -&rhs.mantissa)
        } else {
            (&self.mantissa << self.bits, rhs.mantissa.clone())
        };
        RealApprox {
            mantissa: div_round(&num, &den),
            bits: self.bits,
        }
    }
}

impl Neg for &RealApprox {
    type Output = RealApprox;
    fn neg(self) -> RealApprox {
        RealApprox {
            mantissa: -&self.mantissa,
            bits: self.bits,
        }
    }
}

macro_rules! owned_binops {
    ($t:ty; $($tr:ident $f:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t {
                (&self).$f(&rhs)
            }
        }
    )*};
}

owned_binops!(RealApprox; Add add, Sub sub, Mul mul, Div div);

/// Complex number with [`RealApprox`] components of equal precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: RealApprox,
    pub im: RealApprox,
}

impl ComplexApprox {
    pub fn new(re: RealApprox, im: RealApprox) -> Self {
        assert_eq!(re.bits, im.bits, "component precisions differ");
        ComplexApprox { re, im }
    }

    pub fn from_real(re: RealApprox) -> Self {
        let im = RealApprox::zero(re.bits);
        ComplexApprox { re, im }
    }

    pub fn from_int(value: impl Into<BigInt>, bits: u32) -> Self {
        Self::from_real(RealApprox::from_int(value, bits))
    }

    pub fn zero(bits: u32) -> Self {
        Self::from_int(0, bits)
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.bits
    }

    pub fn conj(&self) -> Self {
        ComplexApprox {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> RealApprox {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> RealApprox {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &RealApprox) -> Self {
        ComplexApprox {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        ComplexApprox {
            re: &self.re / &n,
            im: -&(&self.im / &n),
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = ComplexApprox::from_int(1, self.precision_bits());
        let mut base = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `|re| + |im|`, an upper bound on the modulus that needs no square root.
    pub fn l1_norm(&self) -> RealApprox {
        &self.re.abs() + &self.im.abs()
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.re.bits as usize) * 3 / 10).min(60));
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {} {}i",
            self.re.to_decimal(digits),
            sign,
            self.im.abs().to_decimal(digits)
        )
    }
}

impl Add for &ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: &ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ComplexApprox {
    type Output = ComplexApprox;
    fn sub(self, rhs: &ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: &ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &ComplexApprox {
    type Output = ComplexApprox;
    fn div(self, rhs: &ComplexApprox) -> ComplexApprox {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        ComplexApprox {
            re: &num.re / &n,
            im: &num.im / &n,
        }
    }
}

impl Neg for &ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        ComplexApprox {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

owned_binops!(ComplexApprox; Add add, Sub sub, Mul mul, Div div);
