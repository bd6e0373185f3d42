//! Binet-form evaluation from numerically isolated roots of `x^3 - x^2 - x - 1`.
//!
//! Everything here is an approximation and is only trusted after comparison
//! with the exact engine. Roots are found on the real axis by bisection and
//! Newton's method; the complex pair then comes from the quadratic
//! `x^2 - (1 - alpha) x + 1/alpha`, which follows from `alpha + beta + gamma = 1`
//! and `alpha beta gamma = 1`.
//!
//! Internal evaluation runs with [`GUARD_BITS`] extra bits and rounds back to
//! the requested precision on return.

mod real;

pub use real::{ComplexApprox, RealApprox};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{tribonacci, BuiltinSeq};
use crate::mat3::{IntMat3, Mat3};
use crate::matrix_seq::matrix;
use crate::{Error, Index, Rational, Result};

/// Smallest precision accepted by the public entry points.
pub const MIN_PRECISION: u32 = 64;

/// Extra working bits used inside evaluations.
pub const GUARD_BITS: u32 = 32;

/// Residual allowed by the rounding accessors.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;

fn check_precision(bits: u32) {
    assert!(
        bits >= MIN_PRECISION,
        "precision must be at least {MIN_PRECISION} bits, got {bits}"
    );
}

/// The three roots of `x^3 - x^2 - x - 1`: one real, one conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicRoots {
    pub alpha: RealApprox,
    pub beta: ComplexApprox,
    pub gamma: ComplexApprox,
    pub precision_bits: u32,
}

impl CubicRoots {
    /// `[alpha, beta, gamma]` as complex numbers.
    pub fn as_complex(&self) -> [ComplexApprox; 3] {
        [
            ComplexApprox::from_real(self.alpha.clone()),
            self.beta.clone(),
            self.gamma.clone(),
        ]
    }

    /// Same roots rounded to a lower precision.
    pub fn with_precision(&self, bits: u32) -> CubicRoots {
        let c = |z: &ComplexApprox| {
            ComplexApprox::new(z.re.with_precision(bits), z.im.with_precision(bits))
        };
        CubicRoots {
            alpha: self.alpha.with_precision(bits),
            beta: c(&self.beta),
            gamma: c(&self.gamma),
            precision_bits: bits,
        }
    }
}

fn cubic(x: &RealApprox) -> RealApprox {
    let bits = x.precision_bits();
    let one = RealApprox::from_int(1, bits);
    // ((x - 1) x - 1) x - 1
    let t = &(&(&(x - &one) * x) - &one) * x;
    &t - &one
}

fn cubic_slope(x: &RealApprox) -> RealApprox {
    let bits = x.precision_bits();
    // (3x - 2) x - 1
    let t = &(&(x * &RealApprox::from_int(3, bits)) - &RealApprox::from_int(2, bits)) * x;
    &t - &RealApprox::from_int(1, bits)
}

/// `z^3 - z^2 - z - 1` evaluated at a complex point.
pub fn cubic_residual(z: &ComplexApprox) -> ComplexApprox {
    let one = ComplexApprox::from_int(1, z.precision_bits());
    let t = &(&(&(z - &one) * z) - &one) * z;
    &t - &one
}

/// Roots of `x^3 - x^2 - x - 1` to `precision_bits` fractional bits.
pub fn tribonacci_roots(precision_bits: u32) -> CubicRoots {
    check_precision(precision_bits);
    let bits = precision_bits;
    let mut lo = RealApprox::from_int(1, bits);
    let mut hi = RealApprox::from_int(2, bits);
    let half = RealApprox::from_rational(&Rational::new(1.into(), 2.into()), bits);
    // f(1) < 0 < f(2); 32 halvings give a safe start for Newton
    for _ in 0..32 {
        let mid = &(&lo + &hi) * &half;
        if cubic(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut alpha = lo;
    for _ in 0..64 {
        let step = &cubic(&alpha) / &cubic_slope(&alpha);
        alpha = &alpha - &step;
        if step.mantissa().magnitude().bits() <= 1 {
            break;
        }
    }

    let one = RealApprox::from_int(1, bits);
    let re = &(&one - &alpha) * &half;
    let product = alpha.recip();
    let im = (&product - &(&re * &re)).sqrt();
    let beta = ComplexApprox::new(re.clone(), im.clone());
    let gamma = beta.conj();
    CubicRoots {
        alpha,
        beta,
        gamma,
        precision_bits,
    }
}

/// `(1 + cbrt(19 + 3 sqrt 33) + cbrt(19 - 3 sqrt 33)) / 3`, for cross-checking
/// the numerically isolated real root.
pub fn alpha_from_radicals(precision_bits: u32) -> RealApprox {
    check_precision(precision_bits);
    let bits = precision_bits + GUARD_BITS;
    let int = |v: i64| RealApprox::from_int(v, bits);
    let root33 = int(33).sqrt();
    let shift = &int(3) * &root33;
    let u = (&int(19) + &shift).cbrt();
    let v = (&int(19) - &shift).cbrt();
    (&(&(&int(1) + &u) + &v) / &int(3)).with_precision(precision_bits)
}

/// Which pair of initial matrices the coefficient formulas start from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// From `S_0, S_1, S_2`.
    Positive,
    /// From `S_0, S_{-1}, S_{-2}`.
    Negative,
}

/// Matrix Binet coefficients: `S_n = A alpha^n + B beta^n + C gamma^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinetCoeffs {
    pub a: Mat3<ComplexApprox>,
    pub b: Mat3<ComplexApprox>,
    pub c: Mat3<ComplexApprox>,
    pub family: BuiltinSeq,
    pub direction: Direction,
    pub precision_bits: u32,
}

impl BinetCoeffs {
    pub fn as_array(&self) -> [&Mat3<ComplexApprox>; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `A r_1^n + B r_2^n + C r_3^n` with the roots the coefficients were built from.
    pub fn evaluate(&self, roots: &CubicRoots, n: Index) -> Mat3<ComplexApprox> {
        let powers = roots.as_complex().map(|r| r.powi(n));
        let terms: Vec<Mat3<ComplexApprox>> = self
            .as_array()
            .iter()
            .zip(powers.iter())
            .map(|(m, p)| m.map(|x| x * p))
            .collect();
        &(&terms[0] + &terms[1]) + &terms[2]
    }
}

fn complex_matrix(m: &IntMat3, bits: u32) -> Mat3<ComplexApprox> {
    m.map(|x| ComplexApprox::from_int(x.clone(), bits))
}

fn scale_matrix(m: &Mat3<ComplexApprox>, k: &ComplexApprox) -> Mat3<ComplexApprox> {
    m.map(|x| x * k)
}

fn coefficients_from_roots(
    roots: &CubicRoots,
    family: BuiltinSeq,
    direction: Direction,
) -> BinetCoeffs {
    let bits = roots.precision_bits;
    let r = roots.as_complex();
    let one = ComplexApprox::from_int(1, bits);
    let mats = match direction {
        Direction::Positive => [0, 1, 2],
        Direction::Negative => [0, -1, -2],
    }
    .map(|i| complex_matrix(&matrix(family, i), bits));
    let coeff = |k: usize| {
        let x = &r[k];
        let (s, t) = (&r[(k + 1) % 3], &r[(k + 2) % 3]);
        let spread = &(x - s) * &(x - t);
        let x_sq = x * x;
        match direction {
            Direction::Positive => {
                // (x S_2 + x(x-1) S_1 + S_0) / (x (x-s)(x-t))
                let num = &(&scale_matrix(&mats[2], x)
                    + &scale_matrix(&mats[1], &(x * &(x - &one))))
                    + &mats[0];
                scale_matrix(&num, &(&spread * x).recip())
            }
            Direction::Negative => {
                // (x S_{-2} + (x-1) x^2 S_{-1} + x^2 S_0) / ((x-s)(x-t))
                let num = &(&scale_matrix(&mats[2], x)
                    + &scale_matrix(&mats[1], &(&(x - &one) * &x_sq)))
                    + &scale_matrix(&mats[0], &x_sq);
                scale_matrix(&num, &spread.recip())
            }
        }
    };
    BinetCoeffs {
        a: coeff(0),
        b: coeff(1),
        c: coeff(2),
        family,
        direction,
        precision_bits: bits,
    }
}

fn round_matrix(m: &Mat3<ComplexApprox>, bits: u32) -> Mat3<ComplexApprox> {
    m.map(|z| ComplexApprox::new(z.re.with_precision(bits), z.im.with_precision(bits)))
}

/// Coefficient matrices from the closed forms, at `precision_bits`.
pub fn binet_coefficients(
    family: BuiltinSeq,
    direction: Direction,
    precision_bits: u32,
) -> BinetCoeffs {
    check_precision(precision_bits);
    let roots = tribonacci_roots(precision_bits + GUARD_BITS);
    let c = coefficients_from_roots(&roots, family, direction);
    BinetCoeffs {
        a: round_matrix(&c.a, precision_bits),
        b: round_matrix(&c.b, precision_bits),
        c: round_matrix(&c.c, precision_bits),
        precision_bits,
        ..c
    }
}

/// Full complex Binet sum for `T(n)`; the imaginary part is rounding residue.
pub fn binet_t_complex(n: Index, precision_bits: u32) -> ComplexApprox {
    check_precision(precision_bits);
    let roots = tribonacci_roots(precision_bits + GUARD_BITS);
    let r = roots.as_complex();
    let mut sum = ComplexApprox::zero(roots.precision_bits);
    for k in 0..3 {
        let x = &r[k];
        let denom = &(x - &r[(k + 1) % 3]) * &(x - &r[(k + 2) % 3]);
        sum = &sum + &(&x.powi(n + 1) / &denom);
    }
    ComplexApprox::new(
        sum.re.with_precision(precision_bits),
        sum.im.with_precision(precision_bits),
    )
}

/// Full complex power sum `alpha^n + beta^n + gamma^n` for `K(n)`.
pub fn binet_k_complex(n: Index, precision_bits: u32) -> ComplexApprox {
    check_precision(precision_bits);
    let roots = tribonacci_roots(precision_bits + GUARD_BITS);
    let sum = roots
        .as_complex()
        .iter()
        .fold(ComplexApprox::zero(roots.precision_bits), |acc, x| {
            &acc + &x.powi(n)
        });
    ComplexApprox::new(
        sum.re.with_precision(precision_bits),
        sum.im.with_precision(precision_bits),
    )
}

/// Real part of the Binet sum for `T(n)`.
pub fn binet_t(n: Index, precision_bits: u32) -> RealApprox {
    binet_t_complex(n, precision_bits).re
}

/// Real part of the power sum for `K(n)`.
pub fn binet_k(n: Index, precision_bits: u32) -> RealApprox {
    binet_k_complex(n, precision_bits).re
}

/// An analytic value snapped to the nearest integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rounded {
    pub nearest: BigInt,
    /// `value - nearest`
    pub residual: RealApprox,
}

fn snap(value: RealApprox) -> Result<Rounded> {
    let nearest = value.round();
    let residual = &value - &RealApprox::from_int(nearest.clone(), value.precision_bits());
    let r = residual.to_f64().abs();
    if r > ROUNDING_TOLERANCE {
        return Err(Error::RoundingResidual {
            value: value.to_decimal(12),
            residual: format!("{r:e}"),
        });
    }
    Ok(Rounded { nearest, residual })
}

pub fn binet_t_rounded(n: Index, precision_bits: u32) -> Result<Rounded> {
    snap(binet_t(n, precision_bits))
}

pub fn binet_k_rounded(n: Index, precision_bits: u32) -> Result<Rounded> {
    snap(binet_k(n, precision_bits))
}

pub fn binet_rounded(family: BuiltinSeq, n: Index, precision_bits: u32) -> Result<Rounded> {
    match family {
        BuiltinSeq::Trib => binet_t_rounded(n, precision_bits),
        BuiltinSeq::TribLucas => binet_k_rounded(n, precision_bits),
    }
}

pub fn binet(family: BuiltinSeq, n: Index, precision_bits: u32) -> RealApprox {
    match family {
        BuiltinSeq::Trib => binet_t(n, precision_bits),
        BuiltinSeq::TribLucas => binet_k(n, precision_bits),
    }
}

/// Matrix Binet sum for `S_n`, real parts only.
pub fn binet_matrix(family: BuiltinSeq, n: Index, precision_bits: u32) -> Mat3<RealApprox> {
    binet_matrix_complex(family, n, precision_bits).map(|z| z.re.clone())
}

/// Matrix Binet sum with imaginary residue kept.
pub fn binet_matrix_complex(
    family: BuiltinSeq,
    n: Index,
    precision_bits: u32,
) -> Mat3<ComplexApprox> {
    check_precision(precision_bits);
    let roots = tribonacci_roots(precision_bits + GUARD_BITS);
    let direction = if n >= 0 {
        Direction::Positive
    } else {
        Direction::Negative
    };
    let coeffs = coefficients_from_roots(&roots, family, direction);
    round_matrix(&coeffs.evaluate(&roots, n), precision_bits)
}

/// `T(n+1) / T(n)` rounded to `precision_bits`.
pub fn consecutive_ratio(n: Index, precision_bits: u32) -> Result<RealApprox> {
    check_precision(precision_bits);
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "ratio index must be positive, got {n}"
        )));
    }
    let den = tribonacci(n);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("T({n}) = 0")));
    }
    let ratio = Rational::new(tribonacci(n + 1), den);
    Ok(RealApprox::from_rational(&ratio, precision_bits))
}

/// Largest `|re| + |im|` over the entrywise difference.
pub fn max_entry_distance(x: &Mat3<ComplexApprox>, y: &Mat3<ComplexApprox>) -> RealApprox {
    let diff = x - y;
    let bits = diff.get(0, 0).precision_bits();
    diff.entries()
        .map(|z| z.l1_norm())
        .fold(RealApprox::zero(bits), |a, b| if b > a { b } else { a })
}

/// Largest absolute entrywise difference between an approximation and an exact matrix.
pub fn max_distance_to_exact(x: &Mat3<RealApprox>, exact: &IntMat3) -> RealApprox {
    let bits = x.get(0, 0).precision_bits();
    x.zip_with(exact, |a, e| {
        (a - &RealApprox::from_int(e.clone(), bits)).abs()
    })
    .entries()
    .cloned()
    .fold(RealApprox::zero(bits), |a, b| if b > a { b } else { a })
}

/// Exact integer matrix lifted into complex approximations.
pub fn lift(m: &IntMat3, bits: u32) -> Mat3<ComplexApprox> {
    complex_matrix(m, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_seq::{k_matrix, t_matrix};

    fn close(x: &RealApprox, target: f64, tol: f64) -> bool {
        (x.to_f64() - target).abs() < tol
    }

    #[test]
    fn roots_and_symmetric_functions() {
        let roots = tribonacci_roots(128);
        assert!(roots.alpha.to_decimal(16).starts_with("1.8392867552141611"));
        let bits = 128;
        let tol = -(bits as i64) + 8;
        for r in roots.as_complex() {
            let res = cubic_residual(&r);
            assert!(res.re.abs_below_pow2(tol) && res.im.abs_below_pow2(tol));
        }
        let [a, b, c] = roots.as_complex();
        let one = ComplexApprox::from_int(1, bits);
        let sum = &(&a + &b) + &c;
        assert!((&sum - &one).l1_norm().abs_below_pow2(-64));
        let pair = &(&(&a * &b) + &(&a * &c)) + &(&b * &c);
        assert!((&pair + &one).l1_norm().abs_below_pow2(-64));
        let prod = &(&a * &b) * &c;
        assert!((&prod - &one).l1_norm().abs_below_pow2(-64));
        assert_eq!(roots.gamma, roots.beta.conj());
        assert!(roots.alpha > roots.beta.abs());
    }

    #[test]
    fn radicals_agree_with_numeric_root() {
        for bits in [64, 128, 300] {
            let numeric = tribonacci_roots(bits).alpha;
            let closed = alpha_from_radicals(bits);
            assert!((&numeric - &closed).abs_below_pow2(-(bits as i64) + 4));
        }
    }

    #[test]
    fn scalar_binet_values() {
        assert!(close(&binet_t(10, 192), 149.0, 1e-20));
        assert!(close(&binet_t(0, 128), 0.0, 1e-20));
        assert!(close(&binet_t(-8, 192), 4.0, 1e-20));
        assert!(close(&binet_k(0, 128), 3.0, 1e-20));
        assert!(close(&binet_k(7, 192), 71.0, 1e-20));
        assert!(close(&binet_k(-9, 192), 23.0, 1e-20));
        let z = binet_t_complex(25, 128);
        assert!(z.im.abs_below_pow2(-64));
    }

    #[test]
    fn rounding_accessor() {
        let r = binet_t_rounded(-12, 128).unwrap();
        assert_eq!(r.nearest, BigInt::from(-20));
        let r = binet_k_rounded(12, 128).unwrap();
        assert_eq!(r.nearest, BigInt::from(1499));
        // 64 bits cannot resolve K(400) to the nearest integer
        assert!(matches!(
            binet_k_rounded(400, 64),
            Err(Error::RoundingResidual { .. })
        ));
    }

    #[test]
    fn coefficient_sums() {
        let bits = 128;
        let tol = -(bits as i64) / 2;
        let t = binet_coefficients(BuiltinSeq::Trib, Direction::Positive, bits);
        let sum = &(&t.a + &t.b) + &t.c;
        assert!(max_entry_distance(&sum, &lift(&IntMat3::identity(), bits)).abs_below_pow2(tol));

        let roots = tribonacci_roots(bits + GUARD_BITS);
        let k = coefficients_from_roots(&roots, BuiltinSeq::TribLucas, Direction::Negative);
        let at_minus_one = round_matrix(&k.evaluate(&roots, -1), bits);
        assert!(max_entry_distance(&at_minus_one, &lift(&k_matrix(-1), bits)).abs_below_pow2(tol));
    }

    #[test]
    fn matrix_binet_values() {
        let cases = [
            (BuiltinSeq::Trib, -2, 192, t_matrix(-2)),
            (BuiltinSeq::Trib, 0, 128, IntMat3::identity()),
            (BuiltinSeq::TribLucas, -3, 256, k_matrix(-3)),
        ];
        for (family, n, bits, exact) in cases {
            let approx = binet_matrix(family, n, bits);
            assert!(max_distance_to_exact(&approx, &exact).to_f64() < 1e-10);
        }
    }

    #[test]
    fn ratios() {
        let alpha = tribonacci_roots(128).alpha;
        let r = consecutive_ratio(100, 128).unwrap();
        assert!((&r - &alpha).to_f64().abs() < 1e-15);
        let r = consecutive_ratio(5, 64).unwrap();
        assert!(close(&r, 13.0 / 7.0, 1e-15));
        assert_eq!(
            consecutive_ratio(1, 64).unwrap(),
            RealApprox::from_int(1, 64)
        );
        assert!(matches!(
            consecutive_ratio(0, 64),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    #[should_panic(expected = "at least 64 bits")]
    fn low_precision_rejected() {
        tribonacci_roots(32);
    }
}
