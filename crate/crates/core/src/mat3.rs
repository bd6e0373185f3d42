//! Exact 3x3 matrices over integers and rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

/// A 3x3 matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3<T> {
    rows: [[T; 3]; 3],
}

pub type IntMat3 = Mat3<BigInt>;
pub type RatMat3 = Mat3<Rational>;

impl<T> Mat3<T> {
    pub const fn from_rows(rows: [[T; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    pub fn rows(&self) -> &[[T; 3]; 3] {
        &self.rows
    }

    pub fn into_rows(self) -> [[T; 3]; 3] {
        self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.rows[row][col]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Mat3<U> {
        Mat3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(&self.rows[i][j]))),
        }
    }

    pub fn zip_with<U, V>(&self, other: &Mat3<U>, mut f: impl FnMut(&T, &U) -> V) -> Mat3<V> {
        Mat3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| f(&self.rows[i][j], &other.rows[i][j]))
            }),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.rows.iter().flat_map(|r| r.iter())
    }
}

impl<T: Clone + Zero + One> Mat3<T> {
    pub fn identity() -> Self {
        Mat3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
            }),
        }
    }

    pub fn zero() -> Self {
        Mat3 {
            rows: std::array::from_fn(|_| std::array::from_fn(|_| T::zero())),
        }
    }
}

impl<T> Mat3<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    pub fn det(&self) -> T {
        let m = &self.rows;
        let c0 = &(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]);
        let c1 = &(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]);
        let c2 = &(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]);
        let t = &(&m[0][0] * &c0) - &(&m[0][1] * &c1);
        &t + &(&m[0][2] * &c2)
    }

    /// Transposed cofactor matrix, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.rows;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
        };
        Mat3 {
            rows: [
                [minor(1, 2, 1, 2), minor(0, 2, 2, 1), minor(0, 1, 1, 2)],
                [minor(1, 2, 2, 0), minor(0, 2, 0, 2), minor(0, 1, 2, 0)],
                [minor(1, 2, 0, 1), minor(0, 2, 1, 0), minor(0, 1, 0, 1)],
            ],
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x * k)
    }
}

impl<'a, T> Mul<&'a Mat3<T>> for &'a Mat3<T>
where
    for<'b> &'b T: Add<&'b T, Output = T> + Mul<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn mul(self, rhs: &'a Mat3<T>) -> Mat3<T> {
        let (a, b) = (&self.rows, &rhs.rows);
        Mat3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let s = &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
                    &s + &(&a[i][2] * &b[2][j])
                })
            }),
        }
    }
}

impl<T> Mul for Mat3<T>
where
    for<'b> &'b T: Add<&'b T, Output = T> + Mul<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn mul(self, rhs: Mat3<T>) -> Mat3<T> {
        &self * &rhs
    }
}

impl<'a, T> Add<&'a Mat3<T>> for &'a Mat3<T>
where
    for<'b> &'b T: Add<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn add(self, rhs: &'a Mat3<T>) -> Mat3<T> {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl<T> Add for Mat3<T>
where
    for<'b> &'b T: Add<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn add(self, rhs: Mat3<T>) -> Mat3<T> {
        &self + &rhs
    }
}

impl<'a, T> Sub<&'a Mat3<T>> for &'a Mat3<T>
where
    for<'b> &'b T: Sub<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn sub(self, rhs: &'a Mat3<T>) -> Mat3<T> {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl<T> Sub for Mat3<T>
where
    for<'b> &'b T: Sub<&'b T, Output = T>,
{
    type Output = Mat3<T>;

    fn sub(self, rhs: Mat3<T>) -> Mat3<T> {
        &self - &rhs
    }
}

impl<T> Neg for &Mat3<T>
where
    for<'b> &'b T: Neg<Output = T>,
{
    type Output = Mat3<T>;

    fn neg(self) -> Mat3<T> {
        self.map(|x| -x)
    }
}

impl IntMat3 {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Mat3 {
            rows: rows.map(|r| r.map(BigInt::from)),
        }
    }

    pub fn to_rational(&self) -> RatMat3 {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    /// Square-and-multiply for non-negative exponents.
    pub fn pow(&self, mut e: u64) -> IntMat3 {
        let mut acc = IntMat3::identity();
        let mut base = self.clone();
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

    pub fn scale_i64(&self, k: i64) -> IntMat3 {
        let k = BigInt::from(k);
        self.map(|x| x * &k)
    }
}

impl Mul<&BigInt> for &IntMat3 {
    type Output = IntMat3;

    fn mul(self, k: &BigInt) -> IntMat3 {
        self.map(|x| x * k)
    }
}

impl RatMat3 {
    pub fn is_integral(&self) -> bool {
        self.entries().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMat3> {
        self.is_integral().then(|| self.map(|x| x.to_integer()))
    }
}

impl From<&IntMat3> for RatMat3 {
    fn from(m: &IntMat3) -> Self {
        m.to_rational()
    }
}

impl From<IntMat3> for RatMat3 {
    fn from(m: IntMat3) -> Self {
        m.to_rational()
    }
}

/// Exact matrix product.
pub fn mat_mul(a: &RatMat3, b: &RatMat3) -> RatMat3 {
    a * b
}

/// Exact inverse as `adj(A) / det(A)`.
pub fn adjugate_inverse(a: &RatMat3) -> Result<RatMat3> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let inv_det = det.recip();
    Ok(a.adjugate().scale(&inv_det))
}

/// Signed integer power. Exponent 0 yields the identity even for singular input.
pub fn mat_pow(a: &RatMat3, e: i64) -> Result<RatMat3> {
    let base = if e < 0 {
        adjugate_inverse(a)?
    } else {
        a.clone()
    };
    let mut e = e.unsigned_abs();
    let mut acc = RatMat3::identity();
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
    Ok(acc)
}

impl<T: fmt::Display> fmt::Display for Mat3<T> {
    /// Row-major, entries separated by spaces, rows by newlines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} {} {}", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// Largest absolute entry, handy for reporting how far apart two matrices are.
pub fn max_abs_entry(m: &RatMat3) -> Rational {
    m.entries()
        .map(|x| x.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}
