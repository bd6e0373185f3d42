//! The Tribonacci matrix sequence `T_n` and Tribonacci-Lucas matrix sequence
//! `K_n` at every signed index.
//!
//! Both are built from one entry layout,
//!
//! ```text
//!         | S(n+1)   S(n)   + S(n-1)   S(n)   |
//! S_n  =  | S(n)     S(n-1) + S(n-2)   S(n-1) |
//!         | S(n-1)   S(n-2) + S(n-3)   S(n-2) |
//! ```
//!
//! with `S = T` or `S = K`. `T_1` is the companion matrix of `x^3 - x^2 - x - 1`
//! and `T_n` is its `n`-th power, so the product laws below hold for all signed
//! indices. The helpers in this module compute both sides of each identity
//! rather than rewriting one into the other.

use num_bigint::BigInt;

use crate::exact::{builtin_run, BuiltinSeq};
pub use crate::mat3::{adjugate_inverse, mat_mul, mat_pow};
use crate::mat3::{IntMat3, RatMat3};
use crate::{Index, Rational, Result};

fn entry_layout(seq: BuiltinSeq, n: Index) -> IntMat3 {
    // S(n-3) .. S(n+1)
    let v = builtin_run(seq, n - 3, 5);
    let s = |offset: i64| &v[(offset + 3) as usize];
    IntMat3::from_rows([
        [s(1).clone(), s(0) + s(-1), s(0).clone()],
        [s(0).clone(), s(-1) + s(-2), s(-1).clone()],
        [s(-1).clone(), s(-2) + s(-3), s(-2).clone()],
    ])
}

/// `T_n` for any signed `n`.
pub fn t_matrix(n: Index) -> IntMat3 {
    entry_layout(BuiltinSeq::Trib, n)
}

/// `K_n` for any signed `n`.
pub fn k_matrix(n: Index) -> IntMat3 {
    entry_layout(BuiltinSeq::TribLucas, n)
}

pub fn matrix(seq: BuiltinSeq, n: Index) -> IntMat3 {
    entry_layout(seq, n)
}

/// Which expansion of `K_{-m} K_{-n}` in terms of `T` matrices to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KkForm {
    /// `9T_{-s+2} - 12T_{-s+1} - 2T_{-s} + 4T_{-s-1} + T_{-s-2}`
    A,
    /// `T_{-s} + 4T_{-s-1} + 10T_{-s-2} + 12T_{-s-3} + 9T_{-s-4}`
    B,
    /// `T_{-s} - 8T_{-s+1} + 18T_{-s+2} - 8T_{-s+3} + T_{-s+4}`
    C,
}

impl KkForm {
    pub const ALL: [KkForm; 3] = [KkForm::A, KkForm::B, KkForm::C];

    /// `(coefficient, offset)` pairs; the term is `coefficient * T_{offset - m - n}`.
    pub fn terms(self) -> &'static [(i64, i64)] {
        match self {
            KkForm::A => &[(9, 2), (-12, 1), (-2, 0), (4, -1), (1, -2)],
            KkForm::B => &[(1, 0), (4, -1), (10, -2), (12, -3), (9, -4)],
            KkForm::C => &[(1, 0), (-8, 1), (18, 2), (-8, 3), (1, 4)],
        }
    }
}

fn t_combination(base: Index, terms: &[(i64, i64)]) -> IntMat3 {
    terms
        .iter()
        .map(|&(c, off)| t_matrix(base + off).scale_i64(c))
        .fold(IntMat3::zero(), |acc, m| &acc + &m)
}

/// `K_{-m} K_{-n}` written as a combination of `T_{-m-n+i}`.
pub fn kk_product_expansion(m: Index, n: Index, form: KkForm) -> IntMat3 {
    t_combination(-m - n, form.terms())
}

/// The three ways of writing `K_{-n}` through `T` matrices, plus the inverse
/// relation through `K` matrices with its denominator of 22.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `K_{-n} = 3T_{-n+1} - 2T_{-n} - T_{-n-1}`
    A,
    /// `K_{-n} = T_{-n} + 2T_{-n-1} + 3T_{-n-2}`
    B,
    /// `K_{-n} = -T_{-n+2} + 4T_{-n+1} - T_{-n}`
    C,
    /// `T_{-n} = (5K_{-n+2} - 3K_{-n+1} - 4K_{-n}) / 22`
    D,
    /// `T_{-n} = (K_{-n} + 5K_{-n-1} + 2K_{-n+1}) / 22`
    DAlt,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::A,
        Relation::B,
        Relation::C,
        Relation::D,
        Relation::DAlt,
    ];
}

/// Left- and right-hand sides of a relation at index `-n`, in that order.
pub fn relation_sides(rel: Relation, n: Index) -> (RatMat3, RatMat3) {
    let base = -n;
    let combo = |seq: BuiltinSeq, terms: &[(i64, i64)]| -> RatMat3 {
        terms
            .iter()
            .map(|&(c, off)| matrix(seq, base + off).scale_i64(c))
            .fold(IntMat3::zero(), |acc, m| &acc + &m)
            .to_rational()
    };
    let twenty_second = Rational::new(BigInt::from(1), BigInt::from(22));
    match rel {
        Relation::A => (
            k_matrix(base).to_rational(),
            combo(BuiltinSeq::Trib, &[(3, 1), (-2, 0), (-1, -1)]),
        ),
        Relation::B => (
            k_matrix(base).to_rational(),
            combo(BuiltinSeq::Trib, &[(1, 0), (2, -1), (3, -2)]),
        ),
        Relation::C => (
            k_matrix(base).to_rational(),
            combo(BuiltinSeq::Trib, &[(-1, 2), (4, 1), (-1, 0)]),
        ),
        Relation::D => (
            t_matrix(base).to_rational(),
            combo(BuiltinSeq::TribLucas, &[(5, 2), (-3, 1), (-4, 0)]).scale(&twenty_second),
        ),
        Relation::DAlt => (
            t_matrix(base).to_rational(),
            combo(BuiltinSeq::TribLucas, &[(1, 0), (5, -1), (2, 1)]).scale(&twenty_second),
        ),
    }
}

/// `K_0^{1-n} K_{-1}^n`, which cancels back to the integral `K_{-n}`.
pub fn k_chain(n: Index) -> Result<RatMat3> {
    let k0 = k_matrix(0).to_rational();
    let km1 = k_matrix(-1).to_rational();
    Ok(&mat_pow(&k0, 1 - n)? * &mat_pow(&km1, n)?)
}

/// `sum_{i<n} T_{-mi-j}` as `(T_{-mn+m-j} - T_{m-j}) (T_0 - T_m)^{-1}`.
pub fn t_stride_sum_via_inverse(m: Index, j: Index, n: Index) -> Result<RatMat3> {
    let lhs = (&t_matrix(-m * n + m - j) - &t_matrix(m - j)).to_rational();
    let denom = (&IntMat3::identity() - &t_matrix(m)).to_rational();
    Ok(&lhs * &adjugate_inverse(&denom)?)
}

/// Scalar identity read off the (row 2, column 1) entries of `T_{-m} T_{-n}`.
pub fn scalar_product_corollary(m: Index, n: Index) -> (BigInt, BigInt) {
    use crate::exact::tribonacci as t;
    let lhs = t(-m - n);
    let rhs = t(-m) * t(-n + 1) + t(-n) * (t(-m - 1) + t(-m - 2)) + t(-m - 1) * t(-n - 1);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn im(rows: [[i64; 3]; 3]) -> IntMat3 {
        IntMat3::from_i64(rows)
    }

    #[test]
    fn displayed_matrices() {
        assert_eq!(t_matrix(0), IntMat3::identity());
        assert_eq!(t_matrix(1), im([[1, 1, 1], [1, 0, 0], [0, 1, 0]]));
        assert_eq!(t_matrix(2), im([[2, 2, 1], [1, 1, 1], [1, 0, 0]]));
        assert_eq!(t_matrix(-1), im([[0, 1, 0], [0, 0, 1], [1, -1, -1]]));
        assert_eq!(t_matrix(-2), im([[0, 0, 1], [1, -1, -1], [-1, 2, 0]]));
        assert_eq!(t_matrix(-3), im([[1, -1, -1], [-1, 2, 0], [0, -1, 2]]));
        assert_eq!(k_matrix(0), im([[1, 2, 3], [3, -2, -1], [-1, 4, -1]]));
        assert_eq!(k_matrix(1), im([[3, 4, 1], [1, 2, 3], [3, -2, -1]]));
        assert_eq!(k_matrix(2), im([[7, 4, 3], [3, 4, 1], [1, 2, 3]]));
        assert_eq!(k_matrix(-1), im([[3, -2, -1], [-1, 4, -1], [-1, 0, 5]]));
        assert_eq!(k_matrix(-2), im([[-1, 4, -1], [-1, 0, 5], [5, -6, -5]]));
        assert_eq!(k_matrix(-3), im([[-1, 0, 5], [5, -6, -5], [-5, 10, -1]]));
    }

    #[test]
    fn products_from_the_definitions() {
        let r = |n| t_matrix(n).to_rational();
        assert_eq!(mat_mul(&r(1), &r(-1)), RatMat3::identity());
        assert_eq!(mat_mul(&r(-1), &r(-1)), r(-2));
        let km1 = k_matrix(-1).to_rational();
        assert_eq!(mat_mul(&RatMat3::identity(), &km1), km1);
        assert_eq!(mat_pow(&r(1), 7).unwrap(), r(7));
        assert_eq!(mat_pow(&r(-2), 3).unwrap(), r(-6));
    }

    #[test]
    fn kk_forms_against_direct_products() {
        for (m, n) in [(0, 0), (1, 0), (2, 1), (5, 3), (-4, 7)] {
            let direct = &k_matrix(-m) * &k_matrix(-n);
            for form in KkForm::ALL {
                assert_eq!(
                    kk_product_expansion(m, n, form),
                    direct,
                    "{form:?} at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn relations_hold() {
        for n in -15..=15 {
            for rel in Relation::ALL {
                let (l, r) = relation_sides(rel, n);
                assert_eq!(l, r, "{rel:?} at n={n}");
            }
        }
    }

    #[test]
    fn k_chain_cancels_to_integers() {
        for n in -6..=10 {
            let chain = k_chain(n).unwrap();
            assert!(chain.is_integral());
            assert_eq!(chain.to_integer().unwrap(), k_matrix(-n));
        }
    }

    #[test]
    fn stride_sum_inverse_form() {
        let s = t_stride_sum_via_inverse(1, 0, 3).unwrap();
        let direct = &(&t_matrix(0) + &t_matrix(-1)) + &t_matrix(-2);
        assert_eq!(s, direct.to_rational());
        let s = t_stride_sum_via_inverse(2, 1, 2).unwrap();
        assert_eq!(s, (&t_matrix(-1) + &t_matrix(-3)).to_rational());
    }

    #[test]
    fn determinants() {
        for n in -30..=30 {
            assert!(t_matrix(n).det().is_one());
            assert_eq!(k_matrix(n).det(), BigInt::from(44));
        }
    }

    #[test]
    fn scalar_corollary_a() {
        for m in 0..8 {
            for n in 0..8 {
                let (l, r) = scalar_product_corollary(m, n);
                assert_eq!(l, r);
            }
        }
    }
}
