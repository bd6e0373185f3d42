use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::{Index, Rational};

/// Expression tree over a single integer variable `n`.
///
/// The parser only produces non-negative `IntConst`s; `-3` parses as `Neg(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    IntConst(BigInt),
    IndexVar,
    /// `(-1)^n`
    AltSign,
    /// `name(a*n + b)`
    SeqTerm {
        name: String,
        a: Index,
        b: Index,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    RatScale(Rational, Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn int(v: impl Into<BigInt>) -> Expr {
        Expr::IntConst(v.into())
    }

    pub fn term(name: impl Into<String>, a: Index, b: Index) -> Expr {
        Expr::SeqTerm {
            name: name.into(),
            a,
            b,
        }
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn pow(self, e: u32) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn scale(self, r: Rational) -> Expr {
        Expr::RatScale(r, Box::new(self))
    }

    /// Sequence names referenced anywhere in the tree, in first-seen order.
    pub fn sequence_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::SeqTerm { name, .. } => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Expr::Neg(x) | Expr::Pow(x, _) | Expr::RatScale(_, x) => x.collect_names(out),
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) => {
                x.collect_names(out);
                y.collect_names(out);
            }
            Expr::IntConst(_) | Expr::IndexVar | Expr::AltSign => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::IntConst(v) if v.is_negative() => 3,
            _ => 5,
        }
    }
}

/// `lhs = rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityAST {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl IdentityAST {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        IdentityAST { lhs, rhs }
    }
}

/// Formats `a*n + b` the way the parser reads it back.
pub fn render_linear(a: Index, b: Index) -> String {
    let head = match a {
        0 => return b.to_string(),
        1 => "n".to_string(),
        -1 => "-n".to_string(),
        _ => format!("{a}*n"),
    };
    match b {
        0 => head,
        b if b > 0 => format!("{head}+{b}"),
        b => format!("{head}-{}", b.unsigned_abs()),
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::IntConst(v) if v.is_negative() => write!(f, "-{}", v.abs()),
            Expr::IntConst(v) => write!(f, "{v}"),
            Expr::IndexVar => f.write_str("n"),
            Expr::AltSign => f.write_str("(-1)^n"),
            Expr::SeqTerm { name, a, b } => write!(f, "{name}({})", render_linear(*a, *b)),
            Expr::Neg(x) => {
                f.write_str("-")?;
                write_wrapped(f, x, x.precedence() < 3)
            }
            Expr::Add(x, y) | Expr::Sub(x, y) => {
                let op = if matches!(self, Expr::Add(..)) {
                    "+"
                } else {
                    "-"
                };
                write!(f, "{x} {op} ")?;
                write_wrapped(f, y, y.precedence() <= 1)
            }
            Expr::Mul(x, y) => {
                write_wrapped(f, x, x.precedence() < 2)?;
                f.write_str("*")?;
                write_wrapped(f, y, y.precedence() <= 2)
            }
            Expr::Pow(x, e) => {
                write_wrapped(f, x, x.precedence() < 5 || matches!(**x, Expr::AltSign))?;
                write!(f, "^{e}")
            }
            Expr::RatScale(r, x) => {
                write!(f, "frac({},{})*", r.numer(), r.denom())?;
                write_wrapped(f, x, x.precedence() < 5)
            }
        }
    }
}

impl fmt::Display for IdentityAST {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Canonical text for an identity; parsing it yields the same tree.
pub fn render(ast: &IdentityAST) -> String {
    ast.to_string()
}
