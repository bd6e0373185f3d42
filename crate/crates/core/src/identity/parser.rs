use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::ast::{Expr, IdentityAST};
use crate::{Index, Rational};

/// Malformed identity text. `position` is a 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Equals,
    Slash,
    Other(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Other(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("ascii digits"))));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            '/' => Tok::Slash,
            other => Tok::Other(other),
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            expected: expected.into(),
            found: tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn identity(&mut self) -> PResult<IdentityAST> {
        let lhs = self.expr()?;
        self.expect(Tok::Equals, "`=` or an operator")?;
        let rhs = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.error("an operator or end of input"));
        }
        Ok(IdentityAST { lhs, rhs })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(v) => {
                let e = v
                    .to_u32()
                    .ok_or_else(|| self.error("an exponent that fits in 32 bits"))?;
                self.bump();
                if *self.peek() == Tok::Caret {
                    return Err(self.error("parentheses around a repeated power"));
                }
                Ok(base.pow(e))
            }
            Tok::Minus => Err(self.error("a non-negative integer exponent")),
            _ => Err(self.error("an integer exponent")),
        }
    }

    fn at_alt_sign(&self) -> bool {
        matches!(
            (self.peek(), self.peek_at(1), self.peek_at(2), self.peek_at(3), self.peek_at(4), self.peek_at(5)),
            (Tok::LParen, Tok::Minus, Tok::Int(one), Tok::RParen, Tok::Caret, Tok::Ident(n))
                if *one == BigInt::from(1) && n == "n"
        )
    }

    fn base(&mut self) -> PResult<Expr> {
        if self.at_alt_sign() {
            for _ in 0..6 {
                self.bump();
            }
            return Ok(Expr::AltSign);
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::IntConst(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "n" => {
                self.bump();
                Ok(Expr::IndexVar)
            }
            Tok::Ident(name) if name == "frac" => {
                self.bump();
                let r = self.fraction()?;
                self.expect(Tok::Star, "`*` after frac(p,q)")?;
                let inner = self.base()?;
                Ok(inner.scale(r))
            }
            Tok::Ident(name) => {
                self.bump();
                self.expect(Tok::LParen, "`(` after a sequence name")?;
                let (a, b) = self.linexpr()?;
                self.expect(Tok::RParen, "`)` closing the index")?;
                Ok(Expr::SeqTerm { name, a, b })
            }
            _ => Err(self.error("a number, `n`, `(-1)^n`, `frac(p,q)*`, a sequence term or `(`")),
        }
    }

    fn signed_int(&mut self, what: &str) -> PResult<BigInt> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error(what)),
        }
    }

    fn fraction(&mut self) -> PResult<Rational> {
        self.expect(Tok::LParen, "`(` after frac")?;
        let p = self.signed_int("an integer numerator")?;
        self.expect(Tok::Comma, "`,` between numerator and denominator")?;
        let q = self.signed_int("an integer denominator")?;
        if q.is_zero() {
            self.pos -= 1;
            return Err(self.error("a non-zero denominator"));
        }
        self.expect(Tok::RParen, "`)` closing frac")?;
        Ok(Rational::new(p, q))
    }

    fn index_int(&self, v: &BigInt) -> PResult<Index> {
        v.to_i64()
            .ok_or_else(|| self.error("an index coefficient that fits in 64 bits"))
    }

    /// `[int '*'] 'n' [('+'|'-') uint] | int`, each with an optional leading sign.
    fn linexpr(&mut self) -> PResult<(Index, Index)> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let sign = if negative { -1 } else { 1 };
        let a = match self.peek().clone() {
            Tok::Int(v) => {
                let c = self.index_int(&v)?;
                self.bump();
                if *self.peek() != Tok::Star {
                    return Ok((0, sign * c));
                }
                self.bump();
                if *self.peek() != Tok::Ident("n".into()) {
                    return Err(self.error("`n` after the coefficient"));
                }
                self.bump();
                sign * c
            }
            Tok::Ident(n) if n == "n" => {
                self.bump();
                sign
            }
            _ => return Err(self.error("an index of the form a*n+b")),
        };
        let offset_sign = match self.peek() {
            Tok::Plus => 1,
            Tok::Minus => -1,
            _ => return Ok((a, 0)),
        };
        self.bump();
        match self.peek().clone() {
            Tok::Int(v) => {
                let b = self.index_int(&v)?;
                self.bump();
                Ok((a, offset_sign * b))
            }
            _ => Err(self.error("an unsigned integer offset")),
        }
    }
}

/// Parses `lhs = rhs`.
pub fn parse_identity(text: &str) -> Result<IdentityAST, ParseError> {
    Parser {
        toks: tokenize(text),
        pos: 0,
    }
    .identity()
}

/// Parses a single expression with no `=`.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}
