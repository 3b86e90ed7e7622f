//! Recursive-descent parser for equations in `x`.
//!
//! ```text
//! equation := expr "=" expr
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := primary ("^" unary)?
//! primary  := number | "x" | "e" | "pi" | ident "(" expr ")" | "(" expr ")"
//! number   := digit+ ("." digit+)?
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{AlgebraicNumber, Expr};
use crate::ball::{Constant, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
}

/// A parsed equation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Equation {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        Self { lhs, rhs }
    }

    /// `h(x) = lhs - rhs`, whose zeros are the solutions.
    pub fn residual(&self) -> Expr {
        Expr::difference(&self.lhs, &self.rhs)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_pos: usize,
}

fn err(position: usize, expected: &[&str]) -> ParseError {
    ParseError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

const OPERAND: &[&str] = &["number", "x", "constant", "function call", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            tok: Tok::End,
            tok_pos: 0,
        };
        p.advance()?;
        Ok(p)
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_pos = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let int: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .unwrap();
            let mut value = BigRational::from_integer(int);
            if self.src.get(self.pos) == Some(&b'.') {
                self.pos += 1;
                let fs = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if fs == self.pos {
                    return Err(err(self.pos, &["digit"]));
                }
                let frac: BigInt = std::str::from_utf8(&self.src[fs..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                let scale = BigInt::from(10).pow((self.pos - fs) as u32);
                value += BigRational::new(frac, scale);
            }
            self.tok = Tok::Num(value);
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            self.tok = Tok::Ident(s.to_string());
        } else if b"+-*/^()=".contains(&c) {
            self.pos += 1;
            self.tok = Tok::Op(c as char);
        } else {
            return Err(err(self.pos, &["operator", "operand"]));
        }
        Ok(())
    }

    fn eat(&mut self, op: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Op(op) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, op: char, expected: &[&str]) -> Result<(), ParseError> {
        if self.eat(op)? {
            Ok(())
        } else {
            Err(err(self.tok_pos, expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+')? {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat('-')? {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*')? {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat('/')? {
                let rhs = self.unary()?;
                lhs = fold_div(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-')? {
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(AlgebraicNumber::Rational(r)) => Expr::rational(-r),
                other => Expr::neg(other),
            });
        }
        if self.eat('+')? {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat('^')? {
            let exp = self.unary()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.tok_pos;
        match self.tok.clone() {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::rational(v))
            }
            Tok::Op('(') => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(')', &["')'"])?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance()?;
                match name.as_str() {
                    "x" => return Ok(Expr::Var),
                    "e" => return Ok(Expr::Named(Constant::E)),
                    "pi" => return Ok(Expr::Named(Constant::Pi)),
                    _ => {}
                }
                let Ok(f) = name.parse::<Func>() else {
                    return Err(err(pos, &["x", "e", "pi", "function name"]));
                };
                self.expect('(', &["'('"])?;
                let arg = self.expr()?;
                self.expect(')', &["')'"])?;
                if f == Func::Sqrt {
                    if let Expr::Const(AlgebraicNumber::Rational(r)) = &arg {
                        if let Ok(c) = AlgebraicNumber::sqrt_rational(r) {
                            return Ok(Expr::Const(c));
                        }
                    }
                }
                Ok(Expr::func(f, arg))
            }
            _ => Err(err(pos, OPERAND)),
        }
    }
}

/// Quotients of two rational literals are folded into one literal.
fn fold_div(lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Const(AlgebraicNumber::Rational(a)), Expr::Const(AlgebraicNumber::Rational(b))) = (&lhs, &rhs) {
        if !b.is_zero() {
            return Expr::rational(a / b);
        }
    }
    Expr::div(lhs, rhs)
}

/// Parse a bare expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(err(p.tok_pos, &["operator", "end of input"]));
    }
    Ok(e)
}

/// Parse `lhs = rhs`.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.expr()?;
    p.expect('=', &["operator", "'='"])?;
    let rhs = p.expr()?;
    if p.tok != Tok::End {
        return Err(err(p.tok_pos, &["operator", "end of input"]));
    }
    Ok(Equation::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exp_sum_equation() {
        let eq = parse_equation("e^x + x - 12 = 0").unwrap();
        let lhs = Expr::sub(
            Expr::add(Expr::pow(Expr::Named(Constant::E), Expr::Var), Expr::Var),
            Expr::int(12),
        );
        assert_eq!(eq.lhs, lhs);
        assert_eq!(eq.rhs, Expr::int(0));
    }

    #[test]
    fn power_product_equation() {
        let eq = parse_equation("(3*x)^sqrt(7) = x^2 + 10*x + 5").unwrap();
        let s7 = AlgebraicNumber::sqrt_rational(&q(7, 1)).unwrap();
        assert_eq!(
            eq.lhs,
            Expr::pow(Expr::mul(Expr::int(3), Expr::Var), Expr::Const(s7))
        );
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_expr("0.1").unwrap(), Expr::rational(q(1, 10)));
        assert_eq!(parse_expr("-2.50").unwrap(), Expr::rational(q(-5, 2)));
        assert_eq!(parse_expr("1/3").unwrap(), Expr::rational(q(1, 3)));
    }

    #[test]
    fn identical_sides() {
        let eq = parse_equation("x = x").unwrap();
        assert_eq!(eq.lhs, eq.rhs);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_expr("2^3^x").unwrap(),
            Expr::pow(Expr::int(2), Expr::pow(Expr::int(3), Expr::Var))
        );
        assert_eq!(
            parse_expr("-x^2").unwrap(),
            Expr::neg(Expr::pow(Expr::Var, Expr::int(2)))
        );
        assert_eq!(
            parse_expr("x - 1 - 2").unwrap(),
            Expr::sub(Expr::sub(Expr::Var, Expr::int(1)), Expr::int(2))
        );
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_equation("x + = 1").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_equation("x + 1").unwrap_err();
        assert_eq!(e.position, 5);
        assert!(e.expected.iter().any(|s| s == "'='"));
        assert!(parse_equation("y = 1").is_err());
        assert!(parse_equation("x = 1 = 2").is_err());
        assert!(parse_expr("1.").is_err());
    }
}
