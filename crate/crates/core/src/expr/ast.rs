use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::AlgebraicNumber;
use crate::ball::{Constant, Func};

/// Expression tree in the single variable `x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Const(AlgebraicNumber),
    Named(Constant),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Fn(Func, Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn int(v: i64) -> Self {
        Expr::Const(AlgebraicNumber::integer(v))
    }

    pub fn rational(r: BigRational) -> Self {
        Expr::Const(AlgebraicNumber::rational(r))
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, b: Expr) -> Self {
        Expr::Pow(Box::new(a), Box::new(b))
    }

    pub fn func(f: Func, a: Expr) -> Self {
        Expr::Fn(f, Box::new(a))
    }

    pub fn neg(a: Expr) -> Self {
        Expr::mul(Expr::int(-1), a)
    }

    /// `lhs - rhs`, dropping a literal zero right-hand side.
    pub fn difference(lhs: &Expr, rhs: &Expr) -> Expr {
        if rhs.is_zero_const() {
            lhs.clone()
        } else {
            Expr::sub(lhs.clone(), rhs.clone())
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&AlgebraicNumber> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var => vec![],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                vec![a, b]
            }
            Expr::Fn(_, a) => vec![a],
        }
    }

    /// Depends on `x`.
    pub fn has_var(&self) -> bool {
        matches!(self, Expr::Var) || self.children().into_iter().any(Expr::has_var)
    }

    pub fn contains_named(&self, c: Constant) -> bool {
        matches!(self, Expr::Named(n) if *n == c)
            || self.children().into_iter().any(|e| e.contains_named(c))
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().into_iter().map(Expr::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Expr::depth)
            .max()
            .unwrap_or(0)
    }

    /// Subtree at a child-index path.
    pub fn at_path(&self, path: &[usize]) -> Option<&Expr> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.at_path(rest),
        }
    }

    fn node_name(&self) -> &'static str {
        match self {
            Expr::Const(_) => "const",
            Expr::Named(_) => "named",
            Expr::Var => "var",
            Expr::Add(..) => "add",
            Expr::Sub(..) => "sub",
            Expr::Mul(..) => "mul",
            Expr::Div(..) => "div",
            Expr::Pow(..) => "pow",
            Expr::Fn(..) => "fn",
        }
    }

    /// `{node, children}` JSON form; leaves carry `value` or `name`.
    pub fn to_json(&self) -> Value {
        let children: Vec<Value> = self.children().into_iter().map(Expr::to_json).collect();
        match self {
            Expr::Const(c) => json!({"node": "const", "value": super::algebraic_json(c), "children": children}),
            Expr::Named(n) => json!({"node": "named", "name": n.name(), "children": children}),
            Expr::Fn(f, _) => json!({"node": "fn", "name": f.name(), "children": children}),
            _ => json!({"node": self.node_name(), "children": children}),
        }
    }
}

// ------------------------------------------------------------------ printing

const LVL_ADD: u8 = 1;
const LVL_MUL: u8 = 2;
const LVL_NEG: u8 = 3;
const LVL_POW: u8 = 4;
const LVL_ATOM: u8 = 5;

/// Exact decimal text of a rational with a terminating expansion.
pub fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scale = BigInt::from(10).pow(digits);
    let n = r.numer().abs() * &scale / r.denom();
    let sign = if r.is_negative() { "-" } else { "" };
    if digits == 0 {
        return Some(format!("{sign}{n}"));
    }
    let int = &n / &scale;
    let frac = &n % &scale;
    Some(format!("{sign}{int}.{:0>w$}", frac.to_string(), w = digits as usize))
}

fn const_text(c: &AlgebraicNumber) -> (String, u8) {
    match c {
        AlgebraicNumber::Rational(r) => {
            let text = terminating_decimal(r).unwrap_or_else(|| format!("{}/{}", r.numer(), r.denom()));
            if r.is_negative() {
                (format!("({text})"), LVL_ATOM)
            } else if text.contains('/') {
                (text, LVL_MUL)
            } else {
                (text, LVL_ATOM)
            }
        }
        AlgebraicNumber::Surd(s) => {
            if s.a.is_zero() && s.b.is_positive() {
                let n = &s.b * &s.b * BigRational::from_integer(s.d.clone());
                let t = terminating_decimal(&n).unwrap_or_else(|| format!("{}/{}", n.numer(), n.denom()));
                return (format!("sqrt({t})"), LVL_ATOM);
            }
            (format!("({c})"), LVL_ATOM)
        }
        AlgebraicNumber::PolyRoot(_) => (format!("[{c}]"), LVL_ATOM),
    }
}

fn write_expr(e: &Expr, ctx: u8, out: &mut String) {
    let (text, lvl) = render(e);
    if lvl < ctx {
        out.push('(');
        out.push_str(&text);
        out.push(')');
    } else {
        out.push_str(&text);
    }
}

fn render(e: &Expr) -> (String, u8) {
    let mut s = String::new();
    let lvl = match e {
        Expr::Const(c) => return const_text(c),
        Expr::Named(n) => {
            s.push_str(n.name());
            LVL_ATOM
        }
        Expr::Var => {
            s.push('x');
            LVL_ATOM
        }
        Expr::Fn(f, a) => {
            s.push_str(f.name());
            s.push('(');
            write_expr(a, 0, &mut s);
            s.push(')');
            LVL_ATOM
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(a, LVL_ADD, &mut s);
            s.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(b, LVL_MUL, &mut s);
            LVL_ADD
        }
        Expr::Mul(a, b) if matches!(a.as_const(), Some(AlgebraicNumber::Rational(r)) if *r == -BigRational::one())
            && !matches!(**b, Expr::Const(_)) =>
        {
            s.push('-');
            write_expr(b, LVL_POW, &mut s);
            LVL_NEG
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_expr(a, LVL_MUL, &mut s);
            s.push_str(if matches!(e, Expr::Mul(..)) { "*" } else { "/" });
            write_expr(b, LVL_NEG, &mut s);
            LVL_MUL
        }
        Expr::Pow(a, b) => {
            write_expr(a, LVL_ATOM, &mut s);
            s.push('^');
            write_expr(b, LVL_NEG, &mut s);
            LVL_POW
        }
    };
    (s, lvl)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self).0)
    }
}
