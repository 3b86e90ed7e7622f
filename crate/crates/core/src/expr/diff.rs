//! Symbolic derivatives with light constant folding.

use super::{AlgebraicNumber, Expr};
use crate::ball::{Constant, Func};

fn c(v: i64) -> Expr {
    Expr::int(v)
}

fn f(func: Func, a: &Expr) -> Expr {
    Expr::func(func, a.clone())
}

fn sq(a: Expr) -> Expr {
    Expr::pow(a, c(2))
}

/// Remove additive and multiplicative identities and fold constant
/// arithmetic where it stays exact.
pub fn simplify(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Const(_) | Named(_) | Var => e.clone(),
        Fn(func, a) => Expr::func(*func, simplify(a)),
        Add(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_zero_const() {
                return b;
            }
            if b.is_zero_const() {
                return a;
            }
            if let (Const(x), Const(y)) = (&a, &b) {
                if let Some(s) = x.add(y) {
                    return Const(s);
                }
            }
            Expr::add(a, b)
        }
        Sub(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if b.is_zero_const() {
                return a;
            }
            if let (Const(x), Const(y)) = (&a, &b) {
                if let Some(s) = x.sub(y) {
                    return Const(s);
                }
            }
            if a.is_zero_const() {
                return negate(b);
            }
            Expr::sub(a, b)
        }
        Mul(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_zero_const() || b.is_zero_const() {
                return c(0);
            }
            if a.is_one_const() {
                return b;
            }
            if b.is_one_const() {
                return a;
            }
            if let (Const(x), Const(y)) = (&a, &b) {
                if let Some(p) = x.mul(y) {
                    return Const(p);
                }
            }
            Expr::mul(a, b)
        }
        Div(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if b.is_one_const() {
                return a;
            }
            if a.is_zero_const() && !b.is_zero_const() {
                return c(0);
            }
            if let (Const(x), Const(y)) = (&a, &b) {
                if let Some(q) = x.div(y) {
                    return Const(q);
                }
            }
            Expr::div(a, b)
        }
        Pow(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if b.is_zero_const() {
                return c(1);
            }
            if b.is_one_const() {
                return a;
            }
            Expr::pow(a, b)
        }
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Const(k) => Expr::Const(k.neg()),
        other => simplify(&Expr::neg(other)),
    }
}

/// `d/dx`, simplified.
pub fn differentiate(e: &Expr) -> Expr {
    simplify(&raw(e))
}

fn raw(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Const(_) | Named(_) => c(0),
        Var => c(1),
        Add(a, b) => Expr::add(raw(a), raw(b)),
        Sub(a, b) => Expr::sub(raw(a), raw(b)),
        Mul(a, b) => Expr::add(
            Expr::mul(raw(a), (**b).clone()),
            Expr::mul((**a).clone(), raw(b)),
        ),
        Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(raw(a), (**b).clone()),
                Expr::mul((**a).clone(), raw(b)),
            ),
            sq((**b).clone()),
        ),
        Pow(u, v) => pow_rule(u, v),
        Fn(func, u) => Expr::mul(outer(*func, u), raw(u)),
    }
}

fn pow_rule(u: &Expr, v: &Expr) -> Expr {
    let du = raw(u);
    if !v.has_var() {
        let vm1 = v
            .as_const()
            .and_then(|k| k.sub(&AlgebraicNumber::one()))
            .map(Expr::Const)
            .unwrap_or_else(|| Expr::sub(v.clone(), c(1)));
        return Expr::mul(Expr::mul(v.clone(), Expr::pow(u.clone(), vm1)), du);
    }
    let dv = raw(v);
    let uv = Expr::pow(u.clone(), v.clone());
    if !u.has_var() {
        if matches!(u, Expr::Named(Constant::E)) {
            return Expr::mul(uv, dv);
        }
        return Expr::mul(Expr::mul(uv, f(Func::Ln, u)), dv);
    }
    // u^v (v' ln u + v u'/u)
    Expr::mul(
        uv,
        Expr::add(
            Expr::mul(dv, f(Func::Ln, u)),
            Expr::div(Expr::mul(v.clone(), du), u.clone()),
        ),
    )
}

/// Derivative of `func` evaluated at `u`.
fn outer(func: Func, u: &Expr) -> Expr {
    use Func::*;
    let one_minus_sq = || Expr::sub(c(1), sq(u.clone()));
    let recip_sq = || {
        // u^2 sqrt(1 - 1/u^2)
        Expr::mul(
            sq(u.clone()),
            f(Sqrt, &Expr::sub(c(1), Expr::div(c(1), sq(u.clone())))),
        )
    };
    match func {
        Exp => f(Exp, u),
        Ln => Expr::div(c(1), u.clone()),
        Sqrt => Expr::div(c(1), Expr::mul(c(2), f(Sqrt, u))),
        Sin => f(Cos, u),
        Cos => Expr::neg(f(Sin, u)),
        Tan => sq(f(Sec, u)),
        Cot => Expr::neg(sq(f(Csc, u))),
        Sec => Expr::mul(f(Sec, u), f(Tan, u)),
        Csc => Expr::neg(Expr::mul(f(Csc, u), f(Cot, u))),
        Sinh => f(Cosh, u),
        Cosh => f(Sinh, u),
        Tanh => Expr::div(c(1), sq(f(Cosh, u))),
        Coth => Expr::neg(Expr::div(c(1), sq(f(Sinh, u)))),
        Asin => Expr::div(c(1), f(Sqrt, &one_minus_sq())),
        Acos => Expr::neg(Expr::div(c(1), f(Sqrt, &one_minus_sq()))),
        Atan => Expr::div(c(1), Expr::add(c(1), sq(u.clone()))),
        Acot => Expr::neg(Expr::div(c(1), Expr::add(c(1), sq(u.clone())))),
        Asec => Expr::div(c(1), recip_sq()),
        Acsc => Expr::neg(Expr::div(c(1), recip_sq())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use num_rational::BigRational;

    fn d(s: &str) -> Expr {
        differentiate(&parse_expr(s).unwrap())
    }

    #[test]
    fn exp_sum_derivative() {
        assert_eq!(d("e^x + x - 12"), parse_expr("e^x + 1").unwrap());
    }

    #[test]
    fn chain_rule() {
        assert_eq!(d("sin(x^2)"), parse_expr("cos(x^2)*(2*x)").unwrap());
    }

    #[test]
    fn constant_exponent_power_rule() {
        let got = d("(3*x)^sqrt(7)");
        let s7 = AlgebraicNumber::sqrt_rational(&BigRational::from_integer(7.into())).unwrap();
        let s7m1 = s7.sub(&AlgebraicNumber::one()).unwrap();
        let want = Expr::mul(
            Expr::mul(
                Expr::Const(s7),
                Expr::pow(Expr::mul(c(3), Expr::Var), Expr::Const(s7m1)),
            ),
            c(3),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn simplification_identities() {
        assert_eq!(simplify(&parse_expr("0 + x*1").unwrap()), Expr::Var);
        assert_eq!(simplify(&parse_expr("x^0").unwrap()), c(1));
        assert_eq!(simplify(&parse_expr("2*3 - 1").unwrap()), c(5));
        assert_eq!(simplify(&parse_expr("0 - x").unwrap()), Expr::neg(Expr::Var));
    }
}
