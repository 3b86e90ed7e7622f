//! Ball evaluation of expressions.

use thiserror::Error;

use super::{AlgebraicNumber, Expr};
use crate::ball::{constant, elementary as el, BallComplex, BallError, BallReal, Constant};

/// A ball error together with the child-index path of the failing node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{error} at node path {path:?}")]
pub struct EvalError {
    pub error: BallError,
    pub path: Vec<usize>,
}

fn at(path: &[usize], r: Result<BallComplex, BallError>) -> Result<BallComplex, EvalError> {
    r.map_err(|error| EvalError {
        error,
        path: path.to_vec(),
    })
}

fn at_real(path: &[usize], r: Result<BallReal, BallError>) -> Result<BallReal, EvalError> {
    r.map_err(|error| EvalError {
        error,
        path: path.to_vec(),
    })
}

fn small_int_exponent(e: &Expr) -> Option<i64> {
    match e.as_const()? {
        AlgebraicNumber::Rational(r) if r.is_integer() => {
            let n: i64 = r.numer().try_into().ok()?;
            (n.unsigned_abs() <= 1 << 20).then_some(n)
        }
        _ => None,
    }
}

/// Enclosure of `e(z)` for every `z` in the ball `x`.
pub fn eval(e: &Expr, x: &BallComplex, prec: u32) -> Result<BallComplex, EvalError> {
    let mut path = Vec::new();
    go(e, x, prec, &mut path)
}

fn go(e: &Expr, x: &BallComplex, prec: u32, path: &mut Vec<usize>) -> Result<BallComplex, EvalError> {
    let child = |i: usize, sub: &Expr, path: &mut Vec<usize>| {
        path.push(i);
        let r = go(sub, x, prec, path);
        path.pop();
        r
    };
    Ok(match e {
        Expr::Const(c) => c.enclose(prec),
        Expr::Named(n) => BallComplex::from_real(constant(*n, prec)),
        Expr::Var => x.with_prec(prec),
        Expr::Add(a, b) => child(0, a, path)?.add(&child(1, b, path)?),
        Expr::Sub(a, b) => child(0, a, path)?.sub(&child(1, b, path)?),
        Expr::Mul(a, b) => child(0, a, path)?.mul(&child(1, b, path)?),
        Expr::Div(a, b) => {
            let (u, v) = (child(0, a, path)?, child(1, b, path)?);
            at(path, u.div(&v))?
        }
        Expr::Pow(a, b) => {
            if let Some(n) = small_int_exponent(b) {
                let u = child(0, a, path)?;
                return at(path, u.powi(n));
            }
            if matches!(**a, Expr::Named(Constant::E)) {
                let v = child(1, b, path)?;
                return at(path, v.exp());
            }
            let (u, v) = (child(0, a, path)?, child(1, b, path)?);
            at(path, u.pow(&v))?
        }
        Expr::Fn(f, a) => {
            let u = child(0, a, path)?;
            at(path, f.apply(&u))?
        }
    })
}

/// Real-valued evaluation; powers with non-integer exponents need a
/// positive base.
pub fn eval_real(e: &Expr, x: &BallReal, prec: u32) -> Result<BallReal, EvalError> {
    let mut path = Vec::new();
    go_real(e, x, prec, &mut path)
}

fn go_real(e: &Expr, x: &BallReal, prec: u32, path: &mut Vec<usize>) -> Result<BallReal, EvalError> {
    let child = |i: usize, sub: &Expr, path: &mut Vec<usize>| {
        path.push(i);
        let r = go_real(sub, x, prec, path);
        path.pop();
        r
    };
    Ok(match e {
        Expr::Const(c) => {
            let b = c.enclose(prec);
            if !b.im.is_exact_zero() {
                return at_real(path, Err(BallError::DomainViolation { func: "real" }));
            }
            b.re
        }
        Expr::Named(n) => constant(*n, prec),
        Expr::Var => x.with_prec(prec),
        Expr::Add(a, b) => child(0, a, path)?.add(&child(1, b, path)?),
        Expr::Sub(a, b) => child(0, a, path)?.sub(&child(1, b, path)?),
        Expr::Mul(a, b) => child(0, a, path)?.mul(&child(1, b, path)?),
        Expr::Div(a, b) => {
            let (u, v) = (child(0, a, path)?, child(1, b, path)?);
            at_real(path, u.div(&v))?
        }
        Expr::Pow(a, b) => {
            if let Some(n) = small_int_exponent(b) {
                let u = child(0, a, path)?;
                let p = u.powi(n.unsigned_abs());
                return if n < 0 { at_real(path, p.inv()) } else { Ok(p) };
            }
            if matches!(**a, Expr::Named(Constant::E)) {
                let v = child(1, b, path)?;
                return at_real(path, el::try_exp(&v));
            }
            let (u, v) = (child(0, a, path)?, child(1, b, path)?);
            if !u.is_positive() {
                return at_real(path, Err(BallError::DomainViolation { func: "pow" }));
            }
            at_real(path, el::pow(&u, &v))?
        }
        Expr::Fn(f, a) => {
            let u = child(0, a, path)?;
            at_real(path, f.apply_real(&u))?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exp_sum_values() {
        let h = parse_expr("e^x + x - 12").unwrap();
        let v = eval(&h, &BallComplex::zero(64), 64).unwrap();
        assert!(v.re.contains_rational(&q(-11, 1)));
        let x = BallReal::from_rational_interval(&q(227472787147, 100000000000), &q(227472787149, 100000000000), 64);
        let v = eval_real(&h, &x, 64).unwrap();
        assert!(v.contains_zero());
    }

    #[test]
    fn polynomial_value() {
        let h = parse_expr("x^2 + 10*x + 5").unwrap();
        let v = eval(&h, &BallComplex::one(64), 64).unwrap();
        assert!(v.re.contains_rational(&q(16, 1)) && v.im.is_exact_zero());
    }

    #[test]
    fn error_paths() {
        let h = parse_expr("1 + 1/x").unwrap();
        let err = eval(&h, &BallComplex::zero(64), 64).unwrap_err();
        assert_eq!(err.error, BallError::DivisorMayBeZero);
        assert_eq!(err.path, vec![1]);
        let h = parse_expr("x + ln(x - 2)").unwrap();
        let err = eval_real(&h, &BallReal::one(64), 64).unwrap_err();
        assert_eq!(err.path, vec![1]);
    }

    #[test]
    fn real_and_complex_agree() {
        let h = parse_expr("(3*x)^sqrt(7) - x^2 - 10*x - 5").unwrap();
        let x = BallReal::from_rational(&q(9, 10), 80);
        let r = eval_real(&h, &x, 80).unwrap();
        let z = eval(&h, &BallComplex::from_real(x), 80).unwrap();
        assert!(r.overlaps(&z.re));
    }
}
