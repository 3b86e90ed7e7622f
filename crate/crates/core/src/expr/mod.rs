//! Expressions in one variable: parsing, printing, differentiation,
//! ball evaluation, and classification into the supported equation forms.

mod algebraic;
mod ast;
mod classify;
mod diff;
mod eval;
mod parse;
mod poly;

use serde_json::{json, Value};

pub use algebraic::{rational_root, AlgebraicError, AlgebraicNumber, PolyRoot, Surd, SQUARE_FACTOR_BOUND};
pub use ast::{terminating_decimal, Expr};
pub use classify::{classify, EquationForm, PowerFactor, Unclassified, UnclassifiedReason};
pub use diff::{differentiate, simplify};
pub use eval::{eval, eval_real, EvalError};
pub use parse::{parse_equation, parse_expr, Equation, ParseError};
pub use poly::Poly;

/// JSON form of a coefficient.
pub fn algebraic_json(c: &AlgebraicNumber) -> Value {
    match c {
        AlgebraicNumber::Rational(r) => json!({"kind": "rational", "value": r.to_string()}),
        AlgebraicNumber::Surd(s) => json!({
            "kind": "surd",
            "a": s.a.to_string(),
            "b": s.b.to_string(),
            "d": s.d.to_string(),
        }),
        AlgebraicNumber::PolyRoot(p) => {
            let re = crate::ball::BallJson::from(&p.isolating.re);
            let im = crate::ball::BallJson::from(&p.isolating.im);
            json!({
                "kind": "polyroot",
                "coeffs": p.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "re": re,
                "im": im,
            })
        }
    }
}
