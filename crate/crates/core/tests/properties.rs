use num_rational::BigRational;
use proptest::prelude::*;

use transcert::ball::{BallReal, Func};
use transcert::expr::{differentiate, eval_real, parse_expr, Expr};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

const FUNCS: [Func; 7] = [Func::Exp, Func::Sin, Func::Cos, Func::Atan, Func::Sinh, Func::Tanh, Func::Ln];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::Var),
        (-9i64..=9).prop_map(Expr::int),
        ((-40i64..=40), (1i64..=9)).prop_map(|(n, d)| Expr::rational(q(n, d))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), 0i64..=3).prop_map(|(a, k)| Expr::pow(a, Expr::int(k))),
            (0..FUNCS.len(), inner).prop_map(|(i, a)| Expr::func(FUNCS[i], a)),
        ]
    })
}

fn point() -> impl Strategy<Value = BigRational> {
    ((-30i64..=30), (1i64..=8)).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Printing is a fixed point after one parse (the parser folds literal
    /// quotients) and parsing preserves the value.
    #[test]
    fn print_parse_round_trip(e in expr(), x in point()) {
        let text = e.to_string();
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        let again = parse_expr(&back.to_string()).map_err(|err| TestCaseError::fail(err.to_string()))?;
        prop_assert_eq!(&again, &back);
        let at = |f: &Expr| eval_real(f, &BallReal::from_rational(&x, 128), 128).ok();
        if let (Some(a), Some(b)) = (at(&e), at(&back)) {
            prop_assert!(a.overlaps(&b), "{} and {} disagree at {}", e, back, x);
        }
    }

    #[test]
    fn higher_precision_refines(e in expr(), x in point(), p in 32u32..200) {
        if let Ok(coarse) = eval_real(&e, &BallReal::from_rational(&x, p), p) {
            let fine = eval_real(&e, &BallReal::from_rational(&x, 2 * p), 2 * p);
            prop_assert!(fine.is_ok(), "{} fails at {} bits", e, 2 * p);
            let fine = fine.unwrap();
            prop_assert!(coarse.contains_ball(&fine), "{}: {:?} not inside {:?}", e, fine, coarse);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient(e in expr(), x in point()) {
        let prec = 256;
        let at = |t: &BigRational| eval_real(&e, &BallReal::from_rational(t, prec), prec).ok();
        let d = eval_real(&differentiate(&e), &BallReal::from_rational(&x, prec), prec).ok();
        let h = q(1, 1 << 30);
        let (Some(d), Some(f_hi), Some(f_lo)) = (d, at(&(&x + &h)), at(&(&x - &h))) else {
            return Ok(());
        };
        let central = f_hi.sub(&f_lo).to_f64() / (2.0 * 2f64.powi(-30));
        let exact = d.to_f64();
        prop_assume!(exact.is_finite() && exact.abs() < 1e6 && f_hi.to_f64().abs() < 1e6);
        prop_assert!((central - exact).abs() <= 1e-4 * (1.0 + exact.abs()), "{}: d {} vs {}", e, exact, central);
    }
}
