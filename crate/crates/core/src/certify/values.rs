use num_rational::BigRational;
use num_traits::Zero;

use super::hypotheses::distinct_check;
use super::{Certificate, CertifyError, Check, Theorem};
use crate::ball::{constant, BallComplex, BallReal, Constant, Func, RefineBudget};
use crate::expr::{AlgebraicNumber, EquationForm};

pub(super) fn lw_checks(c: &[BigRational], alpha: &[AlgebraicNumber], budget: RefineBudget) -> Vec<Check> {
    vec![
        distinct_check(alpha, budget),
        Check::exact(
            "alpha_nonzero",
            "alpha_1, ..., alpha_m are non-zero",
            alpha.iter().all(|a| !a.is_zero()),
        ),
        Check::exact("alpha_algebraic", "alpha_1, ..., alpha_m are algebraic", true),
        Check::exact(
            "coefficients_not_all_zero",
            "c_1, ..., c_m are rational and not all zero",
            c.iter().any(|ci| !ci.is_zero()),
        ),
    ]
}

/// Ball for `sum c_i e^(alpha_i)`.
pub(super) fn lw_value(c: &[BigRational], alpha: &[AlgebraicNumber], prec: u32) -> BallComplex {
    let mut sum = BallComplex::zero(prec);
    for (ci, a) in c.iter().zip(alpha) {
        let e = a.enclose(prec).exp().expect("exp of a bounded ball");
        sum = sum.add(&e.scale(&BallReal::from_rational(ci, prec)));
    }
    sum
}

/// Ball for `sum c_i e^(alpha_i)` together with a Lindemann-Weierstrass
/// certificate.
pub fn certify_lw_combination(
    c: &[BigRational],
    alpha: &[AlgebraicNumber],
    prec: u32,
) -> Result<(BallComplex, Certificate), CertifyError> {
    if c.len() != alpha.len() || c.is_empty() {
        return Err(CertifyError::LengthMismatch);
    }
    if c.iter().all(Zero::is_zero) {
        return Err(CertifyError::AllCoefficientsZero);
    }
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            if alpha[i] == alpha[j] {
                return Err(CertifyError::DuplicateExponents);
            }
        }
    }
    let form = EquationForm::Lw {
        c: c.to_vec(),
        alpha: alpha.to_vec(),
    };
    let value = lw_value(c, alpha, prec);
    let cert = Certificate {
        subject: form.to_equation().rhs.to_string(),
        ast: None,
        form: Some(form),
        theorem: Some(Theorem::Lw),
        root: None,
        value: Some(value.clone()),
        checks: lw_checks(c, alpha, super::default_budget()),
        strict: false,
        structural_refusal: None,
        note: None,
    };
    Ok((value, cert))
}

/// A number known to be transcendental: a built-in constant or the
/// subject of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transcendental {
    Builtin(Constant),
    Certified(Box<Certificate>),
}

impl Transcendental {
    fn describe(&self) -> String {
        match self {
            Transcendental::Builtin(c) => c.name().to_string(),
            Transcendental::Certified(c) => match &c.root {
                Some(r) => r.to_string(),
                None => c.subject.clone(),
            },
        }
    }

    fn value(&self, prec: u32) -> Option<BallComplex> {
        match self {
            Transcendental::Builtin(c) => Some(BallComplex::from_real(constant(*c, prec))),
            Transcendental::Certified(c) => c.value.clone().or_else(|| c.root.as_ref().map(|r| r.ball())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Certificate for `t1 + t2 i` or `t1 - t2 i` from two real transcendental
/// inputs.
pub fn combine_complex(t1: &Transcendental, t2: &Transcendental, sign: Sign, prec: u32) -> Result<Certificate, CertifyError> {
    for t in [t1, t2] {
        if let Transcendental::Certified(c) = t {
            if !c.is_certified() {
                return Err(CertifyError::InputNotCertified(format!("{} ({})", c.subject, c.verdict())));
            }
        }
    }
    let missing = || CertifyError::InputNotCertified("certificate carries no value".into());
    let v1 = t1.value(prec).ok_or_else(missing)?;
    let v2 = t2.value(prec).ok_or_else(missing)?;
    let real = v1.im.is_exact_zero() && v2.im.is_exact_zero();
    let im = match sign {
        Sign::Plus => v2.re.clone(),
        Sign::Minus => v2.re.neg(),
    };
    let op = if sign == Sign::Plus { '+' } else { '-' };
    let checks = vec![
        Check::exact("first_transcendental", format!("{} is transcendental", t1.describe()), true),
        Check::exact("second_transcendental", format!("{} is transcendental", t2.describe()), true),
        Check::exact("inputs_real", "both inputs are real numbers", real),
    ];
    Ok(Certificate {
        subject: format!("({}) {op} ({})*i", t1.describe(), t2.describe()),
        ast: None,
        form: None,
        theorem: Some(Theorem::Prop1),
        root: None,
        value: Some(BallComplex::new(v1.re, im)),
        checks,
        strict: false,
        structural_refusal: None,
        note: None,
    })
}

/// Ball for `func(a)` with a certificate that the value is transcendental.
pub fn certify_function_value(func: Func, a: &AlgebraicNumber, prec: u32) -> Result<(BallReal, Certificate), CertifyError> {
    if !func.is_log_trig_hyperbolic() {
        return Err(CertifyError::UnsupportedFunction(func.name().into()));
    }
    if a.is_zero() {
        return Err(CertifyError::ZeroArgument);
    }
    let z = a.enclose(prec);
    if !z.im.is_exact_zero() {
        return Err(CertifyError::DomainViolation(format!("{a:?}")));
    }
    if func == Func::Ln && a.signum() != Some(1) {
        return Err(CertifyError::DomainViolation(format!("ln({})", z.re.to_decimal(10))));
    }
    let value = func
        .apply_real(&z.re)
        .map_err(|e| CertifyError::DomainViolation(format!("{}: {e}", func.name())))?;
    let subject = format!("{}({})", func.name(), crate::expr::Expr::Const(a.clone()));
    let checks = vec![
        Check::exact("argument_nonzero", "a != 0", true),
        Check::exact("argument_algebraic", "a is algebraic", true),
        Check::exact(
            "function_listed",
            "f is one of ln, sin, cos, tan, csc, sec, cot, sinh, cosh, tanh, coth",
            true,
        ),
    ];
    let cert = Certificate {
        subject,
        ast: None,
        form: None,
        theorem: Some(Theorem::FunctionValue),
        root: None,
        value: Some(BallComplex::from_real(value.clone())),
        checks,
        strict: false,
        structural_refusal: None,
        note: None,
    };
    Ok((value, cert))
}
