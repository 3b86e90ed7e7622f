use num_rational::BigRational;
use transcert::ball::{Constant, Func};
use transcert::certify::{
    certify, certify_function_value, certify_lw_combination, certify_with, combine_complex, CertifyError, CheckStatus,
    Options, Sign, Theorem, Transcendental, Verdict,
};
use transcert::expr::{classify, parse_equation, AlgebraicNumber, EquationForm};
use transcert::rootfind::{find_complex_roots, isolate_real_roots, Rect, RootEnclosure};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn real_roots(src: &str, a: BigRational, b: BigRational) -> (EquationForm, Vec<RootEnclosure>) {
    let eq = parse_equation(src).unwrap();
    let roots = isolate_real_roots(&eq.residual(), &a, &b, 96).unwrap();
    (classify(&eq), roots)
}

/// The printed digits are either the truncation or the rounding of `x`.
fn matches_printed(x: &transcert::ball::BallReal, printed: &str) -> bool {
    let k = printed.split('.').nth(1).map_or(0, str::len);
    x.to_decimal(k) == printed || x.to_decimal_rounded(k) == printed
}

fn all_pass(cert: &transcert::certify::Certificate) -> bool {
    cert.checks.iter().all(|c| c.status == CheckStatus::Pass)
}

#[test]
fn exponential_sum_root_certified() {
    let (form, roots) = real_roots("e^x + x - 12 = 0", q(0, 1), q(10, 1));
    assert_eq!(roots.len(), 1);
    let cert = certify(&form, &roots[0]);
    assert_eq!(cert.theorem, Some(Theorem::Thm2));
    assert_eq!(cert.verdict(), Verdict::Certified);
    assert!(all_pass(&cert));
    let strict = certify_with(&form, &roots[0], &Options { strict: true, ..Options::default() });
    assert_eq!(strict.verdict(), Verdict::Certified);
    assert!(strict.checks.iter().any(|c| c.name == "exponents_separated"));
}

#[test]
fn pi_base_refused() {
    let (form, roots) = real_roots("pi^x + 4*x = 49", q(0, 1), q(10, 1));
    assert_eq!(roots.len(), 1);
    assert!(matches_printed(roots[0].re(), "3.14097"));
    let cert = certify(&form, &roots[0]);
    assert_eq!(cert.verdict(), Verdict::Refused("NonAlgebraicConstant".into()));
    assert!(cert.note.is_some());
    let json = cert.to_json();
    assert_eq!(json["reason"], "NonAlgebraicConstant");
}

#[test]
fn power_product_real_and_complex_roots() {
    let src = "(3*x)^sqrt(7) = x^2 + 10*x + 5";
    let (form, roots) = real_roots(src, q(1, 100), q(10, 1));
    assert_eq!(roots.len(), 1);
    assert!(matches_printed(roots[0].re(), "0.932103"));
    let cert = certify(&form, &roots[0]);
    assert_eq!(cert.theorem, Some(Theorem::Thm4));
    assert_eq!(cert.verdict(), Verdict::Certified);
    let beta = cert.checks.iter().find(|c| c.name == "beta_irrational").unwrap();
    assert_eq!(beta.status, CheckStatus::Pass);

    let eq = parse_equation(src).unwrap();
    let region = Rect::new(q(-1, 1), q(0, 1), q(-1, 1), q(-1, 10)).unwrap();
    let found = find_complex_roots(&eq.residual(), &region, 64).unwrap();
    assert_eq!(found.roots.len(), 1);
    let z = &found.roots[0];
    assert!(matches_printed(z.re(), "-0.395261"));
    assert!(matches_printed(z.im(), "-0.173148"));
    assert_eq!(certify(&form, z).verdict(), Verdict::Certified);
}

#[test]
fn corollary_shapes_certified() {
    let cases = [
        ("sin(x) = 1 - x", q(0, 1), q(1, 1), Theorem::Cor2),
        ("atan(x) = 1 - x", q(0, 1), q(1, 1), Theorem::Cor3),
        ("(sin(x) + 2)^2 = x + 5", q(0, 1), q(2, 1), Theorem::Cor4),
        ("sin(x)^2 + sin(x) = x", q(1, 1), q(2, 1), Theorem::Cor5),
        ("ln(x)^2 + ln(x) = x - 2", q(4, 1), q(10, 1), Theorem::Cor1),
    ];
    for (src, a, b, thm) in cases {
        let (form, roots) = real_roots(src, a, b);
        assert_eq!(roots.len(), 1, "{src}");
        let cert = certify(&form, &roots[0]);
        assert_eq!(cert.theorem, Some(thm), "{src}");
        assert_eq!(cert.verdict(), Verdict::Certified, "{src}: {cert}");
    }
}

#[test]
fn sine_root_value() {
    let (_, roots) = real_roots("sin(x) = 1 - x", q(0, 1), q(1, 1));
    assert!(matches_printed(roots[0].re(), "0.510973"));
}

#[test]
fn flipping_any_check_flips_verdict() {
    let (form, roots) = real_roots("e^x + x - 12 = 0", q(0, 1), q(10, 1));
    let cert = certify_with(&form, &roots[0], &Options { strict: true, ..Options::default() });
    assert!(cert.is_certified());
    for i in 0..cert.checks.len() {
        for status in [CheckStatus::Fail, CheckStatus::Undecided] {
            let mut m = cert.clone();
            m.checks[i].status = status;
            assert_ne!(m.verdict(), Verdict::Certified, "check {}", m.checks[i].name);
        }
    }
}

#[test]
fn structural_refusal_is_stable() {
    let (form, roots) = real_roots("pi^x + 4*x = 49", q(0, 1), q(10, 1));
    for max_prec in [128, 1024, 8192] {
        let mut opts = Options::default();
        opts.budget.max_prec = max_prec;
        opts.budget.doublings = 10;
        assert!(matches!(certify_with(&form, &roots[0], &opts).verdict(), Verdict::Refused(_)));
    }
}

#[test]
fn hypothesis_failure_refuses() {
    // x = 0 solves e^x = 1 - x as well as any other root would
    let eq = parse_equation("e^x = 1 - x").unwrap();
    let roots = isolate_real_roots(&eq.residual(), &q(-1, 2), &q(1, 2), 64).unwrap();
    let cert = certify(&classify(&eq), &roots[0]);
    assert_ne!(cert.verdict(), Verdict::Certified);
    let root_check = cert.checks.iter().find(|c| c.name == "root_nonzero").unwrap();
    assert_ne!(root_check.status, CheckStatus::Pass);
}

#[test]
fn lindemann_weierstrass_combinations() {
    let one = AlgebraicNumber::integer(1);
    let two = AlgebraicNumber::integer(2);
    let (e, cert) = certify_lw_combination(&[q(1, 1)], std::slice::from_ref(&one), 128).unwrap();
    assert!(e.re.to_decimal(10).starts_with("2.7182818284"));
    assert!(cert.is_certified());
    let (v, cert) = certify_lw_combination(&[q(1, 1), q(1, 1)], &[one.clone(), two], 128).unwrap();
    assert!(matches_printed(&v.re, "10.10734"));
    assert_eq!(cert.theorem, Some(Theorem::Lw));
    assert_eq!(
        certify_lw_combination(&[q(1, 1), q(-1, 1)], &[one.clone(), one.clone()], 64).unwrap_err(),
        CertifyError::DuplicateExponents
    );
    assert_eq!(
        certify_lw_combination(&[q(0, 1)], &[one], 64).unwrap_err(),
        CertifyError::AllCoefficientsZero
    );
}

#[test]
fn complex_combinations() {
    let e = Transcendental::Builtin(Constant::E);
    let pi = Transcendental::Builtin(Constant::Pi);
    let cert = combine_complex(&e, &pi, Sign::Plus, 128).unwrap();
    assert!(cert.is_certified());
    let v = cert.value.as_ref().unwrap();
    assert!(v.re.to_decimal(8).starts_with("2.71828182"));
    assert!(v.im.to_decimal(8).starts_with("3.14159265"));

    let (form, roots) = real_roots("e^x + x - 12 = 0", q(0, 1), q(10, 1));
    let tau = Transcendental::Certified(Box::new(certify(&form, &roots[0])));
    let cert = combine_complex(&tau, &tau, Sign::Minus, 128).unwrap();
    assert!(cert.is_certified());
    assert!(cert.value.as_ref().unwrap().im.to_decimal(6).starts_with("-2.274727"));

    let (form, roots) = real_roots("pi^x + 4*x = 49", q(0, 1), q(10, 1));
    let refused = Transcendental::Certified(Box::new(certify(&form, &roots[0])));
    assert!(matches!(
        combine_complex(&refused, &e, Sign::Plus, 64),
        Err(CertifyError::InputNotCertified(_))
    ));
}

#[test]
fn function_values() {
    let (v, cert) = certify_function_value(Func::Sin, &AlgebraicNumber::integer(2), 128).unwrap();
    assert!(v.to_decimal(6).starts_with("0.909297"));
    assert!(cert.is_certified());
    let (v, _) = certify_function_value(Func::Ln, &AlgebraicNumber::integer(2), 128).unwrap();
    assert!(v.to_decimal(6).starts_with("0.693147"));
    assert_eq!(
        certify_function_value(Func::Sin, &AlgebraicNumber::integer(0), 64).unwrap_err(),
        CertifyError::ZeroArgument
    );
    assert!(matches!(
        certify_function_value(Func::Ln, &AlgebraicNumber::integer(-3), 64),
        Err(CertifyError::DomainViolation(_))
    ));
}

#[test]
fn certificate_json_shape() {
    let (form, roots) = real_roots("e^x + x - 12 = 0", q(0, 1), q(10, 1));
    let j = certify(&form, &roots[0]).to_json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["theorem"], "Thm2");
    assert_eq!(j["verdict"], "Certified");
    assert_eq!(j["form"]["kind"], "Thm2Form");
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["status"] == "Pass"));
    assert!(j.get("reason").is_none());
}
