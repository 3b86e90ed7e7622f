use std::cell::RefCell;

use serde_json::json;

use super::values::{lw_checks, lw_value};
use super::{default_budget, Certificate, Check, CheckStatus, Theorem};
use crate::ball::{refine_nonzero, BallComplex, BallError, BallReal, Dyadic, Func, Mag, RefineBudget, ZeroTest};
use crate::expr::{AlgebraicNumber, EquationForm, Expr, Poly, PowerFactor, UnclassifiedReason};
use crate::rootfind::{refine_root, RootEnclosure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Also require the exponent values of an exponential sum to be
    /// pairwise separated at the root.
    pub strict: bool,
    pub budget: RefineBudget,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            strict: false,
            budget: default_budget(),
        }
    }
}

/// Evaluation context: the equation function and its root, refined on
/// demand and cached per precision.
struct Ctx {
    h: Expr,
    root: RootEnclosure,
    budget: RefineBudget,
    cache: RefCell<Vec<(u32, Option<RootEnclosure>)>>,
}

type ValueFn<'a> = dyn Fn(&BallComplex, u32) -> Result<BallComplex, BallError> + 'a;

impl Ctx {
    fn root_at(&self, prec: u32) -> Option<RootEnclosure> {
        if prec <= self.root.prec_used && self.root.narrower_than(prec) {
            return Some(self.root.clone());
        }
        if let Some((_, r)) = self.cache.borrow().iter().find(|(p, _)| *p == prec) {
            return r.clone();
        }
        let r = refine_root(&self.h, &self.root, prec).ok();
        self.cache.borrow_mut().push((prec, r.clone()));
        r
    }

    /// Decide `v(root) != 0` by refining the root along the budget.
    fn nonzero(&self, v: &ValueFn<'_>) -> (CheckStatus, u32) {
        let p0 = self.root.prec_used.max(self.budget.start_prec);
        let unknown = || {
            let wide = BallReal::new(Dyadic::zero(), Mag::pow2(0), p0);
            BallComplex::new(wide.clone(), wide)
        };
        let initial = v(&self.root.ball(), p0).unwrap_or_else(|_| unknown());
        let outcome = refine_nonzero(
            &initial,
            |p| {
                let r = self.root_at(p).ok_or(())?;
                v(&r.ball(), p).map_err(|_| ())
            },
            self.budget,
        );
        let status = match outcome.status {
            ZeroTest::Nonzero => CheckStatus::Pass,
            ZeroTest::Zero => CheckStatus::Fail,
            ZeroTest::Undecided => CheckStatus::Undecided,
        };
        (status, outcome.witness_prec)
    }

    /// Can `v` be evaluated at the root at some precision of the budget?
    fn defined(&self, v: &ValueFn<'_>) -> (CheckStatus, u32) {
        let p0 = self.root.prec_used.max(self.budget.start_prec);
        let mut last = p0;
        for p in std::iter::once(p0).chain(self.budget.schedule()) {
            last = p;
            if self.root_at(p).is_some_and(|r| v(&r.ball(), p).is_ok()) {
                return (CheckStatus::Pass, p);
            }
        }
        (CheckStatus::Undecided, last)
    }

    fn nonzero_check(&self, name: &'static str, hypothesis: &str, v: &ValueFn<'_>) -> Check {
        let (status, prec) = self.nonzero(v);
        Check::new(name, hypothesis, status, prec)
    }

    fn root_nonzero(&self) -> Check {
        self.nonzero_check("root_nonzero", "the solution a is non-zero", &|z, _| Ok(z.clone()))
    }

    fn poly_nonzero(&self, name: &'static str, hypothesis: &str, p: &Poly) -> Check {
        self.nonzero_check(name, hypothesis, &|z, prec| p.eval(z, prec))
    }
}

/// Conjunction of several checks into one: any Fail fails, then any
/// Undecided leaves it undecided.
fn all_of(name: &'static str, hypothesis: &str, parts: Vec<Check>) -> Check {
    let prec = parts.iter().map(|c| c.witness_prec).max().unwrap_or(0);
    let status = if parts.iter().any(|c| c.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else if parts.iter().any(|c| c.status == CheckStatus::Undecided) {
        CheckStatus::Undecided
    } else {
        CheckStatus::Pass
    };
    Check::new(name, hypothesis, status, prec)
}

fn rational_coefficients(polys: &[&Poly]) -> Check {
    let ok = polys.iter().all(|p| p.coeffs().iter().all(AlgebraicNumber::is_rational));
    Check::exact("rational_coefficients", "the polynomials have rational coefficients", ok)
}

pub(super) fn distinct_check(alpha: &[AlgebraicNumber], budget: RefineBudget) -> Check {
    let mut status = CheckStatus::Pass;
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            match alpha[i].distinct_from(&alpha[j], budget) {
                Some(true) => {}
                Some(false) => status = CheckStatus::Fail,
                None if status == CheckStatus::Pass => status = CheckStatus::Undecided,
                None => {}
            }
        }
    }
    let prec = if status == CheckStatus::Undecided { budget.max_prec } else { 0 };
    Check::new("alpha_distinct", "alpha_1, ..., alpha_m are distinct", status, prec)
}

pub fn certify(form: &EquationForm, root: &RootEnclosure) -> Certificate {
    certify_with(form, root, &Options::default())
}

/// Run the hypothesis suite of the theorem matching `form` against `root`.
pub fn certify_with(form: &EquationForm, root: &RootEnclosure, opts: &Options) -> Certificate {
    let eq = match form {
        EquationForm::Unclassified(u) => u.source.clone(),
        f => f.to_equation(),
    };
    let mut cert = Certificate {
        subject: eq.to_string(),
        ast: Some(json!({"lhs": eq.lhs.to_json(), "rhs": eq.rhs.to_json()})),
        form: Some(form.clone()),
        theorem: None,
        root: Some(root.clone()),
        value: None,
        checks: Vec::new(),
        strict: opts.strict,
        structural_refusal: None,
        note: None,
    };
    let ctx = Ctx {
        h: eq.residual(),
        root: root.clone(),
        budget: opts.budget,
        cache: RefCell::new(Vec::new()),
    };
    let (theorem, checks) = match form {
        EquationForm::Unclassified(u) => {
            cert.structural_refusal = Some(u.reason.name().to_string());
            cert.note = Some(match u.reason {
                UnclassifiedReason::NonAlgebraicConstant => format!(
                    "{}; the supported theorems need algebraic bases, so no certificate is issued even though the root may be transcendental",
                    u.detail
                ),
                _ => u.detail.clone(),
            });
            return cert;
        }
        EquationForm::Thm2 { g, alpha, f_args, f } => (Theorem::Thm2, thm2(&ctx, g, alpha, f_args, f, opts)),
        EquationForm::Thm4 { factors, g } => (Theorem::Thm4, thm4(&ctx, factors, g)),
        EquationForm::Cor1 { func, g, h } => (Theorem::Cor1, cor1(&ctx, *func, g, h)),
        EquationForm::Cor2 { h1, func, g, h2 } => (Theorem::Cor2, cor2(&ctx, h1, *func, g, h2)),
        EquationForm::Cor3 { arcfn, f } => (Theorem::Cor3, cor3(&ctx, *arcfn, f)),
        EquationForm::Cor4 { func, k, g, .. } => (Theorem::Cor4, cor4(&ctx, *func, *k, g)),
        EquationForm::Cor5 { func, g, h } => (Theorem::Cor5, cor5(&ctx, *func, g, h)),
        EquationForm::Lw { c, alpha } => {
            cert.value = Some(lw_value(c, alpha, root.prec_used.max(128)));
            cert.note = Some("x = 1 solves this equation; the certified number is the exponential sum on the right".into());
            (Theorem::Lw, lw_checks(c, alpha, opts.budget))
        }
    };
    cert.theorem = Some(theorem);
    cert.checks = checks;
    cert
}

fn thm2(ctx: &Ctx, g: &[Poly], alpha: &[AlgebraicNumber], f_args: &[Poly], f: &Poly, opts: &Options) -> Vec<Check> {
    let mut checks = vec![
        distinct_check(alpha, ctx.budget),
        Check::exact(
            "alpha_nonzero",
            "alpha_1, ..., alpha_m are non-zero",
            alpha.iter().all(|a| !a.is_zero()),
        ),
        Check::exact("alpha_algebraic", "alpha_1, ..., alpha_m are algebraic", true),
        ctx.root_nonzero(),
    ];
    let mut witness = Check::new(
        "some_term_nonzero",
        "f_i(a) != 0 != g_i(a) for some i",
        CheckStatus::Fail,
        0,
    );
    for (fi, gi) in f_args.iter().zip(g) {
        let pair = all_of(
            "some_term_nonzero",
            "",
            vec![ctx.poly_nonzero("f_i", "", fi), ctx.poly_nonzero("g_i", "", gi)],
        );
        witness.witness_prec = witness.witness_prec.max(pair.witness_prec);
        match pair.status {
            CheckStatus::Pass => {
                witness.status = CheckStatus::Pass;
                witness.witness_prec = pair.witness_prec;
                break;
            }
            CheckStatus::Undecided => witness.status = CheckStatus::Undecided,
            CheckStatus::Fail => {}
        }
    }
    checks.push(witness);
    checks.push(ctx.poly_nonzero("f_at_root_nonzero", "f(a) != 0", f));
    checks.push(Check::exact("f_not_zero", "f(x) is not the zero polynomial", !f.is_zero()));
    if opts.strict {
        checks.push(exponents_separated(ctx, alpha, f_args));
    }
    checks
}

/// `alpha_i f_i(a)` pairwise different at the root.
fn exponents_separated(ctx: &Ctx, alpha: &[AlgebraicNumber], f_args: &[Poly]) -> Check {
    let scaled: Vec<Option<Poly>> = alpha.iter().zip(f_args).map(|(a, f)| f.scale(a)).collect();
    let mut parts = Vec::new();
    for i in 0..scaled.len() {
        for j in i + 1..scaled.len() {
            let diff = match (&scaled[i], &scaled[j]) {
                (Some(a), Some(b)) => a.sub(b),
                _ => None,
            };
            parts.push(match diff {
                Some(d) if d.is_zero() => Check::new("", "", CheckStatus::Fail, 0),
                Some(d) => ctx.poly_nonzero("", "", &d),
                None => Check::new("", "", CheckStatus::Undecided, 0),
            });
        }
    }
    all_of(
        "exponents_separated",
        "alpha_i f_i(a) are pairwise distinct",
        parts,
    )
}

fn thm4(ctx: &Ctx, factors: &[PowerFactor], g: &Poly) -> Vec<Check> {
    let fi = factors
        .iter()
        .map(|pf| ctx.poly_nonzero("f_i", "", &pf.f))
        .collect();
    vec![
        Check::exact(
            "alpha_not_zero_or_one",
            "alpha_1, ..., alpha_n are not 0 or 1",
            factors.iter().all(|pf| !pf.alpha.is_zero() && !pf.alpha.is_one()),
        ),
        Check::exact(
            "beta_irrational",
            "beta_1, ..., beta_n are irrational algebraic numbers",
            factors.iter().all(|pf| pf.beta.is_irrational()),
        ),
        all_of("f_i_nonzero", "f_1(a), ..., f_n(a) are non-zero", fi),
        ctx.poly_nonzero("g_nonzero", "g(a) != 0", g),
        ctx.root_nonzero(),
        Check::exact(
            "branch_declared",
            format!("powers are taken on the {} branch", ctx.root.branch),
            !ctx.root.branch.is_empty(),
        ),
    ]
}

fn func_nonzero(ctx: &Ctx, func: Func) -> Check {
    ctx.nonzero_check("f_nonzero", "f(a) != 0", &move |z, _| func.apply(z))
}

fn composite_nonzero(ctx: &Ctx, name: &'static str, hypothesis: &str, func: Func, g: &Poly) -> Check {
    ctx.nonzero_check(name, hypothesis, &|z, prec| g.eval(&func.apply(z)?, prec))
}

fn cor1(ctx: &Ctx, func: Func, g: &Poly, h: &Poly) -> Vec<Check> {
    vec![
        ctx.root_nonzero(),
        func_nonzero(ctx, func),
        composite_nonzero(ctx, "g_of_f_nonzero", "g(f(a)) != 0", func, g),
        rational_coefficients(&[g, h]),
    ]
}

fn cor2(ctx: &Ctx, h1: &Poly, func: Func, g: &Poly, h2: &Poly) -> Vec<Check> {
    vec![
        ctx.root_nonzero(),
        ctx.poly_nonzero("h1_nonzero", "h_1(a) != 0", h1),
        ctx.poly_nonzero("g_nonzero", "g(a) != 0", g),
        ctx.nonzero_check("f_of_g_nonzero", "f(g(a)) != 0", &|z, prec| func.apply(&g.eval(z, prec)?)),
        ctx.poly_nonzero("h2_nonzero", "h_2(a) != 0", h2),
        rational_coefficients(&[h1, g, h2]),
    ]
}

fn cor3(ctx: &Ctx, arcfn: Func, f: &Poly) -> Vec<Check> {
    let defined = {
        let (status, prec) = ctx.defined(&|z, _| arcfn.apply(z));
        Check::new("arc_defined", "the inverse function is defined at a", status, prec)
    };
    vec![
        ctx.root_nonzero(),
        defined,
        ctx.poly_nonzero("f_nonzero", "f(a) != 0", f),
        rational_coefficients(&[f]),
    ]
}

fn cor4(ctx: &Ctx, func: Func, k: u32, g: &Poly) -> Vec<Check> {
    vec![
        ctx.root_nonzero(),
        func_nonzero(ctx, func),
        ctx.poly_nonzero("g_nonzero", "g(a) != 0", g),
        Check::exact("a1_algebraic", "a_1 is algebraic", true),
        Check::exact("k_positive", "k is a positive integer", k >= 1),
        rational_coefficients(&[g]),
    ]
}

fn cor5(ctx: &Ctx, func: Func, g: &Poly, h: &Poly) -> Vec<Check> {
    vec![
        Check::exact("degree_bound", "1 <= deg g <= 4", (1..=4).contains(&g.degree())),
        ctx.root_nonzero(),
        func_nonzero(ctx, func),
        composite_nonzero(ctx, "g_of_f_nonzero", "g(f(a)) != 0", func, g),
        ctx.poly_nonzero("h_nonzero", "h(a) != 0", h),
        rational_coefficients(&[g, h]),
    ]
}
