//! Normalization of an equation into one of the supported families.

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{algebraic_json, AlgebraicNumber, Equation, Expr, Poly};
use crate::ball::{Constant, Func};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnclassifiedReason {
    /// A constant that is not known to be algebraic (pi) appears.
    NonAlgebraicConstant,
    /// The equation is polynomial; its roots are algebraic.
    AlgebraicEquation,
    /// The variable does not occur.
    NoVariable,
    /// No supported family matches the shape.
    UnsupportedShape,
}

impl UnclassifiedReason {
    pub fn name(self) -> &'static str {
        match self {
            UnclassifiedReason::NonAlgebraicConstant => "NonAlgebraicConstant",
            UnclassifiedReason::AlgebraicEquation => "AlgebraicEquation",
            UnclassifiedReason::NoVariable => "NoVariable",
            UnclassifiedReason::UnsupportedShape => "UnsupportedShape",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Unclassified {
    pub reason: UnclassifiedReason,
    pub detail: String,
    pub source: Equation,
}

/// One factor `(alpha * f(x))^beta` of a power product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerFactor {
    pub alpha: AlgebraicNumber,
    pub f: Poly,
    pub beta: AlgebraicNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EquationForm {
    /// `sum g_i(x) e^(alpha_i f_i(x)) = f(x)`.
    Thm2 {
        g: Vec<Poly>,
        alpha: Vec<AlgebraicNumber>,
        f_args: Vec<Poly>,
        f: Poly,
    },
    /// `prod (alpha_i f_i(x))^beta_i = g(x)` on the principal branch.
    Thm4 { factors: Vec<PowerFactor>, g: Poly },
    /// `g(func(x)) = h(x)` with `g` a polynomial without constant term.
    Cor1 { func: Func, g: Poly, h: Poly },
    /// `h1(x) func(g(x)) = h2(x)`.
    Cor2 { h1: Poly, func: Func, g: Poly, h2: Poly },
    /// `arcfn(x) = f(x)`.
    Cor3 { arcfn: Func, f: Poly },
    /// `(func(x) + a1)^k = g(x)`.
    Cor4 { func: Func, a1: AlgebraicNumber, k: u32, g: Poly },
    /// `g(func(x)) = h(x)` with `1 <= deg g <= 4`.
    Cor5 { func: Func, g: Poly, h: Poly },
    /// `sum c_i e^(alpha_i x) = sum c_i e^(alpha_i)`, solved by `x = 1`.
    Lw { c: Vec<BigRational>, alpha: Vec<AlgebraicNumber> },
    Unclassified(Unclassified),
}

impl EquationForm {
    pub fn name(&self) -> &'static str {
        match self {
            EquationForm::Thm2 { .. } => "Thm2Form",
            EquationForm::Thm4 { .. } => "Thm4Form",
            EquationForm::Cor1 { .. } => "Cor1Form",
            EquationForm::Cor2 { .. } => "Cor2Form",
            EquationForm::Cor3 { .. } => "Cor3Form",
            EquationForm::Cor4 { .. } => "Cor4Form",
            EquationForm::Cor5 { .. } => "Cor5Form",
            EquationForm::Lw { .. } => "LWForm",
            EquationForm::Unclassified(_) => "Unclassified",
        }
    }

    pub fn is_classified(&self) -> bool {
        !matches!(self, EquationForm::Unclassified(_))
    }

    /// An equation of exactly this form.
    pub fn to_equation(&self) -> Equation {
        match self {
            EquationForm::Thm2 { g, alpha, f_args, f } => {
                let terms = g.iter().zip(alpha).zip(f_args).map(|((gi, a), fi)| {
                    let exponent = fi.scale(a).expect("same field").to_expr();
                    let ex = Expr::pow(Expr::Named(Constant::E), exponent);
                    if gi == &Poly::one() {
                        ex
                    } else {
                        Expr::mul(gi.to_expr(), ex)
                    }
                });
                Equation::new(sum(terms), f.to_expr())
            }
            EquationForm::Lw { c, alpha } => {
                let term = |ci: &BigRational, e: Expr| {
                    let ex = Expr::pow(Expr::Named(Constant::E), e);
                    if *ci == BigRational::from_integer(1.into()) {
                        ex
                    } else {
                        Expr::mul(Expr::rational(ci.clone()), ex)
                    }
                };
                let lhs = c.iter().zip(alpha).map(|(ci, a)| {
                    let e = if a.is_one() {
                        Expr::Var
                    } else {
                        Expr::mul(Expr::Const(a.clone()), Expr::Var)
                    };
                    term(ci, e)
                });
                let rhs = c.iter().zip(alpha).map(|(ci, a)| term(ci, Expr::Const(a.clone())));
                Equation::new(sum(lhs), sum(rhs))
            }
            EquationForm::Thm4 { factors, g } => {
                let prod = factors
                    .iter()
                    .map(|p| {
                        let base = p.f.scale(&p.alpha).expect("same field").to_expr();
                        Expr::pow(base, Expr::Const(p.beta.clone()))
                    })
                    .reduce(Expr::mul)
                    .expect("at least one factor");
                Equation::new(prod, g.to_expr())
            }
            EquationForm::Cor1 { func, g, h } | EquationForm::Cor5 { func, g, h } => {
                Equation::new(subst(g, &Expr::func(*func, Expr::Var)), h.to_expr())
            }
            EquationForm::Cor2 { h1, func, g, h2 } => {
                let fx = Expr::func(*func, g.to_expr());
                let lhs = if h1 == &Poly::one() {
                    fx
                } else {
                    Expr::mul(h1.to_expr(), fx)
                };
                Equation::new(lhs, h2.to_expr())
            }
            EquationForm::Cor3 { arcfn, f } => Equation::new(Expr::func(*arcfn, Expr::Var), f.to_expr()),
            EquationForm::Cor4 { func, a1, k, g } => {
                let fx = Expr::func(*func, Expr::Var);
                let base = if a1.is_zero() {
                    fx
                } else {
                    Expr::add(fx, Expr::Const(a1.clone()))
                };
                let lhs = if *k == 1 {
                    base
                } else {
                    Expr::pow(base, Expr::int(*k as i64))
                };
                Equation::new(lhs, g.to_expr())
            }
            EquationForm::Unclassified(u) => u.source.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let polys = |v: &[Poly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        let algs = |v: &[AlgebraicNumber]| v.iter().map(algebraic_json).collect::<Vec<_>>();
        let body = match self {
            EquationForm::Thm2 { g, alpha, f_args, f } => json!({
                "m": g.len(), "g": polys(g), "alpha": algs(alpha), "f_i": polys(f_args), "f": f.to_string(),
            }),
            EquationForm::Thm4 { factors, g } => json!({
                "n": factors.len(),
                "alpha": factors.iter().map(|p| algebraic_json(&p.alpha)).collect::<Vec<_>>(),
                "f_i": factors.iter().map(|p| p.f.to_string()).collect::<Vec<_>>(),
                "beta": factors.iter().map(|p| algebraic_json(&p.beta)).collect::<Vec<_>>(),
                "g": g.to_string(),
                "branch": "principal",
            }),
            EquationForm::Cor1 { func, g, h } | EquationForm::Cor5 { func, g, h } => json!({
                "fn": func.name(), "g": g.to_string(), "h": h.to_string(),
            }),
            EquationForm::Cor2 { h1, func, g, h2 } => json!({
                "h1": h1.to_string(), "fn": func.name(), "g": g.to_string(), "h2": h2.to_string(),
            }),
            EquationForm::Cor3 { arcfn, f } => json!({"arcfn": arcfn.name(), "f": f.to_string()}),
            EquationForm::Cor4 { func, a1, k, g } => json!({
                "fn": func.name(), "a1": algebraic_json(a1), "k": k, "g": g.to_string(),
            }),
            EquationForm::Lw { c, alpha } => json!({
                "c": c.iter().map(|r| r.to_string()).collect::<Vec<_>>(), "alpha": algs(alpha),
            }),
            EquationForm::Unclassified(u) => json!({"reason": u.reason.name(), "detail": u.detail}),
        };
        json!({"kind": self.name(), "params": body})
    }
}

impl fmt::Display for EquationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationForm::Unclassified(u) => write!(f, "Unclassified{{{}: {}}}", u.reason.name(), u.detail),
            other => write!(f, "{}{{{}}}", other.name(), other.to_equation()),
        }
    }
}

fn sum(terms: impl Iterator<Item = Expr>) -> Expr {
    terms.reduce(Expr::add).unwrap_or_else(|| Expr::int(0))
}

/// `g(a)` built as an expression, highest degree first.
fn subst(g: &Poly, a: &Expr) -> Expr {
    let generic = g.to_expr();
    replace_var(&generic, a)
}

fn replace_var(e: &Expr, a: &Expr) -> Expr {
    match e {
        Expr::Var => a.clone(),
        Expr::Const(_) | Expr::Named(_) => e.clone(),
        Expr::Add(x, y) => Expr::add(replace_var(x, a), replace_var(y, a)),
        Expr::Sub(x, y) => Expr::sub(replace_var(x, a), replace_var(y, a)),
        Expr::Mul(x, y) => Expr::mul(replace_var(x, a), replace_var(y, a)),
        Expr::Div(x, y) => Expr::div(replace_var(x, a), replace_var(y, a)),
        Expr::Pow(x, y) => Expr::pow(replace_var(x, a), replace_var(y, a)),
        Expr::Fn(func, x) => Expr::func(*func, replace_var(x, a)),
    }
}

fn rational_poly(p: &Poly) -> bool {
    p.coeffs().iter().all(AlgebraicNumber::is_rational)
}

// ------------------------------------------------------- exponential sums

/// `sum coeff_k(x) e^(exponent_k(x))`, exponents distinct, zero exponent
/// holding the polynomial part.
#[derive(Clone, Debug)]
struct ExpSum {
    terms: Vec<(Poly, Poly)>,
}

impl ExpSum {
    fn poly(p: Poly) -> Self {
        Self::from_terms(vec![(Poly::zero(), p)])
    }

    /// `raw` must have distinct exponents.
    fn from_terms(mut terms: Vec<(Poly, Poly)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(e, _)| (e.degree(), e.to_string()));
        Self { terms }
    }

    fn add(&self, o: &Self) -> Option<Self> {
        let mut raw = self.terms.clone();
        for (e, c) in &o.terms {
            if let Some(slot) = raw.iter_mut().find(|(f, _)| f == e) {
                slot.1 = slot.1.add(c)?;
            } else {
                raw.push((e.clone(), c.clone()));
            }
        }
        Some(Self::from_terms(raw))
    }

    fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect())
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        let mut acc = Self::poly(Poly::zero());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let t = Self::from_terms(vec![(e1.add(e2)?, c1.mul(c2)?)]);
                acc = acc.add(&t)?;
            }
        }
        Some(acc)
    }

    fn single(&self) -> Option<&(Poly, Poly)> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    fn from_expr(e: &Expr) -> Option<Self> {
        if let Some(p) = Poly::from_expr(e) {
            return Some(Self::poly(p));
        }
        match e {
            Expr::Named(Constant::E) => Some(Self::from_terms(vec![(Poly::one(), Poly::one())])),
            Expr::Add(a, b) => Self::from_expr(a)?.add(&Self::from_expr(b)?),
            Expr::Sub(a, b) => Self::from_expr(a)?.add(&Self::from_expr(b)?.neg()),
            Expr::Mul(a, b) => Self::from_expr(a)?.mul(&Self::from_expr(b)?),
            Expr::Div(a, b) => {
                let d = Self::from_expr(b)?;
                let (de, dc) = d.single()?;
                if !dc.is_constant() {
                    return None;
                }
                let inv = Self::from_terms(vec![(de.neg(), Poly::constant(dc.constant_term().inv()?))]);
                Self::from_expr(a)?.mul(&inv)
            }
            Expr::Pow(a, b) if matches!(**a, Expr::Named(Constant::E)) => {
                let exponent = Poly::from_expr(b)?;
                Some(Self::from_terms(vec![(exponent, Poly::one())]))
            }
            Expr::Pow(a, b) => {
                let k = b.as_const()?.as_small_integer()?;
                let base = Self::from_expr(a)?;
                match k {
                    0..=64 => {
                        let mut r = Self::poly(Poly::one());
                        for _ in 0..k {
                            r = r.mul(&base)?;
                        }
                        Some(r)
                    }
                    -64..=-1 => {
                        let (be, bc) = base.single()?;
                        if !bc.is_constant() {
                            return None;
                        }
                        let c = bc.constant_term().inv()?;
                        let inv = Self::from_terms(vec![(be.neg(), Poly::constant(c))]);
                        let mut r = Self::poly(Poly::one());
                        for _ in 0..-k {
                            r = r.mul(&inv)?;
                        }
                        Some(r)
                    }
                    _ => None,
                }
            }
            Expr::Fn(Func::Exp, a) => {
                let exponent = Poly::from_expr(a)?;
                Some(Self::from_terms(vec![(exponent, Poly::one())]))
            }
            _ => None,
        }
    }
}

// ------------------------------------------------------------- matching

fn unclassified(eq: &Equation, reason: UnclassifiedReason, detail: impl Into<String>) -> EquationForm {
    EquationForm::Unclassified(Unclassified {
        reason,
        detail: detail.into(),
        source: eq.clone(),
    })
}

/// Classify `lhs = rhs` into the most specific supported family.
pub fn classify(eq: &Equation) -> EquationForm {
    if eq.lhs.contains_named(Constant::Pi) || eq.rhs.contains_named(Constant::Pi) {
        return unclassified(
            eq,
            UnclassifiedReason::NonAlgebraicConstant,
            "pi is not algebraic, so it cannot serve as a base or coefficient",
        );
    }
    if !eq.lhs.has_var() && !eq.rhs.has_var() {
        return unclassified(eq, UnclassifiedReason::NoVariable, "x does not occur");
    }
    let residual = Expr::sub(eq.lhs.clone(), eq.rhs.clone());
    if let Some(sum) = ExpSum::from_expr(&residual) {
        if sum.terms.iter().all(|(e, _)| e.is_zero()) {
            return unclassified(eq, UnclassifiedReason::AlgebraicEquation, "polynomial equation");
        }
        if let Some(form) = match_lw(&sum) {
            return form;
        }
        return match_thm2(&sum);
    }
    let terms = additive_terms(&residual);
    let (poly_part, rest) = split_poly(&terms);
    if let (Some(p), [(sign, t)]) = (poly_part, rest.as_slice()) {
        let matchers: [Matcher; 4] = [match_thm4, match_cor3, match_cor2, match_cor4];
        for m in matchers {
            if let Some(form) = m(t, &p, *sign) {
                return form;
            }
        }
    }
    if let Some(form) = match_atom_poly(&residual) {
        return form;
    }
    unclassified(
        eq,
        UnclassifiedReason::UnsupportedShape,
        "no supported equation family matches",
    )
}

fn match_lw(sum: &ExpSum) -> Option<EquationForm> {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (e, c) in &sum.terms {
        if e.is_zero() || !c.is_constant() {
            return None;
        }
        let c = c.constant_term().as_rational()?.clone();
        if e.is_constant() {
            rhs.push((e.constant_term(), -c));
        } else if e.degree() == 1 && e.constant_term().is_zero() {
            lhs.push((e.coeff(1), c));
        } else {
            return None;
        }
    }
    if lhs.is_empty() || lhs.len() != rhs.len() {
        return None;
    }
    for (a, c) in &lhs {
        if !rhs.iter().any(|(b, d)| a == b && c == d) {
            return None;
        }
    }
    Some(EquationForm::Lw {
        c: lhs.iter().map(|(_, c)| c.clone()).collect(),
        alpha: lhs.into_iter().map(|(a, _)| a).collect(),
    })
}

fn match_thm2(sum: &ExpSum) -> EquationForm {
    let mut f = Poly::zero();
    let mut g = Vec::new();
    let mut alpha: Vec<AlgebraicNumber> = Vec::new();
    let mut f_args = Vec::new();
    for (e, c) in &sum.terms {
        if e.is_zero() {
            f = c.neg();
            continue;
        }
        // alpha is the leading coefficient, doubled until distinct
        let mut a = e.leading();
        while alpha.contains(&a) {
            a = a.mul(&AlgebraicNumber::integer(2)).expect("rational scaling");
        }
        let fi = e.scale(&a.inv().expect("nonzero")).expect("same field");
        g.push(c.clone());
        alpha.push(a);
        f_args.push(fi);
    }
    EquationForm::Thm2 { g, alpha, f_args, f }
}

fn additive_terms(e: &Expr) -> Vec<(bool, Expr)> {
    fn go(e: &Expr, positive: bool, out: &mut Vec<(bool, Expr)>) {
        match e {
            Expr::Add(a, b) => {
                go(a, positive, out);
                go(b, positive, out);
            }
            Expr::Sub(a, b) => {
                go(a, positive, out);
                go(b, !positive, out);
            }
            _ => out.push((positive, e.clone())),
        }
    }
    let mut out = Vec::new();
    go(e, true, &mut out);
    out
}

fn split_poly(terms: &[(bool, Expr)]) -> (Option<Poly>, Vec<(bool, Expr)>) {
    let mut acc = Some(Poly::zero());
    let mut rest = Vec::new();
    for (sign, t) in terms {
        match Poly::from_expr(t) {
            Some(p) => {
                let p = if *sign { p } else { p.neg() };
                acc = acc.and_then(|a| a.add(&p));
            }
            None => rest.push((*sign, t.clone())),
        }
    }
    (acc, rest)
}

/// Split a product into a constant coefficient and non-constant factors.
fn factors(e: &Expr) -> Option<(AlgebraicNumber, Vec<Expr>)> {
    fn go(e: &Expr, coeff: &mut AlgebraicNumber, out: &mut Vec<Expr>) -> Option<()> {
        match e {
            Expr::Mul(a, b) => {
                go(a, coeff, out)?;
                go(b, coeff, out)
            }
            Expr::Div(a, b) => {
                let d = Poly::from_expr(b)?;
                if !d.is_constant() {
                    return None;
                }
                *coeff = coeff.div(&d.constant_term())?;
                go(a, coeff, out)
            }
            _ => {
                match Poly::from_expr(e) {
                    Some(p) if p.is_constant() => *coeff = coeff.mul(&p.constant_term())?,
                    _ => out.push(e.clone()),
                }
                Some(())
            }
        }
    }
    let mut coeff = AlgebraicNumber::one();
    let mut out = Vec::new();
    go(e, &mut coeff, &mut out)?;
    Some((coeff, out))
}

/// The polynomial `q` with `sign * coeff * T + p = 0  <=>  T = q`.
fn solve_for(p: &Poly, sign: bool, coeff: &AlgebraicNumber) -> Option<Poly> {
    let c = if sign { coeff.clone() } else { coeff.neg() };
    p.neg().scale(&c.inv()?)
}

type Matcher = fn(&Expr, &Poly, bool) -> Option<EquationForm>;

fn match_thm4(t: &Expr, p: &Poly, sign: bool) -> Option<EquationForm> {
    let (coeff, fs) = factors(t)?;
    let mut out = Vec::new();
    let mut has_power = false;
    for fac in &fs {
        let (base, beta) = match fac {
            Expr::Pow(b, e) if !e.has_var() => {
                has_power = true;
                (Poly::from_expr(b)?, e.as_const()?.clone())
            }
            other => (Poly::from_expr(other)?, AlgebraicNumber::one()),
        };
        if base.is_constant() {
            return None;
        }
        let alpha = base.leading();
        let f = base.scale(&alpha.inv()?)?;
        out.push(PowerFactor { alpha, f, beta });
    }
    if !has_power {
        return None;
    }
    Some(EquationForm::Thm4 {
        factors: out,
        g: solve_for(p, sign, &coeff)?,
    })
}

fn match_cor3(t: &Expr, p: &Poly, sign: bool) -> Option<EquationForm> {
    let (coeff, fs) = factors(t)?;
    match fs.as_slice() {
        [Expr::Fn(f, a)] if f.is_arc() && **a == Expr::Var && coeff.is_rational() && rational_poly(p) => {
            Some(EquationForm::Cor3 {
                arcfn: *f,
                f: solve_for(p, sign, &coeff)?,
            })
        }
        _ => None,
    }
}

fn match_cor2(t: &Expr, p: &Poly, sign: bool) -> Option<EquationForm> {
    let (coeff, fs) = factors(t)?;
    if !coeff.is_rational() || !rational_poly(p) {
        return None;
    }
    let mut h1 = Poly::constant(if sign { coeff.clone() } else { coeff.neg() });
    let mut func = None;
    for fac in &fs {
        match fac {
            Expr::Fn(f, a) if f.is_log_trig_hyperbolic() && func.is_none() => {
                let g = Poly::from_expr(a)?;
                if g.is_constant() || !rational_poly(&g) {
                    return None;
                }
                func = Some((*f, g));
            }
            other => {
                let q = Poly::from_expr(other)?;
                if !rational_poly(&q) {
                    return None;
                }
                h1 = h1.mul(&q)?;
            }
        }
    }
    let (func, g) = func?;
    Some(EquationForm::Cor2 {
        h1,
        func,
        g,
        h2: p.neg(),
    })
}

fn match_cor4(t: &Expr, p: &Poly, sign: bool) -> Option<EquationForm> {
    let (coeff, fs) = factors(t)?;
    let [fac] = fs.as_slice() else { return None };
    let (base, k) = match fac {
        Expr::Pow(b, e) => {
            let k = e.as_const()?.as_small_integer()?;
            if !(1..=64).contains(&k) {
                return None;
            }
            ((**b).clone(), k as u32)
        }
        other => (other.clone(), 1),
    };
    let (func, a1) = kernel_plus_constant(&base)?;
    let g = solve_for(p, sign, &coeff)?;
    if !rational_poly(&g) {
        return None;
    }
    Some(EquationForm::Cor4 { func, a1, k, g })
}

fn kernel(e: &Expr) -> Option<Func> {
    match e {
        Expr::Fn(f, a) if f.is_trig_hyperbolic() && **a == Expr::Var => Some(*f),
        _ => None,
    }
}

fn kernel_plus_constant(e: &Expr) -> Option<(Func, AlgebraicNumber)> {
    if let Some(f) = kernel(e) {
        return Some((f, AlgebraicNumber::zero()));
    }
    match e {
        Expr::Add(a, b) => {
            if let (Some(f), Expr::Const(c)) = (kernel(a), &**b) {
                return Some((f, c.clone()));
            }
            if let (Expr::Const(c), Some(f)) = (&**a, kernel(b)) {
                return Some((f, c.clone()));
            }
            None
        }
        Expr::Sub(a, b) => match (kernel(a), &**b) {
            (Some(f), Expr::Const(c)) => Some((f, c.neg())),
            _ => None,
        },
        _ => None,
    }
}

// ----------------------------------------------- polynomials in func(x)

/// `sum c_k(x) A^k` for a fixed atom `A = func(x)`.
fn atom_poly(e: &Expr, atom: &Expr) -> Option<Vec<Poly>> {
    if e == atom {
        return Some(vec![Poly::zero(), Poly::one()]);
    }
    if let Some(p) = Poly::from_expr(e) {
        return Some(vec![p]);
    }
    let add = |a: Vec<Poly>, b: Vec<Poly>| -> Option<Vec<Poly>> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| {
                let x = a.get(k).cloned().unwrap_or_else(Poly::zero);
                let y = b.get(k).cloned().unwrap_or_else(Poly::zero);
                x.add(&y)
            })
            .collect()
    };
    let mul = |a: &[Poly], b: &[Poly]| -> Option<Vec<Poly>> {
        let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y)?)?;
            }
        }
        Some(out)
    };
    match e {
        Expr::Add(a, b) => add(atom_poly(a, atom)?, atom_poly(b, atom)?),
        Expr::Sub(a, b) => add(
            atom_poly(a, atom)?,
            atom_poly(b, atom)?.iter().map(Poly::neg).collect(),
        ),
        Expr::Mul(a, b) => mul(&atom_poly(a, atom)?, &atom_poly(b, atom)?),
        Expr::Div(a, b) => {
            let d = Poly::from_expr(b)?;
            if !d.is_constant() {
                return None;
            }
            let inv = d.constant_term().inv()?;
            atom_poly(a, atom)?.iter().map(|p| p.scale(&inv)).collect()
        }
        Expr::Pow(a, b) => {
            let k = b.as_const()?.as_small_integer()?;
            if !(0..=64).contains(&k) {
                return None;
            }
            let base = atom_poly(a, atom)?;
            let mut r = vec![Poly::one()];
            for _ in 0..k {
                r = mul(&r, &base)?;
            }
            Some(r)
        }
        _ => None,
    }
}

fn first_fn_atom(e: &Expr) -> Option<Func> {
    if let Expr::Fn(f, a) = e {
        if **a == Expr::Var && f.is_log_trig_hyperbolic() {
            return Some(*f);
        }
    }
    e.children().into_iter().find_map(first_fn_atom)
}

fn match_atom_poly(residual: &Expr) -> Option<EquationForm> {
    let func = first_fn_atom(residual)?;
    let atom = Expr::func(func, Expr::Var);
    let mut cs = atom_poly(residual, &atom)?;
    while cs.len() > 1 && cs.last().is_some_and(Poly::is_zero) {
        cs.pop();
    }
    if cs.len() < 2 {
        return None;
    }
    let mut g = vec![AlgebraicNumber::zero()];
    for c in &cs[1..] {
        if !c.is_constant() || !rational_poly(c) {
            return None;
        }
        g.push(c.constant_term());
    }
    let h = cs[0].neg();
    if !rational_poly(&h) {
        return None;
    }
    let g = Poly::new(g);
    let degree = g.degree();
    if func.is_trig_hyperbolic() && (1..=4).contains(&degree) {
        Some(EquationForm::Cor5 { func, g, h })
    } else {
        Some(EquationForm::Cor1 { func, g, h })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_equation;

    fn cls(s: &str) -> EquationForm {
        classify(&parse_equation(s).unwrap())
    }

    fn p(s: &str) -> Poly {
        Poly::from_expr(&crate::expr::parse_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn exp_sum_is_thm2() {
        let form = cls("e^x + x - 12 = 0");
        assert_eq!(
            form,
            EquationForm::Thm2 {
                g: vec![Poly::one()],
                alpha: vec![AlgebraicNumber::one()],
                f_args: vec![Poly::x()],
                f: p("12 - x"),
            }
        );
    }

    #[test]
    fn pi_base_is_refused() {
        let EquationForm::Unclassified(u) = cls("pi^x + 4*x = 49") else {
            panic!("expected Unclassified")
        };
        assert_eq!(u.reason, UnclassifiedReason::NonAlgebraicConstant);
    }

    #[test]
    fn power_product_is_thm4() {
        let form = cls("(3*x)^sqrt(7) = x^2 + 10*x + 5");
        let EquationForm::Thm4 { factors, g } = &form else {
            panic!("expected Thm4, got {form}")
        };
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].alpha, AlgebraicNumber::integer(3));
        assert_eq!(factors[0].f, Poly::x());
        assert_eq!(factors[0].beta, AlgebraicNumber::sqrt_rational(&BigRational::from_integer(7.into())).unwrap());
        assert_eq!(*g, p("x^2 + 10*x + 5"));
    }

    #[test]
    fn corollary_shapes() {
        assert!(matches!(cls("sin(x) = 1 - x"), EquationForm::Cor2 { func: Func::Sin, .. }));
        assert!(matches!(cls("x*ln(x^2 + 1) = 3"), EquationForm::Cor2 { func: Func::Ln, .. }));
        assert!(matches!(cls("atan(x) = x/2 - 1"), EquationForm::Cor3 { arcfn: Func::Atan, .. }));
        assert!(matches!(cls("(cos(x) + sqrt(2))^3 = x"), EquationForm::Cor4 { k: 3, .. }));
        assert!(matches!(cls("sin(x)^2 + sin(x) = x"), EquationForm::Cor5 { .. }));
        assert!(matches!(cls("ln(x)^2 = x - 3"), EquationForm::Cor1 { func: Func::Ln, .. }));
        assert!(matches!(cls("tanh(x)^5 = x"), EquationForm::Cor4 { k: 5, .. }));
        assert!(matches!(cls("tanh(x)^5 + tanh(x) = x"), EquationForm::Cor1 { .. }));
    }

    #[test]
    fn exponential_sums() {
        assert!(matches!(cls("x*e^x = 12 - x"), EquationForm::Thm2 { .. }));
        assert!(matches!(cls("e^x - x + 7 = 0"), EquationForm::Thm2 { .. }));
        assert!(matches!(cls("e^x + e^(2*x) = e + e^2"), EquationForm::Lw { .. }));
        let EquationForm::Thm2 { alpha, .. } = cls("e^x + e^(x^2) = 3") else {
            panic!()
        };
        assert_eq!(alpha, vec![AlgebraicNumber::integer(1), AlgebraicNumber::integer(2)]);
    }

    #[test]
    fn other_reasons() {
        let reason = |s: &str| match cls(s) {
            EquationForm::Unclassified(u) => u.reason,
            f => panic!("classified {s} as {f}"),
        };
        assert_eq!(reason("x^2 = 2"), UnclassifiedReason::AlgebraicEquation);
        assert_eq!(reason("1 = 2"), UnclassifiedReason::NoVariable);
        assert_eq!(reason("x^x = 2"), UnclassifiedReason::UnsupportedShape);
        assert_eq!(reason("2^x = 3"), UnclassifiedReason::UnsupportedShape);
    }

    #[test]
    fn reclassification_fixpoint() {
        for s in [
            "e^x + x - 12 = 0",
            "(3*x)^sqrt(7) = x^2 + 10*x + 5",
            "sin(x) = 1 - x",
            "x*e^x = 12 - x",
            "e^x + e^(x^2) = 3",
            "e^x + e^(2*x) = e + e^2",
            "(cos(x) + sqrt(2))^3 = x",
            "sin(x)^2 + sin(x) = x",
            "atan(x) = x/2 - 1",
            "ln(x)^7 = x - 3",
        ] {
            let form = cls(s);
            assert!(form.is_classified(), "{s}");
            let again = classify(&form.to_equation());
            assert_eq!(again, form, "{s}");
        }
    }
}
