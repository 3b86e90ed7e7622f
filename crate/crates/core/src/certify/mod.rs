//! Transcendence certificates: hypothesis checks for each supported
//! theorem, evaluated on a located root or an explicit value.
//!
//! A certificate records which hypotheses were verified and at what
//! precision. It is an auditable record, not a formal proof.

mod hypotheses;
mod values;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::ball::{hexfloat, BallComplex, RefineBudget};
use crate::expr::EquationForm;
use crate::rootfind::RootEnclosure;

pub use hypotheses::{certify, certify_with, Options};
pub use values::{certify_function_value, certify_lw_combination, combine_complex, Sign, Transcendental};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Thm2,
    Thm4,
    Cor1,
    Cor2,
    Cor3,
    Cor4,
    Cor5,
    Lw,
    Prop1,
    FunctionValue,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Thm2 => "Thm2",
            Theorem::Thm4 => "Thm4",
            Theorem::Cor1 => "Cor1",
            Theorem::Cor2 => "Cor2",
            Theorem::Cor3 => "Cor3",
            Theorem::Cor4 => "Cor4",
            Theorem::Cor5 => "Cor5",
            Theorem::Lw => "LW",
            Theorem::Prop1 => "Prop1",
            Theorem::FunctionValue => "FunctionValue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    Undecided,
}

impl CheckStatus {
    pub fn name(self) -> &'static str {
        match self {
            CheckStatus::Pass => "Pass",
            CheckStatus::Fail => "Fail",
            CheckStatus::Undecided => "Undecided",
        }
    }
}

/// One instantiated hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub hypothesis: String,
    pub status: CheckStatus,
    /// Precision of the ball that decided the check, or the last one tried.
    pub witness_prec: u32,
}

impl Check {
    pub fn new(name: &'static str, hypothesis: impl Into<String>, status: CheckStatus, witness_prec: u32) -> Self {
        Self {
            name,
            hypothesis: hypothesis.into(),
            status,
            witness_prec,
        }
    }

    pub(crate) fn exact(name: &'static str, hypothesis: impl Into<String>, ok: bool) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self::new(name, hypothesis, status, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refused(String),
    Undecided,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "Certified",
            Verdict::Refused(_) => "Refused",
            Verdict::Undecided => "Undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Refused(r) => write!(f, "Refused({r})"),
            v => f.write_str(v.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("exponents are not pairwise distinct")]
    DuplicateExponents,
    #[error("all coefficients are zero")]
    AllCoefficientsZero,
    #[error("coefficient and exponent lists differ in length")]
    LengthMismatch,
    #[error("input is not certified: {0}")]
    InputNotCertified(String),
    #[error("argument is zero")]
    ZeroArgument,
    #[error("{0} is outside the function's domain")]
    DomainViolation(String),
    #[error("{0} is not one of ln, sin, cos, tan, csc, sec, cot, sinh, cosh, tanh, coth")]
    UnsupportedFunction(String),
}

/// A transcendence certificate or refusal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Equation text, or a description of the certified value.
    pub subject: String,
    pub ast: Option<Value>,
    pub form: Option<EquationForm>,
    pub theorem: Option<Theorem>,
    pub root: Option<RootEnclosure>,
    /// The certified number when it is not a root (LW, Prop1, FunctionValue).
    pub value: Option<BallComplex>,
    pub checks: Vec<Check>,
    pub strict: bool,
    /// Refusal that no precision can lift, such as an unsupported shape.
    pub structural_refusal: Option<String>,
    pub note: Option<String>,
}

impl Certificate {
    /// Certified exactly when there is a theorem, no structural refusal,
    /// and every check passed. Any failed check refuses; otherwise any
    /// undecided check leaves the verdict undecided.
    pub fn verdict(&self) -> Verdict {
        if let Some(r) = &self.structural_refusal {
            return Verdict::Refused(r.clone());
        }
        if self.theorem.is_none() || self.checks.is_empty() {
            return Verdict::Refused("NoTheorem".into());
        }
        if let Some(c) = self.checks.iter().find(|c| c.status == CheckStatus::Fail) {
            return Verdict::Refused(format!("HypothesisFailed:{}", c.name));
        }
        if self.checks.iter().any(|c| c.status == CheckStatus::Undecided) {
            return Verdict::Undecided;
        }
        Verdict::Certified
    }

    pub fn is_certified(&self) -> bool {
        self.verdict() == Verdict::Certified
    }

    /// Largest witness precision among checks that gave up.
    pub fn undecided_prec(&self) -> Option<u32> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Undecided)
            .map(|c| c.witness_prec)
            .max()
    }

    pub fn to_json(&self) -> Value {
        let verdict = self.verdict();
        let mut v = json!({
            "schema": SCHEMA_VERSION,
            "equation": self.subject,
            "ast": self.ast,
            "form": self.form.as_ref().map(EquationForm::to_json),
            "theorem": self.theorem.map(Theorem::name),
            "root": self.root.as_ref().map(RootEnclosure::to_json),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "hypothesis": c.hypothesis,
                "status": c.status.name(),
                "witness_prec": c.witness_prec,
            })).collect::<Vec<_>>(),
            "strict": self.strict,
            "verdict": verdict.name(),
        });
        let obj = v.as_object_mut().expect("object");
        if let Verdict::Refused(r) = &verdict {
            obj.insert("reason".into(), json!(r));
        }
        if let Some(val) = &self.value {
            obj.insert("value".into(), ball_json(val));
        }
        if let Some(n) = &self.note {
            obj.insert("note".into(), json!(n));
        }
        v
    }
}

fn ball_json(b: &BallComplex) -> Value {
    json!({
        "re_mid": hexfloat::to_hex(b.re.mid()),
        "re_rad": hexfloat::mag_to_hex(&b.re.rad()),
        "im_mid": hexfloat::to_hex(b.im.mid()),
        "im_rad": hexfloat::mag_to_hex(&b.im.rad()),
        "re_decimal": b.re.to_decimal(30),
        "im_decimal": b.im.to_decimal(30),
    })
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "equation: {}", self.subject)?;
        if let Some(t) = self.theorem {
            writeln!(f, "theorem:  {}", t.name())?;
        }
        if let Some(r) = &self.root {
            writeln!(f, "root:     {r}")?;
        }
        for c in &self.checks {
            writeln!(f, "  [{:<9}] {} ({}, {} bits)", c.status.name(), c.name, c.hypothesis, c.witness_prec)?;
        }
        if let Some(n) = &self.note {
            writeln!(f, "note:     {n}")?;
        }
        write!(f, "verdict:  {}", self.verdict())
    }
}

/// Precision schedule for nonzero checks: start at 64 bits, double up to
/// 4096.
pub fn default_budget() -> RefineBudget {
    RefineBudget {
        start_prec: 64,
        doublings: 6,
        max_prec: 4096,
    }
}
