//! Command-line front end: parse, solve, certify and digit tools.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 no roots, 3 undecided
//! within budget, 4 certification refused.

pub mod args;

use std::fmt::Write as _;

use clap::Parser;
use serde_json::{json, Value};
use thiserror::Error;

use transcert::ball::{BallComplex, Constant};
use transcert::certify::{
    certify_function_value, certify_lw_combination, certify_with, combine_complex, Certificate, CertifyError,
    Options, Sign, Transcendental, Verdict,
};
use transcert::digitstream::{self, stat_tests, DigitError, DigitStream, StatTest};
use transcert::expr::{classify, parse_equation, parse_expr, AlgebraicNumber, Equation, Expr, ParseError};
use transcert::rootfind::{
    find_complex_roots, isolate_real_roots, minimal_modulus_root, RootEnclosure, RootError,
};

use args::{Cli, Command, Domain, Output, RootChoice, SignArg};

/// Exit code with everything the process writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    pub fn stdout_text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }

    /// Standard output parsed as JSON.
    pub fn json(&self) -> Option<Value> {
        serde_json::from_slice(&self.stdout).ok()
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source}\n  {input}\n  {caret}")]
    Parse {
        source: ParseError,
        input: String,
        caret: String,
    },
    #[error("no roots in {0}")]
    NoRoots(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::NoRoots(_) => 2,
            CliError::Root(e) => match e {
                RootError::InvalidRegion(_) => 1,
                RootError::NoRootWithin(_) => 2,
                _ => 3,
            },
            CliError::Digit(e) => match e {
                DigitError::BoundaryUnresolved { .. } => 3,
                _ => 1,
            },
            CliError::Certify(_) => 4,
        }
    }

    /// Variant name shown in JSON diagnostics.
    pub fn kind(&self) -> String {
        let debug = match self {
            CliError::Usage(_) => return "Usage".into(),
            CliError::Parse { .. } => return "ParseError".into(),
            CliError::NoRoots(_) => return "NoRoots".into(),
            CliError::Root(e) => format!("{e:?}"),
            CliError::Digit(e) => format!("{e:?}"),
            CliError::Certify(e) => format!("{e:?}"),
        };
        debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_string()
    }
}

fn parse_failure(source: ParseError, input: &str) -> CliError {
    let caret = format!("{}^", " ".repeat(source.position.min(input.len())));
    CliError::Parse {
        source,
        input: input.to_string(),
        caret,
    }
}

struct Emit {
    stdout: Vec<u8>,
    code: i32,
}

impl Emit {
    fn ok(stdout: impl Into<Vec<u8>>) -> Self {
        Self {
            stdout: stdout.into(),
            code: 0,
        }
    }
}

fn render(output: Output, value: &Value, text: String) -> Vec<u8> {
    let mut s = match output {
        Output::Json => serde_json::to_string_pretty(value).expect("serializable"),
        Output::Text => text,
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

/// Run one invocation. `argv[0]` is the program name.
pub fn run<I, S>(argv: I, stdin: &[u8]) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: Vec::new(),
                    stderr: text,
                }
            };
        }
    };
    let json_mode = output_of(&cli.command) == Output::Json;
    match dispatch(cli.command, stdin) {
        Ok(Emit { stdout, code }) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => {
            let stdout = if json_mode {
                let v = json!({"error": e.kind(), "message": e.to_string()});
                render(Output::Json, &v, String::new())
            } else {
                Vec::new()
            };
            Outcome {
                code: e.exit_code(),
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn output_of(c: &Command) -> Output {
    match c {
        Command::Solve(a) => a.common.output,
        Command::Certify(a) => a.common.output,
        Command::Digits(a) => a.output,
        Command::Table(a) => a.output,
        Command::Keygen(a) => a.output,
        Command::Stats(a) => a.output,
        Command::Encrypt(_) => Output::Text,
        Command::Lw(a) => a.common.output,
        Command::Combine(a) => a.common.output,
    }
}

fn dispatch(command: Command, stdin: &[u8]) -> Result<Emit, CliError> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Digits(a) => digits(a),
        Command::Table(a) => table(a),
        Command::Keygen(a) => keygen(a),
        Command::Stats(a) => stats(a),
        Command::Encrypt(a) => encrypt(a, stdin),
        Command::Lw(a) => lw(a),
        Command::Combine(a) => combine(a),
    }
}

fn equation(text: &str) -> Result<Equation, CliError> {
    parse_equation(text).map_err(|e| parse_failure(e, text))
}

const DEFAULT_REAL_REGION: &str = "-100,100";

/// Roots of `h` in the region, in canonical order, with the region text.
fn locate(h: &Expr, domain: Domain, region: Option<&str>, prec: u32) -> Result<(Vec<RootEnclosure>, String), CliError> {
    match domain {
        Domain::Real => {
            let text = region.unwrap_or(DEFAULT_REAL_REGION);
            let (a, b) = args::parse_interval(text).map_err(CliError::Usage)?;
            Ok((isolate_real_roots(h, &a, &b, prec)?, text.to_string()))
        }
        Domain::Complex => {
            let text = region.ok_or_else(|| CliError::Usage("--region is required with --domain complex".into()))?;
            let rect = args::parse_rect(text).map_err(CliError::Usage)?;
            let found = find_complex_roots(h, &rect, prec)?;
            if let Some(r) = found.avoided.first() {
                return Err(RootError::Undecided {
                    region: format!("{r} (function not verified holomorphic there)"),
                    prec,
                }
                .into());
            }
            Ok((found.roots, text.to_string()))
        }
    }
}

fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Real => "real",
        Domain::Complex => "complex",
    }
}

fn root_line(r: &RootEnclosure) -> String {
    let v = r.to_json();
    let re = v["re_decimal"].as_str().unwrap_or_default();
    let num = if r.real {
        re.to_string()
    } else {
        let im = v["im_decimal"].as_str().unwrap_or_default();
        match im.strip_prefix('-') {
            Some(m) => format!("{re} - {m}i"),
            None => format!("{re} + {im}i"),
        }
    };
    format!("{num}  [{}, {} bits]", r.proof.name(), r.prec_used)
}

fn solve(a: args::SolveArgs) -> Result<Emit, CliError> {
    let eq = equation(&a.problem.equation)?;
    let h = eq.residual();
    let prec = a.common.prec;
    if a.minimal_modulus {
        if a.problem.domain != Domain::Complex {
            return Err(CliError::Usage("--minimal-modulus needs --domain complex".into()));
        }
        let rmax_text = a.rmax.expect("clap enforces --rmax");
        let rmax = args::parse_rational(&rmax_text).map_err(CliError::Usage)?;
        let found = minimal_modulus_root(&h, &rmax, prec)?;
        let scanned: Vec<Value> = found
            .scanned
            .iter()
            .map(|(r, w)| json!({"half_side": r.to_string(), "winding": w}))
            .collect();
        let v = json!({
            "equation": eq.to_string(),
            "domain": "complex",
            "rmax": rmax_text,
            "prec": prec,
            "roots": transcert::rootfind::roots_json(&found.roots),
            "scanned": scanned,
        });
        let mut text = String::new();
        for (r, w) in &found.scanned {
            let _ = writeln!(text, "square |re|,|im| <= {r}: winding {w}");
        }
        for r in &found.roots {
            let _ = writeln!(text, "{}", root_line(r));
        }
        return Ok(Emit::ok(render(a.common.output, &v, text)));
    }
    let (roots, region) = locate(&h, a.problem.domain, a.problem.region.as_deref(), prec)?;
    if roots.is_empty() {
        return Err(CliError::NoRoots(region));
    }
    let v = json!({
        "equation": eq.to_string(),
        "domain": domain_name(a.problem.domain),
        "region": region,
        "prec": prec,
        "roots": transcert::rootfind::roots_json(&roots),
    });
    let text = roots.iter().map(root_line).collect::<Vec<_>>().join("\n");
    Ok(Emit::ok(render(a.common.output, &v, text)))
}

fn verdict_code(certs: &[Certificate]) -> i32 {
    let verdicts: Vec<Verdict> = certs.iter().map(Certificate::verdict).collect();
    if verdicts.iter().any(|v| matches!(v, Verdict::Refused(_))) {
        4
    } else if verdicts.contains(&Verdict::Undecided) {
        3
    } else {
        0
    }
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = String::new();
    if let Some(v) = &c.value {
        let _ = writeln!(s, "value:    {}", complex_text(v));
    }
    s.push_str(&c.to_string());
    s
}

fn complex_text(v: &BallComplex) -> String {
    let re = v.re.to_decimal(30);
    if v.im.is_exact_zero() {
        return re;
    }
    let im = v.im.to_decimal(30);
    match im.strip_prefix('-') {
        Some(m) => format!("{re} - {m}i"),
        None => format!("{re} + {im}i"),
    }
}

fn emit_certificates(certs: &[Certificate], output: Output) -> Emit {
    let v = Value::Array(certs.iter().map(Certificate::to_json).collect());
    let text = certs.iter().map(certificate_text).collect::<Vec<_>>().join("\n\n");
    Emit {
        stdout: render(output, &v, text),
        code: verdict_code(certs),
    }
}

fn certify_cmd(a: args::CertifyArgs) -> Result<Emit, CliError> {
    let prec = a.common.prec;
    if let Some(text) = &a.value {
        let cert = function_value(text, prec)?;
        return Ok(emit_certificates(&[cert], a.common.output));
    }
    let src = a
        .equation
        .as_deref()
        .ok_or_else(|| CliError::Usage("certify needs an equation or --value".into()))?;
    let eq = equation(src)?;
    let form = classify(&eq);
    let (roots, region) = locate(&eq.residual(), a.domain, a.region.as_deref(), prec)?;
    if roots.is_empty() {
        return Err(CliError::NoRoots(region));
    }
    let chosen: Vec<&RootEnclosure> = match a.root_index {
        Some(i) => vec![roots
            .get(i)
            .ok_or_else(|| CliError::Usage(format!("--root-index {i}: only {} roots found", roots.len())))?],
        None => roots.iter().collect(),
    };
    let opts = Options {
        strict: a.strict,
        ..Options::default()
    };
    let certs: Vec<Certificate> = chosen.into_iter().map(|r| certify_with(&form, r, &opts)).collect();
    Ok(emit_certificates(&certs, a.common.output))
}

/// Value of a constant expression built from algebraic literals.
fn fold_const(e: &Expr) -> Option<AlgebraicNumber> {
    match e {
        Expr::Const(c) => Some(c.clone()),
        Expr::Add(a, b) => fold_const(a)?.add(&fold_const(b)?),
        Expr::Sub(a, b) => fold_const(a)?.sub(&fold_const(b)?),
        Expr::Mul(a, b) => fold_const(a)?.mul(&fold_const(b)?),
        Expr::Div(a, b) => fold_const(a)?.div(&fold_const(b)?),
        _ => None,
    }
}

fn algebraic(text: &str) -> Result<AlgebraicNumber, CliError> {
    let e = parse_expr(text).map_err(|err| parse_failure(err, text))?;
    fold_const(&e).ok_or_else(|| CliError::Usage(format!("'{text}' is not an algebraic constant")))
}

fn function_value(text: &str, prec: u32) -> Result<Certificate, CliError> {
    let e = parse_expr(text).map_err(|err| parse_failure(err, text))?;
    let Expr::Fn(func, arg) = &e else {
        return Err(CliError::Usage(format!("--value {text}: expected f(a)")));
    };
    let a = fold_const(arg).ok_or_else(|| CliError::Usage(format!("--value {text}: argument is not algebraic")))?;
    let (_, cert) = certify_function_value(*func, &a, prec)?;
    Ok(cert)
}

fn lw(a: args::LwArgs) -> Result<Emit, CliError> {
    let c = args::parse_list(&a.coeffs).map_err(CliError::Usage)?;
    let alpha = split_top_level(&a.exponents)
        .iter()
        .map(|s| algebraic(s))
        .collect::<Result<Vec<_>, _>>()?;
    let (_, cert) = certify_lw_combination(&c, &alpha, a.common.prec)?;
    Ok(emit_certificates(&[cert], a.common.output))
}

/// Split on commas outside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(String::new());
                continue;
            }
            _ => {}
        }
        out.last_mut().expect("nonempty").push(ch);
    }
    out
}

fn operand(text: &str, region: Option<&str>, prec: u32) -> Result<Transcendental, CliError> {
    match text.trim() {
        "e" => return Ok(Transcendental::Builtin(Constant::E)),
        "pi" => return Ok(Transcendental::Builtin(Constant::Pi)),
        _ => {}
    }
    let eq = equation(text)?;
    let form = classify(&eq);
    let (roots, region) = locate(&eq.residual(), Domain::Real, region, prec)?;
    let root = roots.first().ok_or(CliError::NoRoots(region))?;
    Ok(Transcendental::Certified(Box::new(certify_with(&form, root, &Options::default()))))
}

fn combine(a: args::CombineArgs) -> Result<Emit, CliError> {
    let prec = a.common.prec;
    let t1 = operand(&a.first, a.first_region.as_deref(), prec)?;
    let t2 = operand(&a.second, a.second_region.as_deref(), prec)?;
    let sign = match a.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let cert = combine_complex(&t1, &t2, sign, prec)?;
    Ok(emit_certificates(&[cert], a.common.output))
}

/// Digit stream over the chosen real root.
fn stream(r: &RootChoice, base: u32) -> Result<DigitStream, CliError> {
    let eq = equation(&r.equation)?;
    let h = eq.residual();
    let (roots, region) = locate(&h, Domain::Real, Some(&r.region), 64)?;
    if roots.is_empty() {
        return Err(CliError::NoRoots(region));
    }
    let root = roots
        .get(r.root_index)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("--root-index {}: only {} roots found", r.root_index, roots.len())))?;
    Ok(DigitStream::new(h, root, base)?)
}

fn digits(a: args::DigitArgs) -> Result<Emit, CliError> {
    let s = stream(&a.root, a.base)?;
    let int = s.integer_part()?;
    let frac = s.digits_at(a.offset, a.count)?;
    let v = json!({
        "base": a.base,
        "offset": a.offset,
        "integer_part": int,
        "digits": frac,
    });
    let text = if a.offset == 0 { format!("{int}.{frac}") } else { frac };
    Ok(Emit::ok(render(a.output, &v, text)))
}

fn table(a: args::TableArgs) -> Result<Emit, CliError> {
    if a.rows == 0 || a.cols == 0 || a.width == 0 {
        return Err(CliError::Usage("--rows, --cols and --width must be positive".into()));
    }
    let mut s = stream(&a.root, a.base)?;
    s.seek(a.offset);
    let t = digitstream::random_table(&mut s, a.rows, a.cols, a.width)?;
    Ok(Emit::ok(render(a.output, &t.to_json(), t.to_text())))
}

fn keygen(a: args::KeygenArgs) -> Result<Emit, CliError> {
    let s = stream(&a.root, 16)?;
    let key = digitstream::keystream(&s, a.bytes, a.offset)?;
    if a.raw {
        return Ok(Emit::ok(key));
    }
    let hex = digitstream::to_hex(&key);
    let v = json!({"bytes": a.bytes, "offset": a.offset, "hex": hex});
    Ok(Emit::ok(render(a.output, &v, hex.clone())))
}

fn stats(a: args::StatsArgs) -> Result<Emit, CliError> {
    let tests = a
        .tests
        .split(',')
        .map(|t| t.trim().parse::<StatTest>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--tests: {e}")))?;
    let mut s = stream(&a.root, a.base)?;
    let digits = s.digits(a.count)?;
    let reports = stat_tests(&digits, a.base, &tests)?;
    let v = json!({
        "base": a.base,
        "count": a.count,
        "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    let text = reports
        .iter()
        .map(|r| {
            let df = r.df.map(|d| format!(" df={d}")).unwrap_or_default();
            format!("{:<6} n={} statistic={}{df} p={}", r.test.name(), r.n, r.statistic, r.p_value)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Emit::ok(render(a.output, &v, text)))
}

fn encrypt(a: args::EncryptArgs, stdin: &[u8]) -> Result<Emit, CliError> {
    let s = stream(&a.root, 16)?;
    let key = digitstream::keystream(&s, stdin.len(), a.offset)?;
    Ok(Emit::ok(digitstream::xor_cipher(&key, stdin)?))
}
