use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use transcert::rootfind::Rect;

#[derive(Debug, Parser)]
#[command(name = "transcert", version, about = "Certified roots and transcendence certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate every root of an equation in a region.
    Solve(SolveArgs),
    /// Locate roots and check the hypotheses of the matching theorem.
    Certify(CertifyArgs),
    /// Certified digits of a real root.
    Digits(DigitArgs),
    /// A table of digit groups from a real root.
    Table(TableArgs),
    /// Key bytes from the hexadecimal digits of a real root.
    Keygen(KeygenArgs),
    /// Frequency diagnostics on the digits of a real root.
    Stats(StatsArgs),
    /// XOR standard input with a root keystream (the same call decrypts).
    Encrypt(EncryptArgs),
    /// Value and certificate of sum c_i e^(alpha_i).
    Lw(LwArgs),
    /// Certificate for t1 + t2 i or t1 - t2 i.
    Combine(CombineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Working precision in bits: root boxes are at most 2^-prec wide.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..=1 << 20))]
    pub prec: u32,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Problem {
    /// Equation such as "e^x + x - 12 = 0".
    pub equation: String,
    #[arg(long, value_enum, default_value_t = Domain::Real)]
    pub domain: Domain,
    /// a,b for real search; re_min,re_max,im_min,im_max for complex search.
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[command(flatten)]
    pub common: Common,
    /// Report the roots of least modulus instead of all roots in a region.
    #[arg(long, requires = "rmax")]
    pub minimal_modulus: bool,
    /// Largest modulus searched by --minimal-modulus.
    #[arg(long)]
    pub rmax: Option<String>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Equation to solve and certify; omit when using --value.
    pub equation: Option<String>,
    #[arg(long, value_enum, default_value_t = Domain::Real)]
    pub domain: Domain,
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
    /// Certify only the root with this index (in output order).
    #[arg(long)]
    pub root_index: Option<usize>,
    /// Also require the exponent values to be pairwise separated.
    #[arg(long)]
    pub strict: bool,
    /// Certify a function value such as "sin(2)" instead of a root.
    #[arg(long, conflicts_with = "equation")]
    pub value: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RootChoice {
    /// Equation with a real root, such as "e^x + x - 12 = 0".
    pub equation: String,
    /// Real interval a,b searched for the root.
    #[arg(long, allow_hyphen_values = true)]
    pub region: String,
    #[arg(long, default_value_t = 0)]
    pub root_index: usize,
}

#[derive(Debug, Args)]
pub struct DigitArgs {
    #[command(flatten)]
    pub root: RootChoice,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..=36))]
    pub base: u32,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Fractional digits to skip.
    #[arg(long, default_value_t = 0)]
    pub offset: u64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub root: RootChoice,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..=36))]
    pub base: u32,
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub cols: usize,
    #[arg(long, default_value_t = 5)]
    pub width: usize,
    #[arg(long, default_value_t = 0)]
    pub offset: u64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub root: RootChoice,
    #[arg(long, default_value_t = 32)]
    pub bytes: usize,
    /// Hexadecimal digits to skip.
    #[arg(long, default_value_t = 0)]
    pub offset: u64,
    /// Write raw bytes instead of lowercase hex.
    #[arg(long)]
    pub raw: bool,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub root: RootChoice,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..=36))]
    pub base: u32,
    /// Comma-separated subset of chi2, serial, runs.
    #[arg(long, default_value = "chi2,serial,runs")]
    pub tests: String,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[command(flatten)]
    pub root: RootChoice,
    /// Hexadecimal digits of the key to skip.
    #[arg(long, default_value_t = 0)]
    pub offset: u64,
}

#[derive(Debug, Args)]
pub struct LwArgs {
    /// Comma-separated rational coefficients c_i.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    /// Comma-separated algebraic exponents alpha_i, such as 1,sqrt(2).
    #[arg(long, allow_hyphen_values = true)]
    pub exponents: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    /// "e", "pi", or an equation whose certified real root is used.
    pub first: String,
    pub second: String,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// Real interval for the first operand when it is an equation.
    #[arg(long, allow_hyphen_values = true)]
    pub first_region: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub second_region: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

/// Integer, fraction `p/q`, or terminating decimal, with optional sign.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let bad = || format!("'{s}' is not a rational number");
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(format!("'{s}' has a zero denominator"));
        }
        BigRational::new(p, q)
    } else if let Some((i, f)) = body.split_once('.') {
        if f.is_empty() && i.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{i}{f}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        BigRational::new(n, BigInt::from(10).pow(f.len() as u32))
    } else {
        BigRational::from_integer(body.parse().map_err(|_| bad())?)
    };
    Ok(if neg { -value } else { value })
}

pub fn parse_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_interval(s: &str) -> Result<(BigRational, BigRational), String> {
    match parse_list(s)?.as_slice() {
        [a, b] if a < b => Ok((a.clone(), b.clone())),
        [_, _] => Err(format!("--region {s}: need a < b")),
        _ => Err(format!("--region {s}: expected a,b")),
    }
}

pub fn parse_rect(s: &str) -> Result<Rect, String> {
    match parse_list(s)?.as_slice() {
        [a, b, c, d] => Rect::new(a.clone(), b.clone(), c.clone(), d.clone())
            .ok_or_else(|| format!("--region {s}: need re_min < re_max and im_min < im_max")),
        _ => Err(format!("--region {s}: expected re_min,re_max,im_min,im_max")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("-0.1"), Ok(q(-1, 10)));
        assert_eq!(parse_rational("1/100"), Ok(q(1, 100)));
        assert_eq!(parse_rational("12"), Ok(q(12, 1)));
        assert_eq!(parse_rational(".5"), Ok(q(1, 2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn regions() {
        assert!(parse_interval("0,10").is_ok());
        assert!(parse_interval("10,0").is_err());
        assert!(parse_rect("-1,0,-1,-0.1").is_ok());
        assert!(parse_rect("0,1,2").is_err());
    }
}
