//! Certified digit extraction from root enclosures, digit tables,
//! keystreams, frequency diagnostics and a toy XOR cipher.

mod stats;

use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ball::{BallReal, Dyadic, RefineBudget};
use crate::expr::Expr;
use crate::rootfind::{refine_root, RootEnclosure};

pub use stats::{stat_tests, StatReport, StatTest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigitError {
    #[error("base must be between 2 and 36, got {0}")]
    InvalidBase(u32),
    #[error("need at least one digit")]
    NoDigits,
    #[error("digit boundary at position {position} not resolved at {prec} bits")]
    BoundaryUnresolved { position: u64, prec: u32 },
    #[error("root is not real")]
    ComplexRoot,
    #[error("need at least {needed} digits for {test}, got {got}")]
    TooFewDigits { test: &'static str, needed: usize, got: usize },
    #[error("key has {key} bytes but the message has {message}")]
    KeyTooShort { key: usize, message: usize },
}

#[derive(Debug, Clone)]
enum Source {
    Root { h: Expr, root: RefCell<RootEnclosure> },
    Exact(BallReal),
}

/// Digits of `|x|` in a fixed base, where `x` is a certified real root or
/// a fixed ball.
#[derive(Debug, Clone)]
pub struct DigitStream {
    source: Source,
    base: u32,
    cursor: u64,
    budget: RefineBudget,
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl DigitStream {
    pub fn new(h: Expr, root: RootEnclosure, base: u32) -> Result<Self, DigitError> {
        if !root.real {
            return Err(DigitError::ComplexRoot);
        }
        Self::with_source(
            Source::Root {
                h,
                root: RefCell::new(root),
            },
            base,
        )
    }

    /// Stream over a ball that cannot be refined further.
    pub fn from_ball(x: BallReal, base: u32) -> Result<Self, DigitError> {
        Self::with_source(Source::Exact(x), base)
    }

    fn with_source(source: Source, base: u32) -> Result<Self, DigitError> {
        if !(2..=36).contains(&base) {
            return Err(DigitError::InvalidBase(base));
        }
        Ok(Self {
            source,
            base,
            cursor: 0,
            budget: RefineBudget::default(),
        })
    }

    pub fn with_budget(mut self, budget: RefineBudget) -> Self {
        self.budget = budget;
        self
    }

    /// Same source, another base, cursor reset.
    pub fn rebased(&self, base: u32) -> Result<Self, DigitError> {
        let mut s = Self::with_source(self.source.clone(), base)?;
        s.budget = self.budget;
        Ok(s)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn seek(&mut self, position: u64) {
        self.cursor = position;
    }

    /// Enclosure of `x` with radius at most about `2^-prec`.
    fn ball(&self, prec: u32) -> Option<BallReal> {
        match &self.source {
            Source::Exact(b) => Some(b.clone()),
            Source::Root { h, root } => {
                let current = root.borrow().clone();
                if current.narrower_than(prec) {
                    return Some(current.re().clone());
                }
                let refined = refine_root(h, &current, prec).ok()?;
                let out = refined.re().clone();
                *root.borrow_mut() = refined;
                Some(out)
            }
        }
    }

    /// `floor(|x| * base^scale)`, once both ends of the guarded enclosure
    /// agree.
    fn scaled_floor(&self, scale: u64) -> Result<BigInt, DigitError> {
        let bits_per_digit = (self.base as f64).log2();
        let mut prec = ((scale as f64 * bits_per_digit).ceil() as u32).saturating_add(16).max(64);
        let factor = Dyadic::from_bigint(BigInt::from(self.base).pow(scale as u32));
        loop {
            if let Some(b) = self.ball(prec) {
                let guard = b.rad().mul_u64(2).to_dyadic();
                let mid = b.mid().abs();
                let lo = mid.sub(&guard).mul(&factor).floor();
                let hi = mid.add(&guard).mul(&factor).floor();
                if lo == hi {
                    return Ok(lo);
                }
                if matches!(self.source, Source::Exact(_)) {
                    return Err(DigitError::BoundaryUnresolved { position: scale, prec });
                }
            }
            if prec >= self.budget.max_prec {
                return Err(DigitError::BoundaryUnresolved { position: scale, prec });
            }
            prec = prec.saturating_mul(2).min(self.budget.max_prec);
        }
    }

    /// Integer part of `|x|` in the stream's base.
    pub fn integer_part(&self) -> Result<String, DigitError> {
        let n = self.scaled_floor(0)?;
        Ok(render(&n, self.base, 1))
    }

    /// `n` fractional digits starting after `offset` digits, without
    /// moving the cursor.
    pub fn digits_at(&self, offset: u64, n: usize) -> Result<String, DigitError> {
        if n == 0 {
            return Err(DigitError::NoDigits);
        }
        let total = self.scaled_floor(offset + n as u64)?;
        let window = BigInt::from(self.base).pow(n as u32);
        Ok(render(&total.mod_floor(&window), self.base, n))
    }

    /// Next `n` digits; advances the cursor.
    pub fn digits(&mut self, n: usize) -> Result<String, DigitError> {
        let out = self.digits_at(self.cursor, n)?;
        self.cursor += n as u64;
        Ok(out)
    }
}

fn render(n: &BigInt, base: u32, width: usize) -> String {
    let s: String = n
        .to_radix_be(base)
        .1
        .into_iter()
        .map(|d| DIGITS[d as usize] as char)
        .collect();
    format!("{s:0>width$}")
}

/// Fixed-width digit groups laid out row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub rows: Vec<Vec<String>>,
    pub offset: u64,
    pub base: u32,
}

impl Table {
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "offset": self.offset,
            "rows": self.rows,
        })
    }
}

/// `rows x cols` groups of `width` digits read from the stream's cursor.
pub fn random_table(stream: &mut DigitStream, rows: usize, cols: usize, width: usize) -> Result<Table, DigitError> {
    let offset = stream.cursor();
    let all = stream.digits(rows * cols * width)?;
    let cells: Vec<String> = all
        .as_bytes()
        .chunks(width)
        .map(|c| String::from_utf8_lossy(c).into_owned())
        .collect();
    Ok(Table {
        rows: cells.chunks(cols).map(<[String]>::to_vec).collect(),
        offset,
        base: stream.base(),
    })
}

/// `nbytes` bytes from the hexadecimal fractional digits, starting at
/// hex digit `offset`.
pub fn keystream(stream: &DigitStream, nbytes: usize, offset: u64) -> Result<Vec<u8>, DigitError> {
    if nbytes == 0 {
        return Ok(Vec::new());
    }
    let hex = stream.rebased(16)?.digits_at(offset, 2 * nbytes)?;
    Ok(hex
        .as_bytes()
        .chunks(2)
        .map(|p| {
            let s = std::str::from_utf8(p).expect("ascii");
            u8::from_str_radix(s, 16).expect("hex digit")
        })
        .collect())
}

/// Bytewise XOR of `message` with the front of `key`.
pub fn xor_cipher(key: &[u8], message: &[u8]) -> Result<Vec<u8>, DigitError> {
    if key.len() < message.len() {
        return Err(DigitError::KeyTooShort {
            key: key.len(),
            message: message.len(),
        });
    }
    Ok(message.iter().zip(key).map(|(m, k)| m ^ k).collect())
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digit value of an ASCII digit character in bases up to 36.
pub(crate) fn digit_value(c: u8) -> Option<u32> {
    (c as char).to_digit(36)
}
