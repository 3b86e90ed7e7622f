//! Certified root isolation for `h(x) = 0`: real bisection with
//! monotonicity or interval-Newton uniqueness, complex argument-principle
//! subdivision, and interval-Newton refinement.

mod complex;
mod real;
mod rect;
mod winding;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ball::{hexfloat, BallComplex, BallReal};
use crate::expr::{EvalError, Expr};

pub use complex::{find_complex_roots, minimal_modulus_root, ComplexSearch, MinimalModulus};
pub use real::isolate_real_roots;
pub use rect::Rect;
pub use winding::winding_number;

/// How uniqueness of the root inside a box was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UniquenessProof {
    SignChangeMonotone,
    NewtonContraction,
    WindingOne,
}

impl UniquenessProof {
    pub fn name(self) -> &'static str {
        match self {
            UniquenessProof::SignChangeMonotone => "SignChangeMonotone",
            UniquenessProof::NewtonContraction => "NewtonContraction",
            UniquenessProof::WindingOne => "WindingOne",
        }
    }
}

/// Search budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub real_depth: u32,
    pub complex_depth: u32,
    pub start_prec: u32,
    pub max_prec: u32,
    pub perturb_retries: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            real_depth: 40,
            complex_depth: 20,
            start_prec: 64,
            max_prec: 4096,
            perturb_retries: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("undecided on {region} at {prec} bits")]
    Undecided { region: String, prec: u32 },
    #[error("boundary of {rect} passes too close to a zero")]
    BoundaryZero { rect: String },
    #[error("function is not verified holomorphic on {rect}: {source}")]
    NotHolomorphic { rect: String, source: EvalError },
    #[error("no root with modulus at most {0}")]
    NoRootWithin(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A box containing exactly one zero of the equation function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    enclosure: BallComplex,
    pub proof: UniquenessProof,
    pub prec_used: u32,
    /// Real roots carry an exactly zero imaginary part.
    pub real: bool,
    /// Branch of multivalued powers used when locating the root.
    pub branch: &'static str,
}

impl RootEnclosure {
    pub fn real_root(b: BallReal, proof: UniquenessProof, prec_used: u32) -> Self {
        let p = b.prec();
        Self {
            enclosure: BallComplex::new(b, BallReal::zero(p)),
            proof,
            prec_used,
            real: true,
            branch: "principal",
        }
    }

    pub fn complex_root(b: BallComplex, proof: UniquenessProof, prec_used: u32) -> Self {
        Self {
            enclosure: b,
            proof,
            prec_used,
            real: false,
            branch: "principal",
        }
    }

    /// A box already known to hold exactly one root by the argument principle.
    pub fn winding_one(b: BallComplex, prec_used: u32) -> Self {
        Self::complex_root(b, UniquenessProof::WindingOne, prec_used)
    }

    pub fn ball(&self) -> BallComplex {
        self.enclosure.clone()
    }

    pub fn re(&self) -> &BallReal {
        &self.enclosure.re
    }

    pub fn im(&self) -> &BallReal {
        &self.enclosure.im
    }

    /// Upper bound on the larger side length, as a power of two exponent
    /// comparison: true when both sides are at most `2^-bits` wide.
    pub fn narrower_than(&self, bits: u32) -> bool {
        let limit = crate::ball::Mag::pow2(-(bits as i64));
        self.enclosure.re.width() <= limit && self.enclosure.im.width() <= limit
    }

    pub fn to_json(&self) -> Value {
        let re = &self.enclosure.re;
        let im = &self.enclosure.im;
        json!({
            "re_mid": hexfloat::to_hex(re.mid()),
            "re_rad": hexfloat::mag_to_hex(&re.rad()),
            "im_mid": hexfloat::to_hex(im.mid()),
            "im_rad": hexfloat::mag_to_hex(&im.rad()),
            "proof": self.proof.name(),
            "prec": self.prec_used,
            "branch": self.branch,
            "re_decimal": re.to_decimal(decimal_digits(re)),
            "im_decimal": im.to_decimal(decimal_digits(im)),
        })
    }
}

/// Digits worth printing for a ball: about as many as its radius allows.
fn decimal_digits(b: &BallReal) -> usize {
    match b.rad().msb() {
        None => 40,
        Some(e) => ((-e).max(0) as f64 * std::f64::consts::LOG10_2) as usize + 2,
    }
}

impl fmt::Display for RootEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.enclosure.re.to_decimal(decimal_digits(&self.enclosure.re).min(60));
        if self.real {
            write!(f, "{re}")
        } else {
            let im = self.enclosure.im.to_decimal(decimal_digits(&self.enclosure.im).min(60));
            match im.strip_prefix('-') {
                Some(m) => write!(f, "{re} - {m}i"),
                None => write!(f, "{re} + {im}i"),
            }
        }
    }
}

/// JSON array of root enclosures.
pub fn roots_json(roots: &[RootEnclosure]) -> Value {
    Value::Array(roots.iter().map(RootEnclosure::to_json).collect())
}

/// Narrow an enclosure to width at most `2^-target_prec`.
pub fn refine_root(h: &Expr, enc: &RootEnclosure, target_prec: u32) -> Result<RootEnclosure, RootError> {
    if enc.narrower_than(target_prec) {
        return Ok(enc.clone());
    }
    let dh = crate::expr::differentiate(h);
    if enc.real {
        real::refine(h, &dh, enc, target_prec)
    } else {
        complex::refine(h, &dh, enc, target_prec)
    }
}

/// Replays the membership and uniqueness claims of an enclosure.
pub fn verify(h: &Expr, enc: &RootEnclosure) -> bool {
    let dh = crate::expr::differentiate(h);
    let prec = enc.prec_used.max(64);
    let contains_zero = if enc.real {
        crate::expr::eval_real(h, enc.re(), prec).is_ok_and(|v| v.contains_zero())
    } else {
        crate::expr::eval(h, &enc.ball(), prec).is_ok_and(|v| v.contains_zero())
    };
    if !contains_zero {
        return false;
    }
    match enc.proof {
        UniquenessProof::SignChangeMonotone => enc.real && real::sign_change_monotone(h, &dh, enc.re(), prec),
        UniquenessProof::NewtonContraction => {
            if enc.real {
                real::newton_contracts(h, &dh, enc.re(), prec)
            } else {
                complex::newton_contracts(h, &dh, &enc.ball(), prec)
            }
        }
        UniquenessProof::WindingOne => {
            let rect = Rect::from_ball(&enc.ball());
            matches!(winding_number(h, &rect, prec), Ok(1))
        }
    }
}
