//! Arbitrary-precision real and complex ball arithmetic.
//!
//! Every operation returns a ball containing the exact result for all
//! points of its input balls. Midpoints are exact dyadics rounded to the
//! ball's precision; radii are 30-bit magnitudes rounded up.

mod complex;
mod dyadic;
pub mod elementary;
mod error;
mod func;
pub mod hexfloat;
mod mag;
mod nonzero;
mod real;

use serde::{Deserialize, Serialize};

pub use complex::BallComplex;
pub use dyadic::Dyadic;
pub use error::BallError;
pub use func::Func;
pub use mag::Mag;
pub use nonzero::{refine_nonzero, Enclosure, NonzeroOutcome, RefineBudget, ZeroTest};
pub use real::{dyadic_to_decimal, dyadic_to_decimal_rounded, BallReal, MIN_PREC};

/// Named constants with built-in enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constant {
    E,
    Pi,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::E => "e",
            Constant::Pi => "pi",
        }
    }
}

pub fn constant(name: Constant, prec: u32) -> BallReal {
    match name {
        Constant::E => elementary::e(prec),
        Constant::Pi => elementary::pi(prec),
    }
}

/// Wire form of a ball: hex-float strings plus precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub mid: String,
    pub rad: String,
    pub prec: u32,
}

impl From<&BallReal> for BallJson {
    fn from(b: &BallReal) -> Self {
        Self {
            mid: hexfloat::to_hex(b.mid()),
            rad: hexfloat::mag_to_hex(&b.rad()),
            prec: b.prec(),
        }
    }
}

impl BallJson {
    /// Rebuild the ball; the radius is rounded up to a 30-bit magnitude.
    pub fn to_ball(&self) -> Option<BallReal> {
        let mid = hexfloat::from_hex(&self.mid)?;
        let rad = hexfloat::from_hex(&self.rad)?;
        if rad.is_negative() {
            return None;
        }
        Some(BallReal::new(mid, Mag::from_dyadic_up(&rad), self.prec))
    }
}

impl Serialize for BallReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BallJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = BallJson::deserialize(d)?;
        j.to_ball()
            .ok_or_else(|| serde::de::Error::custom("malformed hex-float ball"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_json_roundtrip() {
        let b = BallReal::from_i64(1, 64).div_i64(3);
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"prec\":64"));
        let back: BallReal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }
}
