use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ball::{BallComplex, BallReal, Dyadic};

/// Closed axis-parallel rectangle with exact rational corners.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

/// Share of the width given to the lower part when splitting; off the
/// dyadic midpoint so that simple roots rarely land on a cut line.
pub(crate) fn split_ratio() -> BigRational {
    BigRational::new(15.into(), 31.into())
}

/// A dyadic point strictly inside `(lo, hi)` near `lo + t (hi - lo)`.
pub(crate) fn split_point(lo: &BigRational, hi: &BigRational, t: &BigRational) -> BigRational {
    let exact = lo + (hi - lo) * t;
    let w = hi - lo;
    let bits = {
        let num_bits = w.numer().bits() as i64;
        let den_bits = w.denom().bits() as i64;
        let size = |r: &BigRational| r.abs().numer().bits() as i64 - r.denom().bits() as i64;
        let mag = size(lo).max(size(hi)).max(0);
        (den_bits - num_bits + mag + 24).max(24) as u32
    };
    let (d, _) = Dyadic::from_rational(&exact, bits);
    let p = d.to_rational();
    if &p > lo && &p < hi {
        p
    } else {
        exact
    }
}

impl Rect {
    pub fn new(re_lo: BigRational, re_hi: BigRational, im_lo: BigRational, im_hi: BigRational) -> Option<Self> {
        (re_lo < re_hi && im_lo < im_hi).then_some(Self {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        })
    }

    /// `[-r, r]^2`.
    pub fn square(r: &BigRational) -> Option<Self> {
        Self::new(-r.clone(), r.clone(), -r.clone(), r.clone())
    }

    pub fn from_ints(re_lo: i64, re_hi: i64, im_lo: i64, im_hi: i64) -> Option<Self> {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(q(re_lo), q(re_hi), q(im_lo), q(im_hi))
    }

    /// Smallest rectangle containing a complex ball. Degenerate sides are
    /// widened by `2^-200` on both sides.
    pub fn from_ball(b: &BallComplex) -> Self {
        let side = |x: &BallReal| {
            let lo = x.lower().to_rational();
            let hi = x.upper().to_rational();
            if hi > lo {
                return (lo, hi);
            }
            let d = BigRational::new(1.into(), BigInt::from(1) << 200usize);
            (&lo - &d, hi + d)
        };
        let (re_lo, re_hi) = side(&b.re);
        let (im_lo, im_hi) = side(&b.im);
        Self {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    pub fn to_ball(&self, prec: u32) -> BallComplex {
        BallComplex::new(
            BallReal::from_rational_interval(&self.re_lo, &self.re_hi, prec),
            BallReal::from_rational_interval(&self.im_lo, &self.im_hi, prec),
        )
    }

    pub fn width(&self) -> BigRational {
        &self.re_hi - &self.re_lo
    }

    pub fn height(&self) -> BigRational {
        &self.im_hi - &self.im_lo
    }

    /// Does the closed rectangle meet the real axis?
    pub fn meets_real_axis(&self) -> bool {
        !self.im_lo.is_positive() && !self.im_hi.is_negative()
    }

    pub fn contains_point(&self, re: &BigRational, im: &BigRational) -> bool {
        &self.re_lo <= re && re <= &self.re_hi && &self.im_lo <= im && im <= &self.im_hi
    }

    /// Four children meeting at the split point, ordered SW, SE, NW, NE.
    pub fn quadrants_at(&self, re: &BigRational, im: &BigRational) -> [Rect; 4] {
        let r = |a: &BigRational, b: &BigRational, c: &BigRational, d: &BigRational| Rect {
            re_lo: a.clone(),
            re_hi: b.clone(),
            im_lo: c.clone(),
            im_hi: d.clone(),
        };
        [
            r(&self.re_lo, re, &self.im_lo, im),
            r(re, &self.re_hi, &self.im_lo, im),
            r(&self.re_lo, re, im, &self.im_hi),
            r(re, &self.re_hi, im, &self.im_hi),
        ]
    }

    /// Split point for quadrisection at the fraction `t` of each side.
    pub fn split_at(&self, t: &BigRational) -> (BigRational, BigRational) {
        (
            split_point(&self.re_lo, &self.re_hi, t),
            split_point(&self.im_lo, &self.im_hi, t),
        )
    }

    pub fn quadrants(&self) -> [Rect; 4] {
        let (re, im) = self.split_at(&split_ratio());
        self.quadrants_at(&re, &im)
    }

    /// Widen every side outward by `eps`.
    pub fn inflate(&self, eps: &BigRational) -> Rect {
        Rect {
            re_lo: &self.re_lo - eps,
            re_hi: &self.re_hi + eps,
            im_lo: &self.im_lo - eps,
            im_hi: &self.im_hi + eps,
        }
    }

    /// Larger of the two side lengths.
    pub fn diameter(&self) -> BigRational {
        let (w, h) = (self.width(), self.height());
        if w > h {
            w
        } else {
            h
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.width().is_zero() || self.height().is_zero()
    }
}

fn approx(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            approx(&self.re_lo),
            approx(&self.re_hi),
            approx(&self.im_lo),
            approx(&self.im_hi)
        )
    }
}
