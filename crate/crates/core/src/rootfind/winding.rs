//! Winding number of `h` around a rectangle boundary.
//!
//! Each edge is cut into segments until the image of every segment lies
//! in an open half-plane bounded by an axis. Inside such a half-plane the
//! argument changes by less than `pi`, so the principal difference of the
//! endpoint arguments is the exact change along the segment.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Rect, RootError};
use crate::ball::{BallComplex, BallReal};
use crate::expr::{eval, Expr};

/// Segments shorter than `2^-SEGMENT_BITS` of their edge count as touching a zero.
const SEGMENT_BITS: usize = 30;
const MAX_EVALS: usize = 100_000;

struct Edge {
    a: (BigRational, BigRational),
    b: (BigRational, BigRational),
}

impl Edge {
    fn at(&self, t: &BigRational) -> (BigRational, BigRational) {
        (
            &self.a.0 + (&self.b.0 - &self.a.0) * t,
            &self.a.1 + (&self.b.1 - &self.a.1) * t,
        )
    }

    fn segment(&self, t0: &BigRational, t1: &BigRational, prec: u32) -> BallComplex {
        let (p, q) = (self.at(t0), self.at(t1));
        let span = |u: &BigRational, v: &BigRational| {
            if u <= v {
                BallReal::from_rational_interval(u, v, prec)
            } else {
                BallReal::from_rational_interval(v, u, prec)
            }
        };
        BallComplex::new(span(&p.0, &q.0), span(&p.1, &q.1))
    }
}

fn in_half_plane(v: &BallComplex) -> bool {
    v.re.excludes_zero() || v.im.excludes_zero()
}

/// Argument of the midpoint, rescaled so that tiny or huge values survive
/// conversion to `f64`.
fn arg(v: &BallComplex) -> f64 {
    let (re, im) = (v.re.mid(), v.im.mid());
    let top = re.msb().into_iter().chain(im.msb()).max().unwrap_or(0);
    let re = re.mul_2exp(-top).to_f64();
    let im = im.mul_2exp(-top).to_f64();
    im.atan2(re)
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

struct Tracker<'a> {
    h: &'a Expr,
    prec: u32,
    evals: usize,
    rect: &'a Rect,
}

impl Tracker<'_> {
    fn eval(&mut self, z: &BallComplex) -> Option<BallComplex> {
        self.evals += 1;
        eval(self.h, z, self.prec).ok()
    }

    fn boundary_zero(&self) -> RootError {
        RootError::BoundaryZero {
            rect: self.rect.to_string(),
        }
    }

    fn point(&mut self, edge: &Edge, t: &BigRational) -> Option<BallComplex> {
        let (x, y) = edge.at(t);
        let v = self.eval(&BallComplex::from_rationals(&x, &y, self.prec))?;
        in_half_plane(&v).then_some(v)
    }

    /// Total argument change along one edge.
    fn edge(&mut self, edge: &Edge) -> Result<f64, RootError> {
        let min_len = BigRational::new(BigInt::one(), BigInt::one() << SEGMENT_BITS);
        let half = BigRational::new(1.into(), 2.into());
        let mut total = 0.0;
        let mut stack = vec![(BigRational::zero(), BigRational::one())];
        while let Some((t0, t1)) = stack.pop() {
            if self.evals > MAX_EVALS {
                return Err(self.boundary_zero());
            }
            let image = self.eval(&edge.segment(&t0, &t1, self.prec));
            if image.is_some_and(|v| in_half_plane(&v)) {
                let p0 = self.point(edge, &t0);
                let p1 = self.point(edge, &t1);
                if let (Some(p0), Some(p1)) = (p0, p1) {
                    total += wrap(arg(&p1) - arg(&p0));
                    continue;
                }
            }
            if &t1 - &t0 < min_len {
                return Err(self.boundary_zero());
            }
            let m = (&t0 + &t1) * &half;
            stack.push((m.clone(), t1));
            stack.push((t0, m));
        }
        Ok(total)
    }
}

/// Number of zeros of `h` inside `rect`, counted with multiplicity.
///
/// Fails with `NotHolomorphic` when `h` cannot be evaluated on the closed
/// rectangle, and with `BoundaryZero` when a zero sits on or very near the
/// boundary.
pub fn winding_number(h: &Expr, rect: &Rect, prec: u32) -> Result<i64, RootError> {
    if rect.is_degenerate() {
        return Err(RootError::InvalidRegion(format!("degenerate rectangle {rect}")));
    }
    if let Err(source) = eval(h, &rect.to_ball(prec), prec) {
        return Err(RootError::NotHolomorphic {
            rect: rect.to_string(),
            source,
        });
    }
    let c = [
        (rect.re_lo.clone(), rect.im_lo.clone()),
        (rect.re_hi.clone(), rect.im_lo.clone()),
        (rect.re_hi.clone(), rect.im_hi.clone()),
        (rect.re_lo.clone(), rect.im_hi.clone()),
    ];
    let mut tracker = Tracker {
        h,
        prec,
        evals: 0,
        rect,
    };
    let mut total = 0.0;
    for i in 0..4 {
        let edge = Edge {
            a: c[i].clone(),
            b: c[(i + 1) % 4].clone(),
        };
        total += tracker.edge(&edge)?;
    }
    let turns = total / (2.0 * PI);
    let n = turns.round();
    if (turns - n).abs() > 0.25 {
        return Err(RootError::Undecided {
            region: rect.to_string(),
            prec,
        });
    }
    Ok(n as i64)
}
