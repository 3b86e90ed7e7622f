use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{BallError, Dyadic, Mag};

/// Midpoint-radius enclosure `[mid - rad, mid + rad]` of a real number.
///
/// `prec` is the mantissa width (in bits) that arithmetic results are
/// rounded to; the rounding error is always folded into the radius.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallReal {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

pub const MIN_PREC: u32 = 2;

impl BallReal {
    /// Builds a ball, rounding `mid` to `prec` bits.
    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        let (mid, err) = mid.round(prec);
        Self {
            mid,
            rad: rad.add(&err),
            prec,
        }
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        Self::new(mid, Mag::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Dyadic::one(), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::exact(Dyadic::from_i64(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::exact(Dyadic::from_bigint(v.clone()), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        let (mid, err) = Dyadic::from_rational(r, prec);
        Self {
            mid,
            rad: err,
            prec,
        }
    }

    /// Smallest ball (at this precision) covering the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = lo.add(hi).mul_2exp(-1);
        let half = hi.sub(lo).mul_2exp(-1);
        Self::new(mid, Mag::from_dyadic_up(&half), prec)
    }

    pub fn from_rational_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        let a = Self::from_rational(lo, prec);
        let b = Self::from_rational(hi, prec);
        Self::from_interval(&a.lower(), &b.upper(), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.mid.clone(), self.rad, prec)
    }

    pub fn add_error(&self, err: Mag) -> Self {
        Self {
            mid: self.mid.clone(),
            rad: self.rad.add(&err),
            prec: self.prec,
        }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad.to_dyadic())
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad.to_dyadic())
    }

    /// Upper bound on the diameter.
    pub fn width(&self) -> Mag {
        self.rad.mul_2exp(1)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rad.is_zero() && self.mid.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower().is_positive() && !self.upper().is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Sign of every element, if it is uniform and nonzero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lower().to_rational() <= *x && *x <= self.upper().to_rational()
    }

    /// `other ⊆ self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// `other` lies in the interior of `self`.
    pub fn contains_ball_strictly(&self, other: &Self) -> bool {
        self.lower() < other.lower() && other.upper() < self.upper()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().min(other.upper());
        if lo > hi {
            None
        } else {
            Some(Self::from_interval(&lo, &hi, self.prec.max(other.prec)))
        }
    }

    /// Upper bound on `sup |x|`.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic_up(&self.mid).add(&self.rad)
    }

    /// Lower bound on `inf |x|` (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        let d = self.mid.abs().sub(&self.rad.to_dyadic());
        if d.is_positive() {
            Mag::from_dyadic_down(&d)
        } else {
            Mag::zero()
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::new(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::new(self.mid.sub(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let am = Mag::from_dyadic_up(&self.mid);
        let bm = Mag::from_dyadic_up(&other.mid);
        let rad = am
            .mul(&other.rad)
            .add(&bm.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::new(self.mid.mul(&other.mid), rad, prec)
    }

    pub fn sqr(&self) -> Self {
        let am = Mag::from_dyadic_up(&self.mid);
        let rad = am.mul(&self.rad).mul_2exp(1).add(&self.rad.mul(&self.rad));
        Self::new(self.mid.mul(&self.mid), rad, self.prec)
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        Self {
            mid: self.mid.mul_2exp(k),
            rad: self.rad.mul_2exp(k),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self, BallError> {
        let prec = self.prec.max(other.prec);
        let bl = other.abs_lower();
        if bl.is_zero() {
            return Err(BallError::DivisorMayBeZero);
        }
        let (q, qerr) = self.mid.div_round(&other.mid, prec);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Mag::zero()
        } else {
            let am = Mag::from_dyadic_up(&self.mid);
            let bm_up = Mag::from_dyadic_up(&other.mid);
            let bm_down = Mag::from_dyadic_down(&other.mid);
            let num = self.rad.mul(&bm_up).add(&am.mul(&other.rad));
            num.div(&bm_down).div(&bl)
        };
        Ok(Self {
            mid: q,
            rad: rad.add(&qerr),
            prec,
        })
    }

    pub fn inv(&self) -> Result<Self, BallError> {
        Self::one(self.prec).div(self)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div(&Self::from_i64(k, self.prec))
            .expect("nonzero integer divisor")
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u64) -> Self {
        let mut result = Self::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn sqrt(&self) -> Result<Self, BallError> {
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let lo = self.lower();
        if lo.is_negative() || (lo.is_zero() && !self.is_exact()) {
            return Err(BallError::DomainViolation { func: "sqrt" });
        }
        let (m, err) = self.mid.sqrt_round(self.prec);
        // |sqrt(x) - sqrt(mid)| <= rad / (sqrt(lo) + sqrt(mid))
        let prop = if self.rad.is_zero() {
            Mag::zero()
        } else {
            let denom = Mag::from_dyadic_down(&lo)
                .sqrt_down()
                .add(&Mag::from_dyadic_down(&self.mid).sqrt_down());
            self.rad.div(&denom)
        };
        Ok(Self {
            mid: m,
            rad: prop.add(&err),
            prec: self.prec,
        })
    }

    /// Hull of two balls.
    pub fn union(&self, other: &Self) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Self::from_interval(&lo, &hi, self.prec.max(other.prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Truncated decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        dyadic_to_decimal(&self.mid, digits)
    }

    /// Midpoint rounded to `digits` fractional digits.
    pub fn to_decimal_rounded(&self, digits: usize) -> String {
        dyadic_to_decimal_rounded(&self.mid, digits)
    }
}

/// Decimal expansion of a dyadic value rounded to nearest, ties away from zero.
pub fn dyadic_to_decimal_rounded(d: &Dyadic, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let half = Dyadic::new(BigInt::from(1), -1);
    let n = d.abs().mul(&Dyadic::from_bigint(scale.clone())).add(&half).floor();
    let sign = if d.is_negative() && !n.is_zero() { "-" } else { "" };
    let (int, frac) = (&n / &scale, &n % &scale);
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

/// Truncated (toward zero) decimal expansion of a dyadic value.
pub fn dyadic_to_decimal(d: &Dyadic, digits: usize) -> String {
    let neg = d.is_negative();
    let a = d.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = a.mul(&Dyadic::from_bigint(scale.clone())).floor();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {:.3e}]@{}",
            self.to_decimal(20),
            self.rad.to_f64(),
            self.prec
        )
    }
}
