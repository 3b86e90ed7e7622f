//! Exact binary floating values `mantissa * 2^exp`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Mag;

/// An exact dyadic rational `man * 2^exp`.
///
/// The representation is canonical: the mantissa is odd, or the value is
/// zero with `exp == 0`. Equality on the struct is therefore equality of
/// values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Self {
            man: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1u64 << 52)) as i64, raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(sign * man), exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Number of significant mantissa bits.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |self|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // product of odd mantissas is odd
        Self {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    /// Multiply by `2^k`.
    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// Truncate to at most `prec` significant bits (rounding toward
    /// negative infinity). Returns the rounded value and an upper bound on
    /// the absolute error, which is zero when no bits were dropped.
    pub fn round(&self, prec: u32) -> (Self, Mag) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), Mag::zero());
        }
        let shift = bits - prec as u64;
        let man = &self.man >> shift as usize;
        let exp = self.exp + shift as i64;
        (Self::new(man, exp), Mag::pow2(exp))
    }

    /// Approximate quotient with `prec` significant bits and an error bound.
    pub fn div_round(&self, other: &Self, prec: u32) -> (Self, Mag) {
        assert!(!other.is_zero(), "division by exact zero");
        if self.is_zero() {
            return (Self::zero(), Mag::zero());
        }
        // choose shift so that the integer quotient has about prec + 2 bits
        let need = prec as i64 + 2 + other.man.bits() as i64 - self.man.bits() as i64;
        let shift = need.max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_rem(&other.man);
        let exp = self.exp - other.exp - shift;
        let err = if r.is_zero() {
            Mag::zero()
        } else {
            Mag::pow2(exp)
        };
        let (rounded, rerr) = Self::new(q, exp).round(prec);
        (rounded, err.add(&rerr))
    }

    /// Square root with `prec` bits; `self` must be nonnegative.
    pub fn sqrt_round(&self, prec: u32) -> (Self, Mag) {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return (Self::zero(), Mag::zero());
        }
        // want isqrt(man * 2^s) with even exponent and ~prec+2 result bits
        let mut s = (2 * (prec as i64 + 2) - self.man.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let scaled = (&self.man << s as usize).to_biguint().expect("nonnegative");
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let exp = (self.exp - s) / 2;
        let err = if exact { Mag::zero() } else { Mag::pow2(exp) };
        let (rounded, rerr) = Self::new(BigInt::from(root), exp).round(prec);
        (rounded, err.add(&rerr))
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            &self.man >> (-self.exp) as usize
        }
    }

    /// Nearest integer (ties away from whatever the shift gives).
    pub fn round_to_integer(&self) -> BigInt {
        self.add(&Self::pow2(-1)).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest `prec`-bit dyadic below (or equal to) a rational, with the error bound.
    pub fn from_rational(r: &BigRational, prec: u32) -> (Self, Mag) {
        if r.is_zero() {
            return (Self::zero(), Mag::zero());
        }
        let num = Self::from_bigint(r.numer().clone());
        let den = Self::from_bigint(r.denom().clone());
        num.div_round(&den, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.man >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes via msb first
        let ma = self.msb().unwrap();
        let mb = other.msb().unwrap();
        if ma != mb {
            let c = ma.cmp(&mb);
            return if sa > 0 { c } else { c.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::hexfloat::to_hex(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(0, 17), Dyadic::zero());
        assert_eq!(d(6, -1).exponent(), 0);
    }

    #[test]
    fn ordering_and_arith() {
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, 0) < d(-1, 1));
        assert_eq!(d(3, -1).add(&d(1, -1)), d(2, 0));
        assert_eq!(d(3, -2).mul(&d(5, 1)), d(15, -1));
    }

    #[test]
    fn division_error_bound() {
        let (q, err) = d(1, 0).div_round(&d(3, 0), 64);
        let exact = BigRational::new(1.into(), 3.into());
        let diff = (q.to_rational() - exact).abs();
        assert!(diff <= err.to_dyadic().to_rational());
        assert!(q.bits() <= 64);
    }

    #[test]
    fn sqrt_exact_and_inexact() {
        let (r, err) = d(9, 0).sqrt_round(32);
        assert_eq!(r, d(3, 0));
        assert!(err.is_zero());
        let (r, err) = d(2, 0).sqrt_round(64);
        let sq = r.mul(&r).to_f64();
        assert!((sq - 2.0).abs() < 1e-17);
        assert!(!err.is_zero());
    }

    #[test]
    fn f64_roundtrip() {
        for v in [1.5, -0.1, 1e300, 5e-324, 3.0] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
    }
}
