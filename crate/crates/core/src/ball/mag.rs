//! Low-precision nonnegative magnitudes used as ball radii.
//!
//! A [`Mag`] is `man * 2^exp` with a 30-bit mantissa. Every operation rounds
//! its result up unless the name says `down`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use super::Dyadic;

const MAG_BITS: u32 = 30;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bitlen(v: u128) -> u32 {
    128 - v.leading_zeros()
}

impl Mag {
    pub const fn zero() -> Self {
        Self { man: 0, exp: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Self { man: 1, exp: e }
    }

    pub fn from_u64(v: u64) -> Self {
        Self::normalize_up(v as u128, 0)
    }

    fn normalize_up(man: u128, exp: i64) -> Self {
        if man == 0 {
            return Self::zero();
        }
        let bits = bitlen(man);
        if bits <= MAG_BITS {
            return Self {
                man: man as u64,
                exp,
            };
        }
        let shift = bits - MAG_BITS;
        let mask = (1u128 << shift) - 1;
        let mut m = man >> shift;
        if man & mask != 0 {
            m += 1;
        }
        let mut e = exp + shift as i64;
        if bitlen(m) > MAG_BITS {
            m >>= 1;
            e += 1;
        }
        Self { man: m as u64, exp: e }
    }

    fn normalize_down(man: u128, exp: i64) -> Self {
        if man == 0 {
            return Self::zero();
        }
        let bits = bitlen(man);
        if bits <= MAG_BITS {
            return Self {
                man: man as u64,
                exp,
            };
        }
        let shift = bits - MAG_BITS;
        Self {
            man: (man >> shift) as u64,
            exp: exp + shift as i64,
        }
    }

    fn from_bigint_scaled(v: &BigInt, exp: i64, up: bool) -> Self {
        let a = v.abs();
        let bits = a.bits();
        if bits <= 64 {
            let m: u64 = a.try_into().expect("fits");
            return if up {
                Self::normalize_up(m as u128, exp)
            } else {
                Self::normalize_down(m as u128, exp)
            };
        }
        let shift = bits - 64;
        let top: BigInt = &a >> shift as usize;
        let inexact = (&top << shift as usize) != a;
        let m: u64 = top.try_into().expect("fits");
        let e = exp + shift as i64;
        if up {
            Self::normalize_up(m as u128 + inexact as u128, e)
        } else {
            Self::normalize_down(m as u128, e)
        }
    }

    /// Upper bound on `|d|`.
    pub fn from_dyadic_up(d: &Dyadic) -> Self {
        Self::from_bigint_scaled(d.mantissa(), d.exponent(), true)
    }

    /// Lower bound on `|d|`.
    pub fn from_dyadic_down(d: &Dyadic) -> Self {
        Self::from_bigint_scaled(d.mantissa(), d.exponent(), false)
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn mantissa(&self) -> u64 {
        self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// `floor(log2 self)`, `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.man == 0 {
            None
        } else {
            Some(self.exp + bitlen(self.man as u128) as i64 - 1)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        if diff > 60 {
            // lo is below the last mantissa bit of hi; bump hi by one unit
            return Self::normalize_up(hi.man as u128 * 4 + 1, hi.exp - 2);
        }
        let m = ((hi.man as u128) << diff) + lo.man as u128;
        Self::normalize_up(m, lo.exp)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::normalize_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self {
            man: self.man,
            exp: self.exp + k,
        }
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        self.mul(&Self::from_u64(k))
    }

    /// Upper bound on `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let num = (self.man as u128) << 64;
        let q = num / other.man as u128;
        let inexact = !num.is_multiple_of(other.man as u128);
        Self::normalize_up(q + inexact as u128, self.exp - other.exp - 64)
    }

    /// Lower bound on `self / other`.
    pub fn div_down(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "Mag division by zero");
        let num = (self.man as u128) << 64;
        Self::normalize_down(num / other.man as u128, self.exp - other.exp - 64)
    }

    fn sqrt_impl(&self, up: bool) -> Self {
        if self.is_zero() {
            return *self;
        }
        let mut m = (self.man as u128) << 64;
        let mut e = self.exp - 64;
        if e.rem_euclid(2) != 0 {
            m <<= 1;
            e -= 1;
        }
        let mut r = (m as f64).sqrt() as u128;
        while r * r > m {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= m {
            r += 1;
        }
        if up && r * r != m {
            r += 1;
        }
        if up {
            Self::normalize_up(r, e / 2)
        } else {
            Self::normalize_down(r, e / 2)
        }
    }

    pub fn sqrt(&self) -> Self {
        self.sqrt_impl(true)
    }

    pub fn sqrt_down(&self) -> Self {
        self.sqrt_impl(false)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Approximate value, for heuristics only.
    pub fn to_f64(&self) -> f64 {
        let e = self.exp.clamp(-2000, 2000) as i32;
        self.man as f64 * 2f64.powi(e)
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ma, mb) = (self.msb().unwrap(), other.msb().unwrap());
        if ma != mb {
            return ma.cmp(&mb);
        }
        let e = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - e);
        let b = (other.man as u128) << (other.exp - e);
        a.cmp(&b)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_directions() {
        let x = Dyadic::new(BigInt::from((1u64 << 40) + 1), 0);
        let up = Mag::from_dyadic_up(&x).to_dyadic();
        let down = Mag::from_dyadic_down(&x).to_dyadic();
        assert!(down <= x && x <= up);
        assert!(down < up);
    }

    #[test]
    fn arithmetic_is_upper_bound() {
        let a = Mag::from_u64(1_000_000_007);
        let b = Mag::from_u64(998_244_353);
        let exact = Dyadic::from_i64(1_000_000_007).mul(&Dyadic::from_i64(998_244_353));
        assert!(a.mul(&b).to_dyadic() >= exact);
        let sum = Dyadic::from_i64(1_000_000_007 + 998_244_353);
        assert!(a.add(&b).to_dyadic() >= sum);
        let q = a.div(&b);
        assert!(q.to_dyadic().mul(&Dyadic::from_i64(998_244_353)) >= Dyadic::from_i64(1_000_000_007));
        let qd = a.div_down(&b);
        assert!(qd.to_dyadic().mul(&Dyadic::from_i64(998_244_353)) <= Dyadic::from_i64(1_000_000_007));
    }

    #[test]
    fn add_far_apart() {
        let a = Mag::pow2(100);
        let b = Mag::pow2(-100);
        assert!(a.add(&b) > a);
    }

    #[test]
    fn sqrt_bounds() {
        let two = Mag::from_u64(2);
        let up = two.sqrt();
        let down = two.sqrt_down();
        assert!(up.mul(&up) >= two);
        assert!(down.to_dyadic().mul(&down.to_dyadic()) <= Dyadic::from_i64(2));
    }
}
