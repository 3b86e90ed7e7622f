//! Exact rational bisection for the root of `e^x + x - 12` on `[2, 3]`,
//! independent of the ball arithmetic. `e^x` is bracketed by Taylor
//! partial sums of `e^(x/16)` with a geometric tail bound, then squared
//! four times.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn floor_bits(r: &BigRational, bits: usize) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((r * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn ceil_bits(r: &BigRational, bits: usize) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((r * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// `lo <= e^y <= hi` for `0 <= y <= 1/4`. Terms are rounded down for the
/// lower sum and up for the upper sum; the omitted tail is at most twice
/// the first omitted term.
fn exp_small(y: &BigRational, terms: u32, bits: usize) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
    let (mut t_lo, mut t_hi) = (BigRational::one(), BigRational::one());
    for k in 0..terms {
        lo += &t_lo;
        hi += &t_hi;
        let d = q(k as i64 + 1);
        t_lo = floor_bits(&(t_lo * y / &d), bits);
        t_hi = ceil_bits(&(t_hi * y / &d), bits);
    }
    (lo, hi + t_hi * q(2))
}

/// Bounds on `e^x` for `0 <= x <= 4`, carried at `bits` fractional bits.
pub fn exp_bounds(x: &BigRational, bits: usize) -> (BigRational, BigRational) {
    assert!(!x.is_negative() && *x <= q(4));
    let y = x / q(16);
    let terms = (bits as u32) / 2 + 20;
    let (mut lo, mut hi) = exp_small(&y, terms, bits + 16);
    for _ in 0..4 {
        lo = floor_bits(&(&lo * &lo), bits + 16);
        hi = ceil_bits(&(&hi * &hi), bits + 16);
    }
    (lo, hi)
}

/// Sign of `e^x + x - 12`, or `None` when the bounds straddle zero.
fn sign(x: &BigRational, bits: usize) -> Option<i32> {
    let (lo, hi) = exp_bounds(x, bits);
    let c = x - q(12);
    if (&lo + &c).is_positive() {
        Some(1)
    } else if (&hi + &c).is_negative() {
        Some(-1)
    } else {
        None
    }
}

/// An interval of width `2^-bits` containing the root.
pub fn exp_root(bits: usize) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = (q(2), q(3));
    let two = q(2);
    for _ in 0..bits {
        let mid = (&lo + &hi) / &two;
        match sign(&mid, bits + 32) {
            Some(1) => hi = mid,
            Some(_) => lo = mid,
            None => panic!("oracle precision too low"),
        }
    }
    (lo, hi)
}

/// The first `n` fractional digits in `base` shared by every point of
/// `[lo, hi]`.
pub fn shared_digits(lo: &BigRational, hi: &BigRational, base: u32, n: usize) -> Option<String> {
    let scale = BigRational::from_integer(BigInt::from(base).pow(n as u32));
    let a = (lo * &scale).floor().to_integer();
    let b = (hi * &scale).floor().to_integer();
    if a != b {
        return None;
    }
    let frac = a.mod_floor(&BigInt::from(base).pow(n as u32));
    let s = frac.to_str_radix(base);
    Some(format!("{s:0>n$}"))
}

/// First `n` fractional digits of the root in `base`.
pub fn exp_root_digits(base: u32, n: usize) -> String {
    let bits = ((n as f64) * (base as f64).log2()).ceil() as usize + 24;
    let (lo, hi) = exp_root(bits);
    shared_digits(&lo, &hi, base, n).expect("digit boundary inside the oracle interval")
}
