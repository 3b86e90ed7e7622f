//! Hexadecimal floating-point text for dyadic values, e.g. `-0x1.8p+1`.

use num_bigint::BigInt;
use num_traits::{Num, One, Zero};

use super::{Dyadic, Mag};

pub fn to_hex(d: &Dyadic) -> String {
    if d.is_zero() {
        return "0x0p+0".to_string();
    }
    let sign = if d.is_negative() { "-" } else { "" };
    let man = d.mantissa().magnitude().clone();
    let bits = man.bits();
    let frac_bits = bits - 1;
    let exp = d.exponent() + frac_bits as i64;
    let frac = &man - (num_bigint::BigUint::one() << frac_bits as usize);
    let frac_str = if frac_bits == 0 {
        String::new()
    } else {
        let pad = (4 - frac_bits % 4) % 4;
        let width = ((frac_bits + pad) / 4) as usize;
        let s = format!("{:0>width$}", (frac << pad as usize).to_str_radix(16), width = width);
        let s = s.trim_end_matches('0');
        if s.is_empty() {
            String::new()
        } else {
            format!(".{s}")
        }
    };
    let esign = if exp >= 0 { "+" } else { "-" };
    format!("{sign}0x1{frac_str}p{esign}{}", exp.abs())
}

pub fn mag_to_hex(m: &Mag) -> String {
    to_hex(&m.to_dyadic())
}

/// Parse the output of [`to_hex`] (and the general `0xH.HHp±E` form).
pub fn from_hex(s: &str) -> Option<Dyadic> {
    let s = s.trim();
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X"))?;
    let (body, exp_str) = rest.split_once(['p', 'P'])?;
    let exp: i64 = exp_str.parse().ok()?;
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let man = if digits.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str_radix(&digits, 16).ok()?
    };
    let man = if neg { -man } else { man };
    Some(Dyadic::new(man, exp - 4 * frac_part.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_strings() {
        assert_eq!(to_hex(&Dyadic::from_i64(3)), "0x1.8p+1");
        assert_eq!(to_hex(&Dyadic::from_i64(1)), "0x1p+0");
        assert_eq!(to_hex(&Dyadic::pow2(-3).neg()), "-0x1p-3");
        assert_eq!(to_hex(&Dyadic::zero()), "0x0p+0");
        assert_eq!(from_hex("0x1.8p+1"), Some(Dyadic::from_i64(3)));
        assert_eq!(from_hex("0x3p+0"), Some(Dyadic::from_i64(3)));
        assert_eq!(from_hex("nope"), None);
    }

    proptest! {
        #[test]
        fn hex_roundtrip(m in any::<i64>(), e in -2000i64..2000) {
            let d = Dyadic::new(BigInt::from(m), e);
            prop_assert_eq!(from_hex(&to_hex(&d)), Some(d));
        }
    }
}
