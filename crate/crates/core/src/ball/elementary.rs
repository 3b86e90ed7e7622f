//! Real elementary functions on balls.
//!
//! Each kernel evaluates a power series in fixed point at an exact dyadic
//! argument and returns a ball whose radius counts every truncation unit
//! plus the series tail. Ball arguments are handled either by
//! midpoint + Lipschitz propagation or, for monotone functions, by
//! evaluating both endpoints.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use super::{BallError, BallReal, Dyadic, Mag};

const GUARD: u32 = 24;

/// `floor(d * 2^w)`.
fn to_fixed(d: &Dyadic, w: u32) -> BigInt {
    let shift = d.exponent() + w as i64;
    if shift >= 0 {
        d.mantissa() << shift as usize
    } else {
        d.mantissa() >> (-shift) as usize
    }
}

fn fixed_ball(v: BigInt, w: u32, err_units: u64, prec: u32) -> BallReal {
    BallReal::new(
        Dyadic::new(v, -(w as i64)),
        Mag::from_u64(err_units).mul_2exp(-(w as i64)),
        prec,
    )
}

fn bits_of(n: u64) -> u32 {
    64 - n.leading_zeros()
}

// ---------------------------------------------------------------- constants

/// `sum_k (-1)^k / ((2k+1) n^(2k+1))` in fixed point; returns value and error units.
fn atan_inv_fixed(n: u64, w: u32, alternating: bool) -> (BigInt, u64) {
    let n2 = BigInt::from(n * n);
    let mut p: BigInt = (BigInt::one() << w as usize) / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        p /= &n2;
        k += 1;
    }
    // per-term error <= 3 units; tail below 2 units
    (sum, 3 * k + 4)
}

/// Enclosure of pi (Machin's formula).
pub fn pi(prec: u32) -> BallReal {
    let prec = prec.max(2);
    let w = prec + GUARD;
    let (a, ea) = atan_inv_fixed(5, w, true);
    let (b, eb) = atan_inv_fixed(239, w, true);
    let v = a * 16 - b * 4;
    fixed_ball(v, w, 16 * ea + 4 * eb, prec)
}

/// Enclosure of ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> BallReal {
    let prec = prec.max(2);
    let w = prec + GUARD;
    let (a, ea) = atan_inv_fixed(3, w, false);
    fixed_ball(a * 2, w, 2 * ea, prec)
}

/// Enclosure of e.
pub fn e(prec: u32) -> BallReal {
    exp(&BallReal::one(prec.max(2)))
}

// ---------------------------------------------------------------- exp

/// exp of an exact argument with `|m| <= 0.75`.
fn exp_small(m: &Dyadic, wp: u32) -> BallReal {
    if m.is_zero() {
        return BallReal::one(wp);
    }
    // r = m / 2^s, then square s times
    let s = (wp.sqrt() / 2).max(2);
    let w = wp + s + 16;
    let t = to_fixed(&m.mul_2exp(-(s as i64)), w);
    let one = BigInt::one() << w as usize;
    let mut sum = one.clone();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = (&term * &t) >> w as usize;
        term /= BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    let mut y = fixed_ball(sum, w, 2 * k + 8, w);
    for _ in 0..s {
        y = y.sqr();
    }
    y
}

fn exp_exact(m: &Dyadic, wp: u32) -> Result<BallReal, BallError> {
    if m.is_zero() {
        return Ok(BallReal::one(wp));
    }
    let msb = m.msb().unwrap();
    if msb > 48 {
        return Err(BallError::DomainViolation { func: "exp" });
    }
    if msb < -1 {
        return Ok(exp_small(m, wp));
    }
    // m = k ln2 + r
    let k = (m.to_f64() / std::f64::consts::LN_2).round() as i64;
    let l2 = ln2(wp + bits_of(k.unsigned_abs()) + 8);
    let r = BallReal::exact(m.clone(), wp + 64).sub(&l2.mul_i64(k));
    let er = exp_small(r.mid(), wp);
    // |exp(r) - exp(r.mid)| <= exp(r.mid) * 2 rad for rad <= 1/4
    let er = er.add_error(er.abs_upper().mul(&r.rad()).mul_2exp(1));
    Ok(er.mul_2exp(k))
}

pub fn exp(x: &BallReal) -> BallReal {
    try_exp(x).unwrap_or_else(|_| panic!("exp overflow: {x:?}"))
}

/// exp, reporting arguments too large to represent as `DomainViolation`.
pub fn try_exp(x: &BallReal) -> Result<BallReal, BallError> {
    let prec = x.prec();
    let wp = prec + GUARD;
    if x.is_exact() {
        return Ok(exp_exact(x.mid(), wp)?.with_prec(prec));
    }
    if x.rad() <= Mag::pow2(-4) {
        let v = exp_exact(x.mid(), wp)?;
        let err = v.abs_upper().mul(&x.rad()).mul_2exp(1);
        return Ok(v.add_error(err).with_prec(prec));
    }
    let lo = exp_exact(&x.lower(), wp)?;
    let hi = exp_exact(&x.upper(), wp)?;
    Ok(BallReal::from_interval(&lo.lower(), &hi.upper(), prec))
}

// ---------------------------------------------------------------- log

/// `atanh(z)` for exact `|z| <= 1/4`.
fn atanh_small(z: &Dyadic, wp: u32) -> BallReal {
    let w = wp + 16;
    let t = to_fixed(z, w);
    let t2 = (&t * &t) >> w as usize;
    let mut p = t;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        p = (&p * &t2) >> w as usize;
        k += 1;
    }
    fixed_ball(sum, w, 4 * k + 6, wp)
}

fn ln_exact(m: &Dyadic, wp: u32) -> BallReal {
    debug_assert!(m.is_positive());
    if *m == Dyadic::one() {
        return BallReal::zero(wp);
    }
    // m = u 2^e with u in (2/3, 4/3]
    let mut e = m.msb().unwrap();
    let mut u = m.mul_2exp(-e);
    let four_thirds = BallReal::from_i64(4, 64).div_i64(3);
    if u > four_thirds.upper() {
        u = u.mul_2exp(-1);
        e += 1;
    }
    let reductions = if wp > 192 { wp.sqrt() / 3 } else { 0 };
    let ww = wp + reductions + 16;
    let mut ub = BallReal::exact(u, ww);
    for _ in 0..reductions {
        ub = ub.sqrt().expect("positive");
    }
    let one = BallReal::one(ww);
    let z = ub.sub(&one).div(&ub.add(&one)).expect("positive denominator");
    let a = atanh_small(z.mid(), ww);
    // atanh' <= 16/15 on |z| <= 1/4
    let a = a.add_error(z.rad().mul_2exp(1));
    let lnu = a.mul_2exp(reductions as i64 + 1);
    if e == 0 {
        lnu
    } else {
        let l2 = ln2(ww + 64);
        lnu.add(&l2.mul_i64(e))
    }
}

pub fn ln(x: &BallReal) -> Result<BallReal, BallError> {
    if !x.is_positive() {
        return Err(BallError::DomainViolation { func: "ln" });
    }
    let prec = x.prec();
    let wp = prec + GUARD;
    if x.is_exact() {
        return Ok(ln_exact(x.mid(), wp).with_prec(prec));
    }
    let lo = x.lower();
    if x.rad().mul_2exp(4) <= Mag::from_dyadic_down(&lo) {
        let v = ln_exact(x.mid(), wp);
        let err = x.rad().div(&Mag::from_dyadic_down(&lo));
        return Ok(v.add_error(err).with_prec(prec));
    }
    let a = ln_exact(&lo, wp);
    let b = ln_exact(&x.upper(), wp);
    Ok(BallReal::from_interval(&a.lower(), &b.upper(), prec))
}

// ---------------------------------------------------------------- trig

/// Taylor sin and cos of exact `|r| <= 0.8`.
fn sin_cos_small(r: &Dyadic, wp: u32) -> (BallReal, BallReal) {
    if r.is_zero() {
        return (BallReal::zero(wp), BallReal::one(wp));
    }
    let w = wp + 16;
    let t = to_fixed(r, w);
    let t2 = (&t * &t) >> w as usize;
    // sin
    let mut term = t.clone();
    let mut s = t;
    let mut k: u64 = 1;
    loop {
        term = (&term * &t2) >> w as usize;
        term /= BigInt::from((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            s -= &term;
        } else {
            s += &term;
        }
        k += 1;
    }
    let es = 3 * k + 6;
    let one = BigInt::one() << w as usize;
    let mut term = one.clone();
    let mut c = one;
    let mut j: u64 = 1;
    loop {
        term = (&term * &t2) >> w as usize;
        term /= BigInt::from((2 * j - 1) * (2 * j));
        if term.is_zero() {
            break;
        }
        if j % 2 == 1 {
            c -= &term;
        } else {
            c += &term;
        }
        j += 1;
    }
    let ec = 3 * j + 6;
    (fixed_ball(s, w, es, wp), fixed_ball(c, w, ec, wp))
}

fn sin_cos_exact(m: &Dyadic, wp: u32) -> Result<(BallReal, BallReal), BallError> {
    let msb = m.msb().unwrap_or(-1000);
    if msb < -1 {
        return Ok(sin_cos_small(m, wp));
    }
    if msb > 1 << 20 {
        return Err(BallError::DomainViolation { func: "sin" });
    }
    let pw = (2 * wp).max(wp + msb.max(0) as u32 + 32);
    let half_pi = pi(pw).mul_2exp(-1);
    let mb = BallReal::exact(m.clone(), pw + 64);
    let q = mb.div(&half_pi).expect("pi nonzero");
    let k = q.mid().round_to_integer();
    let r = mb.sub(&half_pi.mul(&BallReal::from_bigint(&k, pw)));
    let (s, c) = sin_cos_small(r.mid(), wp);
    let (s, c) = (s.add_error(r.rad()), c.add_error(r.rad()));
    let quadrant = (&k % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4);
    Ok(match quadrant.to_u8().unwrap() {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    })
}

pub fn sin_cos(x: &BallReal) -> Result<(BallReal, BallReal), BallError> {
    let prec = x.prec();
    if x.rad() >= Mag::from_u64(2) {
        let unit = BallReal::new(Dyadic::zero(), Mag::from_u64(1), prec);
        return Ok((unit.clone(), unit));
    }
    let (s, c) = sin_cos_exact(x.mid(), prec + GUARD)?;
    // both are 1-Lipschitz
    Ok((
        s.add_error(x.rad()).with_prec(prec),
        c.add_error(x.rad()).with_prec(prec),
    ))
}

pub fn sin(x: &BallReal) -> Result<BallReal, BallError> {
    Ok(sin_cos(x)?.0)
}

pub fn cos(x: &BallReal) -> Result<BallReal, BallError> {
    Ok(sin_cos(x)?.1)
}

pub fn tan(x: &BallReal) -> Result<BallReal, BallError> {
    let (s, c) = sin_cos(&x.with_prec(x.prec() + 8))?;
    Ok(s.div(&c)?.with_prec(x.prec()))
}

pub fn cot(x: &BallReal) -> Result<BallReal, BallError> {
    let (s, c) = sin_cos(&x.with_prec(x.prec() + 8))?;
    Ok(c.div(&s)?.with_prec(x.prec()))
}

pub fn sec(x: &BallReal) -> Result<BallReal, BallError> {
    cos(x)?.inv()
}

pub fn csc(x: &BallReal) -> Result<BallReal, BallError> {
    sin(x)?.inv()
}

// ---------------------------------------------------------------- hyperbolic

/// Working precision that absorbs cancellation in `e^x - e^-x` near 0.
fn cancel_prec(x: &BallReal) -> u32 {
    let lost = x.mid().msb().map(|m| (-m).max(0)).unwrap_or(0) as u32;
    x.prec() + GUARD + lost.min(1 << 16)
}

fn exp_pair(x: &BallReal) -> Result<(BallReal, BallReal), BallError> {
    let xw = x.with_prec(cancel_prec(x));
    let a = try_exp(&xw)?;
    let b = a.inv()?;
    Ok((a, b))
}

pub fn sinh(x: &BallReal) -> Result<BallReal, BallError> {
    let (a, b) = exp_pair(x)?;
    Ok(a.sub(&b).mul_2exp(-1).with_prec(x.prec()))
}

pub fn cosh(x: &BallReal) -> Result<BallReal, BallError> {
    let (a, b) = exp_pair(x)?;
    Ok(a.add(&b).mul_2exp(-1).with_prec(x.prec()))
}

pub fn tanh(x: &BallReal) -> Result<BallReal, BallError> {
    let (a, b) = exp_pair(x)?;
    Ok(a.sub(&b).div(&a.add(&b))?.with_prec(x.prec()))
}

pub fn coth(x: &BallReal) -> Result<BallReal, BallError> {
    let (a, b) = exp_pair(x)?;
    Ok(a.add(&b).div(&a.sub(&b))?.with_prec(x.prec()))
}

// ---------------------------------------------------------------- inverse trig

/// atan of exact `m`, `|m| <= 1`.
fn atan_unit(m: &Dyadic, wp: u32) -> BallReal {
    if m.is_zero() {
        return BallReal::zero(wp);
    }
    let j = 3 + wp.sqrt() / 4;
    let ww = wp + j + 16;
    // r <- r / (1 + sqrt(1 + r^2)) halves the angle
    let one = BallReal::one(ww);
    let mut r = BallReal::exact(m.clone(), ww);
    for _ in 0..j {
        let d = one.add(&one.add(&r.sqr()).sqrt().expect("positive"));
        r = r.div(&d).expect("positive");
    }
    let w = ww + 16;
    let t = to_fixed(r.mid(), w);
    let t2 = (&t * &t) >> w as usize;
    let mut p = t;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        p = (&p * &t2) >> w as usize;
        k += 1;
    }
    let a = fixed_ball(sum, w, 4 * k + 6, ww).add_error(r.rad());
    a.mul_2exp(j as i64)
}

fn atan_exact(m: &Dyadic, wp: u32) -> BallReal {
    if m.abs() <= Dyadic::one() {
        return atan_unit(m, wp);
    }
    // atan(m) = sign(m) pi/2 - atan(1/m); 1/m is evaluated through a ball
    let inv = BallReal::one(wp + 32)
        .div(&BallReal::exact(m.clone(), wp + 32))
        .expect("nonzero");
    let a = atan_unit(inv.mid(), wp).add_error(inv.rad());
    let hp = pi(wp + 8).mul_2exp(-1);
    if m.is_positive() {
        hp.sub(&a)
    } else {
        hp.neg().sub(&a)
    }
}

pub fn atan(x: &BallReal) -> BallReal {
    let prec = x.prec();
    atan_exact(x.mid(), prec + GUARD)
        .add_error(x.rad())
        .with_prec(prec)
}

fn asin_exact(m: &Dyadic, wp: u32) -> BallReal {
    let one = Dyadic::one();
    if m.abs() == one {
        let hp = pi(wp).mul_2exp(-1);
        return if m.is_positive() { hp } else { hp.neg() };
    }
    let mb = BallReal::exact(m.clone(), wp + 16);
    let c = BallReal::one(wp + 16)
        .sub(&mb.sqr())
        .sqrt()
        .expect("inside (-1, 1)");
    let q = mb.div(&c).expect("positive");
    atan(&q)
}

pub fn asin(x: &BallReal) -> Result<BallReal, BallError> {
    let one = Dyadic::one();
    if x.upper() > one || x.lower() < one.neg() {
        return Err(BallError::DomainViolation { func: "asin" });
    }
    let prec = x.prec();
    let wp = prec + GUARD;
    if x.is_exact() {
        return Ok(asin_exact(x.mid(), wp).with_prec(prec));
    }
    // monotone increasing
    let lo = asin_exact(&x.lower(), wp);
    let hi = asin_exact(&x.upper(), wp);
    Ok(BallReal::from_interval(&lo.lower(), &hi.upper(), prec))
}

pub fn acos(x: &BallReal) -> Result<BallReal, BallError> {
    let a = asin(&x.with_prec(x.prec() + 8))?;
    Ok(pi(x.prec() + 8).mul_2exp(-1).sub(&a).with_prec(x.prec()))
}

/// Inverse cotangent with range `(0, pi)`.
pub fn acot(x: &BallReal) -> BallReal {
    let a = atan(&x.with_prec(x.prec() + 8));
    pi(x.prec() + 8).mul_2exp(-1).sub(&a).with_prec(x.prec())
}

pub fn asec(x: &BallReal) -> Result<BallReal, BallError> {
    let inv = x.with_prec(x.prec() + 8).inv().map_err(|_| BallError::DomainViolation { func: "asec" })?;
    acos(&inv).map(|v| v.with_prec(x.prec()))
}

pub fn acsc(x: &BallReal) -> Result<BallReal, BallError> {
    let inv = x.with_prec(x.prec() + 8).inv().map_err(|_| BallError::DomainViolation { func: "acsc" })?;
    asin(&inv).map(|v| v.with_prec(x.prec()))
}

pub fn sqrt(x: &BallReal) -> Result<BallReal, BallError> {
    x.sqrt()
}

/// `x^y` for positive `x`, as `exp(y ln x)`.
pub fn pow(x: &BallReal, y: &BallReal) -> Result<BallReal, BallError> {
    let prec = x.prec().max(y.prec());
    let l = ln(&x.with_prec(prec + 16))?;
    try_exp(&l.mul(&y.with_prec(prec + 16))).map(|v| v.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(s: &str) -> BigRational {
        // decimal literal -> exact rational
        let (i, f) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{i}{f}").parse().unwrap();
        BigRational::new(digits, BigInt::from(10).pow(f.len() as u32))
    }

    fn assert_contains(b: &BallReal, decimal: &str) {
        // the decimal is a truncation, so check the ball meets [d, d + ulp]
        let lo = rat(decimal);
        let digits = decimal.split_once('.').map(|(_, f)| f.len()).unwrap_or(0);
        let ulp = BigRational::new(1.into(), BigInt::from(10).pow(digits as u32));
        let (lo, hi) = if lo < BigRational::zero() { (lo.clone() - ulp, lo) } else { (lo.clone(), lo + ulp) };
        assert!(
            b.lower().to_rational() <= hi && lo <= b.upper().to_rational(),
            "{b:?} vs {decimal}"
        );
    }

    #[test]
    fn constants() {
        assert_contains(&pi(64), "3.141592653589793238");
        assert_contains(&e(64), "2.718281828459045235");
        assert_contains(&ln2(64), "0.693147180559945309");
        assert!(pi(2).contains_rational(&rat("3.14159265358979323846")));
        for p in [16, 64, 200, 1000] {
            let b = pi(p);
            let ulp = Mag::pow2(b.mid().msb().unwrap() - p as i64 + 1);
            assert!(b.width() <= ulp.mul_u64(4), "pi width at {p}");
        }
    }

    #[test]
    fn exp_values() {
        let one = exp(&BallReal::zero(64));
        assert!(one.contains(&Dyadic::one()));
        assert!(one.is_exact());
        assert_contains(&exp(&BallReal::from_i64(1, 128)), "2.71828182845904523536028747135266249775");
        assert_contains(&exp(&BallReal::from_i64(-3, 64)), "0.049787068367863942979");
        assert_contains(&exp(&BallReal::from_i64(20, 64)), "485165195.40979027796910683");
    }

    #[test]
    fn log_values() {
        assert_contains(&ln(&BallReal::from_i64(2, 64)).unwrap(), "0.693147180559945309417");
        assert_contains(&ln(&BallReal::from_i64(10, 300)).unwrap(), "2.302585092994045684017991454684364207601");
        assert!(ln(&BallReal::from_i64(0, 64)).is_err());
        assert!(ln(&BallReal::from_i64(-1, 64)).is_err());
    }

    #[test]
    fn trig_values() {
        assert_contains(&sin(&BallReal::from_i64(2, 64)).unwrap(), "0.909297426825681695396");
        assert_contains(&cos(&BallReal::from_i64(2, 64)).unwrap(), "-0.416146836547142386997");
        assert_contains(&sin(&BallReal::from_i64(100, 64)).unwrap(), "-0.50636564110975879365");
        assert_contains(&tan(&BallReal::from_i64(1, 64)).unwrap(), "1.557407724654902230506");
        assert_contains(&atan(&BallReal::from_i64(1, 64)), "0.785398163397448309615");
        assert_contains(&atan(&BallReal::from_i64(-7, 64)), "-1.428899272190732696418");
        let half = BallReal::from_i64(1, 64).mul_2exp(-1);
        assert_contains(&asin(&half).unwrap(), "0.523598775598298873077");
        assert_contains(&acos(&half).unwrap(), "1.047197551196597746154");
        assert!(asin(&BallReal::from_i64(2, 64)).is_err());
        assert_contains(&asin(&BallReal::from_i64(1, 64)).unwrap(), "1.570796326794896619231");
    }

    #[test]
    fn hyperbolic_values() {
        let one = BallReal::from_i64(1, 64);
        assert_contains(&sinh(&one).unwrap(), "1.175201193643801456882");
        assert_contains(&cosh(&one).unwrap(), "1.543080634815243778477");
        assert_contains(&tanh(&one).unwrap(), "0.761594155955764888119");
        assert_contains(&coth(&one).unwrap(), "1.313035285499331303636");
        let tiny = BallReal::exact(Dyadic::pow2(-40), 64);
        let s = sinh(&tiny).unwrap();
        assert!(s.rad() < Mag::pow2(-90));
    }

    #[test]
    fn ball_arguments_contain_endpoints() {
        let x = BallReal::new(Dyadic::from_i64(1), Mag::pow2(-2), 64);
        let y = exp(&x);
        for v in [0.75, 1.25] {
            let exact = exp(&BallReal::exact(Dyadic::from_f64(v).unwrap(), 64));
            assert!(y.contains_ball(&exact));
        }
        let l = ln(&x).unwrap();
        assert!(l.contains_ball(&ln(&BallReal::exact(Dyadic::from_f64(0.75).unwrap(), 64)).unwrap()));
    }
}
