use std::fmt;

use num_rational::BigRational;

use super::{elementary as el, BallError, BallReal, Dyadic, Mag};

/// Rectangular enclosure `re + i im` of a complex number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallComplex {
    pub re: BallReal,
    pub im: BallReal,
}

impl BallComplex {
    pub fn new(re: BallReal, im: BallReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BallReal) -> Self {
        let prec = re.prec();
        Self {
            re,
            im: BallReal::zero(prec),
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_real(BallReal::from_i64(v, prec))
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn i(prec: u32) -> Self {
        Self::new(BallReal::zero(prec), BallReal::one(prec))
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        Self::new(
            BallReal::from_rational(re, prec),
            BallReal::from_rational(im, prec),
        )
    }

    /// Ball covering the closed rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
    pub fn from_rect(re_lo: &Dyadic, re_hi: &Dyadic, im_lo: &Dyadic, im_hi: &Dyadic, prec: u32) -> Self {
        Self::new(
            BallReal::from_interval(re_lo, re_hi, prec),
            BallReal::from_interval(im_lo, im_hi, prec),
        )
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    /// Imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn contains_ball(&self, other: &Self) -> bool {
        self.re.contains_ball(&other.re) && self.im.contains_ball(&other.im)
    }

    pub fn contains_ball_strictly(&self, other: &Self) -> bool {
        self.re.contains_ball_strictly(&other.re) && self.im.contains_ball_strictly(&other.im)
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        Some(Self::new(
            self.re.intersect(&other.re)?,
            self.im.intersect(&other.im)?,
        ))
    }

    /// Larger of the two component diameters.
    pub fn width(&self) -> Mag {
        self.re.width().max(self.im.width())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_real() && o.is_real() {
            return Self::from_real(self.re.mul(&o.re));
        }
        if o.is_real() {
            return self.scale(&o.re);
        }
        if self.is_real() {
            return o.scale(&self.re);
        }
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, r: &BallReal) -> Self {
        Self::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        Self::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn mul_i(&self) -> Self {
        Self::new(self.im.neg(), self.re.clone())
    }

    pub fn sqr(&self) -> Self {
        if self.is_real() {
            return Self::from_real(self.re.sqr());
        }
        Self::new(
            self.re.sqr().sub(&self.im.sqr()),
            self.re.mul(&self.im).mul_2exp(1),
        )
    }

    /// Ball for `|z|^2` with a lower bound that stays positive when the
    /// box excludes the origin.
    pub fn norm_sqr(&self) -> BallReal {
        let prec = self.prec();
        let s = self.re.sqr().add(&self.im.sqr());
        let lo_re = self.re.abs_lower().to_dyadic();
        let lo_im = self.im.abs_lower().to_dyadic();
        let lo = lo_re.mul(&lo_re).add(&lo_im.mul(&lo_im));
        let lo = lo.max(s.lower());
        BallReal::from_interval(&lo, &s.upper(), prec)
    }

    pub fn div(&self, o: &Self) -> Result<Self, BallError> {
        if o.is_real() {
            return Ok(Self::new(self.re.div(&o.re)?, self.im.div(&o.re)?));
        }
        if o.contains_zero() {
            return Err(BallError::DivisorMayBeZero);
        }
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        Ok(Self::new(num.re.div(&d)?, num.im.div(&d)?))
    }

    pub fn inv(&self) -> Result<Self, BallError> {
        Self::one(self.prec()).div(self)
    }

    pub fn powi(&self, n: i64) -> Result<Self, BallError> {
        let mut result = Self::one(self.prec());
        let mut base = self.clone();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            result.inv()
        } else {
            Ok(result)
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        Self::new(self.re.union(&o.re), self.im.union(&o.im))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    // ------------------------------------------------------------ functions

    pub fn exp(&self) -> Result<Self, BallError> {
        let a = el::try_exp(&self.re)?;
        if self.is_real() {
            return Ok(Self::from_real(a));
        }
        let (s, c) = el::sin_cos(&self.im)?;
        Ok(Self::new(a.mul(&c), a.mul(&s)))
    }

    /// Argument in `(-pi, pi]`.
    pub fn arg(&self) -> Result<BallReal, BallError> {
        let prec = self.prec();
        let wp = prec + 8;
        let (x, y) = (self.re.with_prec(wp), self.im.with_prec(wp));
        let hp = el::pi(wp).mul_2exp(-1);
        let a = if x.is_positive() {
            el::atan(&y.div(&x)?)
        } else if y.is_positive() {
            hp.sub(&el::atan(&x.div(&y)?))
        } else if y.is_negative() {
            hp.neg().sub(&el::atan(&x.div(&y)?))
        } else if x.is_negative() && y.is_exact_zero() {
            el::pi(wp)
        } else if self.contains_zero() {
            return Err(BallError::DomainViolation { func: "arg" });
        } else {
            return Err(BallError::BranchCutStraddle { func: "ln" });
        };
        Ok(a.with_prec(prec))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self, BallError> {
        if self.is_real() && self.re.is_positive() {
            return Ok(Self::from_real(el::ln(&self.re)?));
        }
        if self.contains_zero() {
            return Err(BallError::DomainViolation { func: "ln" });
        }
        let arg = self.arg()?;
        let prec = self.prec();
        let m = el::ln(&self.with_prec(prec + 8).norm_sqr())?.mul_2exp(-1);
        Ok(Self::new(m.with_prec(prec), arg))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Result<Self, BallError> {
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        if self.is_real() && !self.re.lower().is_negative() {
            return Ok(Self::from_real(self.re.sqrt()?));
        }
        self.ln()?.mul_2exp(-1).exp()
    }

    /// Principal power `self^w`.
    pub fn pow(&self, w: &Self) -> Result<Self, BallError> {
        if w.is_exact() && w.is_real() {
            let m = w.re.mid();
            if m.exponent() >= 0 && m.msb().is_none_or(|b| b < 31) {
                let n: i64 = m.floor().try_into().expect("small integer");
                return self.powi(n);
            }
        }
        if self.is_real() && w.is_real() && self.re.is_positive() {
            return Ok(Self::from_real(el::pow(&self.re, &w.re)?));
        }
        let prec = self.prec().max(w.prec());
        let l = self.with_prec(prec + 16).ln().map_err(|e| match e {
            BallError::BranchCutStraddle { .. } => BallError::BranchCutStraddle { func: "pow" },
            BallError::DomainViolation { .. } => BallError::DomainViolation { func: "pow" },
            other => other,
        })?;
        Ok(l.mul(&w.with_prec(prec + 16)).exp()?.with_prec(prec))
    }

    pub fn sin(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::sin(&self.re)?));
        }
        let (s, c) = el::sin_cos(&self.re)?;
        Ok(Self::new(s.mul(&el::cosh(&self.im)?), c.mul(&el::sinh(&self.im)?)))
    }

    pub fn cos(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::cos(&self.re)?));
        }
        let (s, c) = el::sin_cos(&self.re)?;
        Ok(Self::new(
            c.mul(&el::cosh(&self.im)?),
            s.mul(&el::sinh(&self.im)?).neg(),
        ))
    }

    pub fn tan(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::tan(&self.re)?));
        }
        self.sin()?.div(&self.cos()?)
    }

    pub fn cot(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::cot(&self.re)?));
        }
        self.cos()?.div(&self.sin()?)
    }

    pub fn sec(&self) -> Result<Self, BallError> {
        self.cos()?.inv()
    }

    pub fn csc(&self) -> Result<Self, BallError> {
        self.sin()?.inv()
    }

    pub fn sinh(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::sinh(&self.re)?));
        }
        let (s, c) = el::sin_cos(&self.im)?;
        Ok(Self::new(
            el::sinh(&self.re)?.mul(&c),
            el::cosh(&self.re)?.mul(&s),
        ))
    }

    pub fn cosh(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::cosh(&self.re)?));
        }
        let (s, c) = el::sin_cos(&self.im)?;
        Ok(Self::new(
            el::cosh(&self.re)?.mul(&c),
            el::sinh(&self.re)?.mul(&s),
        ))
    }

    pub fn tanh(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::tanh(&self.re)?));
        }
        self.sinh()?.div(&self.cosh()?)
    }

    pub fn coth(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::coth(&self.re)?));
        }
        self.cosh()?.div(&self.sinh()?)
    }

    fn real_in_unit(&self) -> bool {
        let one = Dyadic::one();
        self.is_real() && self.re.upper() <= one && self.re.lower() >= one.neg()
    }

    /// Principal arcsine, `-i ln(iz + sqrt(1 - z^2))`.
    pub fn asin(&self) -> Result<Self, BallError> {
        if self.real_in_unit() {
            return Ok(Self::from_real(el::asin(&self.re)?));
        }
        let prec = self.prec();
        let z = self.with_prec(prec + 16);
        let root = Self::one(prec + 16).sub(&z.sqr()).sqrt()?;
        let l = z.mul_i().add(&root).ln()?;
        Ok(Self::new(l.im, l.re.neg()).with_prec(prec))
    }

    pub fn acos(&self) -> Result<Self, BallError> {
        if self.real_in_unit() {
            return Ok(Self::from_real(el::acos(&self.re)?));
        }
        let prec = self.prec();
        let hp = Self::from_real(el::pi(prec + 16).mul_2exp(-1));
        Ok(hp.sub(&self.with_prec(prec + 16).asin()?).with_prec(prec))
    }

    /// Principal arctangent, `(i/2) (ln(1 - iz) - ln(1 + iz))`.
    pub fn atan(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::atan(&self.re)));
        }
        let prec = self.prec();
        let z = self.with_prec(prec + 16);
        let one = Self::one(prec + 16);
        let iz = z.mul_i();
        let d = one.sub(&iz).ln()?.sub(&one.add(&iz).ln()?);
        Ok(d.mul_i().mul_2exp(-1).with_prec(prec))
    }

    pub fn acot(&self) -> Result<Self, BallError> {
        if self.is_real() {
            return Ok(Self::from_real(el::acot(&self.re)));
        }
        let prec = self.prec();
        let hp = Self::from_real(el::pi(prec + 16).mul_2exp(-1));
        Ok(hp.sub(&self.with_prec(prec + 16).atan()?).with_prec(prec))
    }

    pub fn asec(&self) -> Result<Self, BallError> {
        self.inv().map_err(|_| BallError::DomainViolation { func: "asec" })?.acos()
    }

    pub fn acsc(&self) -> Result<Self, BallError> {
        self.inv().map_err(|_| BallError::DomainViolation { func: "acsc" })?.asin()
    }
}

impl From<BallReal> for BallComplex {
    fn from(re: BallReal) -> Self {
        Self::from_real(re)
    }
}

impl fmt::Debug for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + i({:?})", self.re, self.im)
    }
}
