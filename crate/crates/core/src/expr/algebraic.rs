//! Exact algebraic coefficients: rationals, quadratic surds, and roots of
//! integer polynomials carried with an isolating box.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ball::{BallComplex, BallReal, RefineBudget};

/// Trial-division bound used when extracting square factors from a radicand.
pub const SQUARE_FACTOR_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraicError {
    #[error("radicand must be positive")]
    NonPositiveRadicand,
    #[error("polynomial must have degree >= 1 and a nonzero leading coefficient")]
    DegeneratePolynomial,
    #[error("polynomial has the rational root {0}")]
    HasRationalRoot(BigRational),
    #[error("isolating box contains {0} roots instead of exactly one")]
    NotIsolated(i64),
    #[error("could not verify the isolating box: {0}")]
    Unverified(String),
}

/// `a + b sqrt(d)` with `b != 0` and `d > 1` free of square factors below
/// [`SQUARE_FACTOR_BOUND`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

/// A root of an integer polynomial (coefficients low degree first) together
/// with a box that contains exactly that root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRoot {
    pub coeffs: Vec<BigInt>,
    pub isolating: BallComplex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraicNumber {
    Rational(BigRational),
    Surd(Surd),
    PolyRoot(PolyRoot),
}

fn small_primes_square_split(d: &BigInt) -> (BigInt, BigInt) {
    // d = s^2 * k, trial division only
    let mut k = d.clone();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p <= SQUARE_FACTOR_BOUND {
        let pb = BigInt::from(p);
        if &pb * &pb > k {
            break;
        }
        let p2 = &pb * &pb;
        while (&k % &p2).is_zero() {
            k /= &p2;
            s *= &pb;
        }
        while (&k % &pb).is_zero() {
            k /= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // the loop above strips single factors too; recompute the squarefree part
    let s2 = &s * &s;
    (s, d / s2)
}

impl AlgebraicNumber {
    pub fn rational(r: BigRational) -> Self {
        AlgebraicNumber::Rational(r)
    }

    pub fn integer(v: i64) -> Self {
        AlgebraicNumber::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `a + b sqrt(d)`, normalized (perfect squares collapse to rationals).
    pub fn surd(a: BigRational, b: BigRational, d: BigInt) -> Result<Self, AlgebraicError> {
        if !d.is_positive() {
            return Err(AlgebraicError::NonPositiveRadicand);
        }
        if b.is_zero() {
            return Ok(AlgebraicNumber::Rational(a));
        }
        let root = d.sqrt();
        if &root * &root == d {
            return Ok(AlgebraicNumber::Rational(a + b * BigRational::from_integer(root)));
        }
        let (s, k) = small_primes_square_split(&d);
        Ok(AlgebraicNumber::Surd(Surd {
            a,
            b: b * BigRational::from_integer(s),
            d: k,
        }))
    }

    /// Exact square root of a positive rational.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self, AlgebraicError> {
        if !r.is_positive() {
            if r.is_zero() {
                return Ok(Self::zero());
            }
            return Err(AlgebraicError::NonPositiveRadicand);
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = r.numer() * r.denom();
        Self::surd(
            BigRational::zero(),
            BigRational::new(BigInt::one(), r.denom().clone()),
            pq,
        )
    }

    /// Construct a polynomial root, verifying that the polynomial has no
    /// rational root and that `isolating` contains exactly one root.
    pub fn poly_root(coeffs: Vec<BigInt>, isolating: BallComplex) -> Result<Self, AlgebraicError> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(AlgebraicError::DegeneratePolynomial);
        }
        if let Some(r) = rational_root(&coeffs) {
            return Err(AlgebraicError::HasRationalRoot(r));
        }
        let p = crate::expr::Poly::from_integers(&coeffs);
        let h = p.to_expr();
        let rect = crate::rootfind::Rect::from_ball(&isolating);
        let prec = isolating.prec().max(64);
        match crate::rootfind::winding_number(&h, &rect, prec) {
            Ok(1) => Ok(AlgebraicNumber::PolyRoot(PolyRoot { coeffs, isolating })),
            Ok(w) => Err(AlgebraicError::NotIsolated(w)),
            Err(e) => Err(AlgebraicError::Unverified(e.to_string())),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            AlgebraicNumber::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AlgebraicNumber::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, AlgebraicNumber::Rational(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, AlgebraicNumber::Rational(_))
    }

    /// Decidable for every variant: surds are irrational by normalization,
    /// polynomial roots by the construction-time rational-root scan.
    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    /// Small nonnegative integer value, if this is one.
    pub fn as_small_integer(&self) -> Option<i64> {
        match self {
            AlgebraicNumber::Rational(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            AlgebraicNumber::Rational(r) => AlgebraicNumber::Rational(-r),
            AlgebraicNumber::Surd(s) => AlgebraicNumber::Surd(Surd {
                a: -&s.a,
                b: -&s.b,
                d: s.d.clone(),
            }),
            AlgebraicNumber::PolyRoot(p) => {
                // roots of p(-x)
                let coeffs = p
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                    .collect();
                AlgebraicNumber::PolyRoot(PolyRoot {
                    coeffs,
                    isolating: p.isolating.neg(),
                })
            }
        }
    }

    fn parts(&self) -> Option<(BigRational, BigRational, Option<BigInt>)> {
        match self {
            AlgebraicNumber::Rational(r) => Some((r.clone(), BigRational::zero(), None)),
            AlgebraicNumber::Surd(s) => Some((s.a.clone(), s.b.clone(), Some(s.d.clone()))),
            AlgebraicNumber::PolyRoot(_) => None,
        }
    }

    fn common_field(x: &Option<BigInt>, y: &Option<BigInt>) -> Option<Option<BigInt>> {
        match (x, y) {
            (None, None) => Some(None),
            (Some(d), None) | (None, Some(d)) => Some(Some(d.clone())),
            (Some(d), Some(e)) if d == e => Some(Some(d.clone())),
            _ => None,
        }
    }

    fn from_parts(a: BigRational, b: BigRational, d: Option<BigInt>) -> Self {
        match d {
            Some(d) if !b.is_zero() => AlgebraicNumber::Surd(Surd { a, b, d }),
            _ => AlgebraicNumber::Rational(a),
        }
    }

    /// Exact sum when both operands live in the same quadratic field.
    pub fn add(&self, o: &Self) -> Option<Self> {
        let (a1, b1, d1) = self.parts()?;
        let (a2, b2, d2) = o.parts()?;
        let d = Self::common_field(&d1, &d2)?;
        Some(Self::from_parts(a1 + a2, b1 + b2, d))
    }

    pub fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Option<Self> {
        let (a1, b1, d1) = self.parts()?;
        let (a2, b2, d2) = o.parts()?;
        let d = Self::common_field(&d1, &d2)?;
        let dd = d
            .as_ref()
            .map(|v| BigRational::from_integer(v.clone()))
            .unwrap_or_else(BigRational::zero);
        let a = &a1 * &a2 + &b1 * &b2 * &dd;
        let b = &a1 * &b2 + &a2 * &b1;
        Some(Self::from_parts(a, b, d))
    }

    pub fn inv(&self) -> Option<Self> {
        let (a, b, d) = self.parts()?;
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let dd = d
            .as_ref()
            .map(|v| BigRational::from_integer(v.clone()))
            .unwrap_or_else(BigRational::zero);
        let n = &a * &a - &b * &b * &dd;
        Some(Self::from_parts(&a / &n, -&b / &n, d))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        self.mul(&o.inv()?)
    }

    /// Exact comparison with zero for the real variants.
    pub fn signum(&self) -> Option<i32> {
        let (a, b, d) = self.parts()?;
        let sa = a.signum().to_i32().unwrap_or(0);
        let sb = b.signum().to_i32().unwrap_or(0);
        let Some(d) = d else { return Some(sa) };
        if sa == 0 || sa == sb {
            return Some(if sb == 0 { sa } else { sb });
        }
        if sb == 0 {
            return Some(sa);
        }
        // signs differ: compare a^2 with b^2 d
        let lhs = &a * &a;
        let rhs = &b * &b * BigRational::from_integer(d);
        Some(if lhs > rhs { sa } else { sb })
    }

    /// Enclosure at `prec` bits; polynomial roots are refined by interval Newton.
    pub fn enclose(&self, prec: u32) -> BallComplex {
        match self {
            AlgebraicNumber::Rational(r) => BallComplex::from_real(BallReal::from_rational(r, prec)),
            AlgebraicNumber::Surd(s) => {
                let wp = prec + 16;
                let root = BallReal::from_bigint(&s.d, wp).sqrt().expect("positive radicand");
                let v = BallReal::from_rational(&s.a, wp)
                    .add(&BallReal::from_rational(&s.b, wp).mul(&root));
                BallComplex::from_real(v.with_prec(prec))
            }
            AlgebraicNumber::PolyRoot(p) => {
                let h = crate::expr::Poly::from_integers(&p.coeffs).to_expr();
                let enc = crate::rootfind::RootEnclosure::winding_one(p.isolating.clone(), prec);
                match crate::rootfind::refine_root(&h, &enc, prec) {
                    Ok(r) => r.ball().with_prec(prec),
                    Err(_) => p.isolating.clone(),
                }
            }
        }
    }

    /// Exact equality for rational/surd values; boxes are refined until
    /// disjoint for polynomial roots. `None` means undecided at budget.
    pub fn distinct_from(&self, o: &Self, budget: RefineBudget) -> Option<bool> {
        if let (Some(_), Some(_)) = (self.parts(), o.parts()) {
            return Some(self != o);
        }
        if self == o {
            return Some(false);
        }
        // a shared root keeps the boxes overlapping at every precision
        let mut prec = budget.start_prec;
        for _ in 0..=budget.doublings {
            let a = self.enclose(prec);
            let b = o.enclose(prec);
            if !a.overlaps(&b) {
                return Some(true);
            }
            prec = prec.saturating_mul(2).min(budget.max_prec);
        }
        None
    }
}

/// Rational root of an integer polynomial (low degree first), if any.
pub fn rational_root(coeffs: &[BigInt]) -> Option<BigRational> {
    let eval = |r: &BigRational| {
        coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * r + BigRational::from_integer(c.clone()))
    };
    // zero root
    let low = coeffs.iter().position(|c| !c.is_zero())?;
    if low > 0 {
        return Some(BigRational::zero());
    }
    let a0 = coeffs[0].abs();
    let an = coeffs.last()?.abs();
    let ps = divisors(&a0);
    let qs = divisors(&an);
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for s in [BigRational::new(p.clone(), q.clone()), BigRational::new(-p.clone(), q.clone())] {
                if eval(&s).is_zero() {
                    return Some(s);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            small.push(i.clone());
            let other = n / &i;
            if other != i {
                large.push(other);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::Rational(r) => fmt_rational(r, f),
            AlgebraicNumber::Surd(s) => {
                if !s.a.is_zero() {
                    fmt_rational(&s.a, f)?;
                    f.write_str(" + ")?;
                }
                if !s.b.is_one() {
                    fmt_rational(&s.b, f)?;
                    f.write_str("*")?;
                }
                write!(f, "sqrt({})", s.d)
            }
            AlgebraicNumber::PolyRoot(p) => {
                let (re, im) = p.isolating.to_f64();
                write!(f, "root(")?;
                for (i, c) in p.coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "; near {re:.6}{im:+.6}i)")
            }
        }
    }
}
