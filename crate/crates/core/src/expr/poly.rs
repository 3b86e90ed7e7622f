//! Dense univariate polynomials with exact rational/surd coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::{AlgebraicNumber, Expr};
use crate::ball::{BallComplex, BallError};

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<AlgebraicNumber>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<AlgebraicNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: AlgebraicNumber) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(AlgebraicNumber::one())
    }

    pub fn x() -> Self {
        Self::new(vec![AlgebraicNumber::zero(), AlgebraicNumber::one()])
    }

    pub fn from_integers(c: &[BigInt]) -> Self {
        Self::new(
            c.iter()
                .map(|v| AlgebraicNumber::rational(BigRational::from_integer(v.clone())))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[AlgebraicNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> AlgebraicNumber {
        self.coeffs.first().cloned().unwrap_or_else(AlgebraicNumber::zero)
    }

    pub fn leading(&self) -> AlgebraicNumber {
        self.coeffs.last().cloned().unwrap_or_else(AlgebraicNumber::zero)
    }

    pub fn coeff(&self, k: usize) -> AlgebraicNumber {
        self.coeffs.get(k).cloned().unwrap_or_else(AlgebraicNumber::zero)
    }

    pub fn add(&self, o: &Self) -> Option<Self> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&o.coeff(k))?);
        }
        Some(Self::new(out))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Option<Self> {
        if self.is_zero() || o.is_zero() {
            return Some(Self::zero());
        }
        let mut out = vec![AlgebraicNumber::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Some(Self::new(out))
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> Option<Self> {
        Some(Self::new(
            self.coeffs
                .iter()
                .map(|a| a.mul(c))
                .collect::<Option<Vec<_>>>()?,
        ))
    }

    pub fn pow(&self, n: u32) -> Option<Self> {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self)?;
        }
        Some(r)
    }

    /// Divide every coefficient by the leading one (monic form).
    pub fn monic(&self) -> Option<(AlgebraicNumber, Self)> {
        let lc = self.leading();
        if lc.is_zero() {
            return None;
        }
        Some((lc.clone(), self.scale(&lc.inv()?)?))
    }

    /// Polynomial view of an expression, if it has one.
    pub fn from_expr(e: &Expr) -> Option<Self> {
        match e {
            Expr::Const(c) => match c {
                AlgebraicNumber::PolyRoot(_) => None,
                _ => Some(Self::constant(c.clone())),
            },
            Expr::Var => Some(Self::x()),
            Expr::Named(_) | Expr::Fn(..) => None,
            Expr::Add(a, b) => Self::from_expr(a)?.add(&Self::from_expr(b)?),
            Expr::Sub(a, b) => Self::from_expr(a)?.sub(&Self::from_expr(b)?),
            Expr::Mul(a, b) => Self::from_expr(a)?.mul(&Self::from_expr(b)?),
            Expr::Div(a, b) => {
                let d = Self::from_expr(b)?;
                if !d.is_constant() || d.is_zero() {
                    return None;
                }
                Self::from_expr(a)?.scale(&d.constant_term().inv()?)
            }
            Expr::Pow(a, b) => {
                let n = Self::from_expr(b)?;
                if !n.is_constant() {
                    return None;
                }
                let k = n.constant_term().as_small_integer()?;
                if !(0..=256).contains(&k) {
                    return None;
                }
                Self::from_expr(a)?.pow(k as u32)
            }
        }
    }

    /// Canonical expression, highest degree first.
    pub fn to_expr(&self) -> Expr {
        if self.is_zero() {
            return Expr::int(0);
        }
        let mut acc: Option<Expr> = None;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let negative = c.signum() == Some(-1) && acc.is_some();
            let mag = if negative { c.neg() } else { c.clone() };
            let mono = match k {
                0 => None,
                1 => Some(Expr::Var),
                _ => Some(Expr::pow(Expr::Var, Expr::int(k as i64))),
            };
            let term = match mono {
                None => Expr::Const(mag),
                Some(m) if mag.is_one() => m,
                Some(m) => Expr::mul(Expr::Const(mag), m),
            };
            acc = Some(match acc {
                None => term,
                Some(a) if negative => Expr::sub(a, term),
                Some(a) => Expr::add(a, term),
            });
        }
        acc.expect("nonzero polynomial")
    }

    /// Horner evaluation on a complex ball.
    pub fn eval(&self, x: &BallComplex, prec: u32) -> Result<BallComplex, BallError> {
        let mut acc = BallComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.enclose(prec));
        }
        Ok(acc)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&AlgebraicNumber::integer(k as i64)).expect("same field"))
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
