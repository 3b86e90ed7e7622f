use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{elementary as el, BallComplex, BallError, BallReal};

/// Elementary functions available to expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Csc,
    Sec,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Asin,
    Acos,
    Atan,
    Acot,
    Asec,
    Acsc,
}

impl Func {
    pub const ALL: [Func; 19] = [
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Csc,
        Func::Sec,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Asin,
        Func::Acos,
        Func::Atan,
        Func::Acot,
        Func::Asec,
        Func::Acsc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Csc => "csc",
            Func::Sec => "sec",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
            Func::Acot => "acot",
            Func::Asec => "asec",
            Func::Acsc => "acsc",
        }
    }

    /// The inverse trigonometric functions.
    pub fn is_arc(self) -> bool {
        matches!(
            self,
            Func::Asin | Func::Acos | Func::Atan | Func::Acot | Func::Asec | Func::Acsc
        )
    }

    /// Logarithm plus the trigonometric and hyperbolic functions.
    pub fn is_log_trig_hyperbolic(self) -> bool {
        matches!(
            self,
            Func::Ln
                | Func::Sin
                | Func::Cos
                | Func::Tan
                | Func::Csc
                | Func::Sec
                | Func::Cot
                | Func::Sinh
                | Func::Cosh
                | Func::Tanh
                | Func::Coth
        )
    }

    /// Trigonometric and hyperbolic functions (no logarithm).
    pub fn is_trig_hyperbolic(self) -> bool {
        self.is_log_trig_hyperbolic() && self != Func::Ln
    }

    pub fn apply_real(self, x: &BallReal) -> Result<BallReal, BallError> {
        match self {
            Func::Exp => el::try_exp(x),
            Func::Ln => el::ln(x),
            Func::Sqrt => el::sqrt(x),
            Func::Sin => el::sin(x),
            Func::Cos => el::cos(x),
            Func::Tan => el::tan(x),
            Func::Csc => el::csc(x),
            Func::Sec => el::sec(x),
            Func::Cot => el::cot(x),
            Func::Sinh => el::sinh(x),
            Func::Cosh => el::cosh(x),
            Func::Tanh => el::tanh(x),
            Func::Coth => el::coth(x),
            Func::Asin => el::asin(x),
            Func::Acos => el::acos(x),
            Func::Atan => Ok(el::atan(x)),
            Func::Acot => Ok(el::acot(x)),
            Func::Asec => el::asec(x),
            Func::Acsc => el::acsc(x),
        }
    }

    pub fn apply(self, z: &BallComplex) -> Result<BallComplex, BallError> {
        match self {
            Func::Exp => z.exp(),
            Func::Ln => z.ln(),
            Func::Sqrt => z.sqrt(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Tan => z.tan(),
            Func::Csc => z.csc(),
            Func::Sec => z.sec(),
            Func::Cot => z.cot(),
            Func::Sinh => z.sinh(),
            Func::Cosh => z.cosh(),
            Func::Tanh => z.tanh(),
            Func::Coth => z.coth(),
            Func::Asin => z.asin(),
            Func::Acos => z.acos(),
            Func::Atan => z.atan(),
            Func::Acot => z.acot(),
            Func::Asec => z.asec(),
            Func::Acsc => z.acsc(),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Func {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let alias = match s {
            "log" => "ln",
            "arcsin" => "asin",
            "arccos" => "acos",
            "arctan" => "atan",
            "arccot" => "acot",
            "arcsec" => "asec",
            "arccsc" => "acsc",
            other => other,
        };
        Func::ALL.into_iter().find(|f| f.name() == alias).ok_or(())
    }
}
