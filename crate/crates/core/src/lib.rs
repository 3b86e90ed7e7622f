//! Validated arithmetic, certified root location, and transcendence
//! certificates for exponential-polynomial and power-product equations.

pub mod ball;
pub mod expr;
pub mod rootfind;
pub mod certify;
pub mod digitstream;
