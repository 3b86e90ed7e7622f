use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallError {
    #[error("divisor ball may contain zero")]
    DivisorMayBeZero,
    #[error("{func}: argument ball leaves the domain")]
    DomainViolation { func: &'static str },
    #[error("{func}: argument ball straddles the principal branch cut")]
    BranchCutStraddle { func: &'static str },
}
