use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degree k = {0} is not allowed; model surfaces require k >= 3")]
    DegreeTooSmall(i64),

    #[error("expected {expected} coefficients gamma_1..gamma_{{k-1}}, got {got}")]
    GammaLength { expected: usize, got: usize },

    #[error("all gamma coefficients vanish; P must be nonzero")]
    ZeroSurface,

    #[error("component {component} depends on {var}, which violates para-holomorphicity")]
    MixedVariables { component: &'static str, var: char },

    #[error("invalid defining function: {0}")]
    InvalidDefiningFunction(String),

    #[error("surface is not binomial")]
    NotBinomial,

    #[error("flow {flow} is not admissible for this surface: {reason}")]
    InadmissibleFlow { flow: &'static str, reason: String },

    #[error("flow domain violated: {0}")]
    DomainViolation(String),

    #[error("oracle mismatch at weight {weight}: {detail}")]
    OracleMismatch { weight: i64, detail: String },

    #[error("denominator 1 + d(phi)/da has vanishing constant term")]
    NonUnitDenominator,

    #[error("{0}")]
    Invalid(String),
}
