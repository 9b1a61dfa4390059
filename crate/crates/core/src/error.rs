use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma pole: argument {0} is a nonpositive integer")]
    Pole(f64),
    #[error("non-finite argument {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergeomError {
    #[error("parameter pole: w = {0} is a nonpositive integer")]
    ParamPole(f64),
    #[error("non-finite parameter")]
    NonFiniteParam,
    #[error("series did not reach tolerance {tol:e} within {max_terms} terms (|z| = {abs_z})")]
    NoConvergence {
        max_terms: usize,
        tol: f64,
        abs_z: f64,
    },
    #[error("|z| = {abs_z} exceeds r_max = {r_max}")]
    Domain { abs_z: f64, r_max: f64 },
    #[error("tolerance {0:e} outside [1e-14, 1)")]
    InvalidTolerance(f64),
    #[error("derivative order {0} not supported (use 1 or 2)")]
    InvalidOrder(u8),
    #[error("denominator |{modulus:e}| below threshold at z = {re} + {im}i")]
    Denominator { modulus: f64, re: f64, im: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoxWrightError {
    #[error(transparent)]
    Gamma(#[from] SpecFunError),
    #[error("log-magnitude {0} exceeds 700")]
    Overflow(f64),
    #[error(
        "two-sided bound not applicable: psi1 > psi2 and psi1^2 < psi0 psi2 with psi0 > 0 required"
    )]
    Validity,
    #[error("term ratios did not decay within {0} terms")]
    NoConvergence(usize),
    #[error("|z| = {0} outside [0, 1]")]
    Domain(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("invalid Janowski pair (C = {c}, D = {d}): need -1 <= D < C <= 1")]
    InvalidPair { c: f64, d: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Params(#[from] HypergeomError),
    #[error(transparent)]
    Pair(#[from] DomainError),
    #[error("C - D = {0:e} too close to zero")]
    DegeneratePair(f64),
    #[error("Janowski condition sets need a (C, D) pair")]
    MissingPair,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Params(#[from] HypergeomError),
    #[error("target {target} is not compatible with functional {kind}")]
    IncompatibleTarget { kind: String, target: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("scan would visit {0} points, above the budget of 10^7")]
    Budget(u64),
    #[error("no rows to summarize")]
    EmptyInput,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
