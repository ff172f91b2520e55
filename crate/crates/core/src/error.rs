use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter-domain constraint failed; the payload names it.
    #[error("requires {0}")]
    Domain(String),
    /// A weighted integral would diverge; the payload names the violated condition.
    #[error("integral does not converge: requires {0}")]
    NotIntegrable(String),
    #[error("radial proposal with exponent {alpha} is not normalizable in dimension {dim}: requires alpha > {min}")]
    NonNormalizable { alpha: f64, dim: usize, min: f64 },
    #[error("subspace lies in the exceptional hyperplane orthogonal to the pole")]
    ExceptionalSet,
    #[error("rank-deficient draw persisted after {0} retries")]
    Degenerate(u32),
    #[error("matrix is singular or ill-conditioned (condition number {0:e})")]
    Singular(f64),
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("field has no closed form for {0}")]
    MissingClosedForm(&'static str),
    #[error("evaluator produced a non-finite value")]
    NonFinite,
    #[error("result overflows the representable range")]
    Overflow,
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(constraint: &str) -> Error {
    Error::Domain(String::from(constraint))
}

pub(crate) fn ensure(cond: bool, constraint: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(domain(constraint))
    }
}
