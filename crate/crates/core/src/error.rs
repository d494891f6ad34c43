use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite input")]
    NonFinite,

    #[error("argument {0} lies on the branch cut (1, inf) of Li2")]
    OnCut(String),

    #[error("empty input")]
    Empty,

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("p = {p} and N = {n} are not coprime")]
    NotCoprime { p: u32, n: u32 },

    #[error("index k = {0} is an excluded lattice point")]
    ExcludedIndex(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
