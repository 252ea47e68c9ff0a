use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A discrete mode list has no pointwise density; sum over the modes instead.
    #[error("discrete mode lists have no pointwise spectral density")]
    DiscretePointwiseEval,

    #[error(
        "quadrature did not reach tolerance after {evals} evaluations \
         (estimate {estimate:e}, error {error:e})"
    )]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        evals: usize,
    },

    #[error("kappa diverges for ohmicity s = {s} (requires s > 0)")]
    DivergentKappa { s: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hilbert space dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("projected Gibbs weight underflowed; lower beta or raise the truncation")]
    DegenerateNormalization,

    #[error("rate curve needs at least 3 points, got {points}")]
    DegenerateGrid { points: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
