use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moments implemented for centered mixtures only")]
    UncenteredMoment,

    #[error("degenerate: not a second-order kernel (alpha={alpha}, sigma={sigma})")]
    NotSecondOrder { alpha: f64, sigma: f64 },

    #[error("threshold defined for negative-tailed kernels only (sigma={0})")]
    NotNegativeTailed(f64),

    /// The (alpha, sigma) model was fitted on 100 <= n <= 500000 only. The
    /// values at the nearest endpoint are carried along so the caller can
    /// decide whether to use them.
    #[error(
        "sample size {n} outside model range [100, 500000]; \
         nearest endpoint gives alpha={suggested_alpha}, sigma={suggested_sigma}"
    )]
    OutsideModelRange {
        n: u64,
        suggested_alpha: f64,
        suggested_sigma: f64,
    },

    #[error("need at least 2 observations")]
    TooFewObservations,

    #[error("criterion degenerate: no spread")]
    NoSpread,

    #[error("MISE minimizer at search boundary")]
    MinimizerAtBoundary,

    #[error("outside local-bandwidth domain: x={0}")]
    OutsideDomain(f64),

    #[error("line {line}: cannot parse {content:?} as a number")]
    Parse { line: usize, content: String },

    #[error("unknown density {0:?}")]
    UnknownDensity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
