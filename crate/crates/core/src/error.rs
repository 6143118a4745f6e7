use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible exponent grids: {0} vs {1}")]
    GridMismatch(u32, u32),
    #[error("division by a series whose leading coefficient vanishes")]
    ZeroLeading,
    #[error("series order {have} too small, need {need}")]
    OrderTooSmall { have: i64, need: i64 },
    #[error("unsupported form label: {0}")]
    UnsupportedLabel(String),
    #[error("no form of weight {k} with pole order {m}")]
    NoSuchForm { k: i64, m: i64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch angle {0} outside (pi/2, 3pi/2) minus {{pi}}")]
    BranchAngle(f64),
    #[error("requested accuracy unreachable: {0}")]
    Accuracy(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("degenerate quadratic module: {0}")]
    Degenerate(String),
    #[error("module mismatch")]
    ModuleMismatch,
    #[error("invalid discriminant {0}")]
    Discriminant(i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("rounding residual {residual} at n = {n} exceeds the bound")]
    Rounding { n: i64, residual: f64 },
    #[error("point {0} lies on a branch cut")]
    CutCollision(String),
    #[error("coverage gap at exponent {0}")]
    Coverage(i64),
    #[error("ill-conditioned extrapolation (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
