use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: price must be positive, got {price}")]
    NonPositivePrice { line: usize, price: f64 },
    #[error("line {line}: timestamp {timestamp} does not increase")]
    NonMonotonicTimestamp { line: usize, timestamp: i64 },
    #[error("series too short: need at least {needed} points, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("return interval of {delta} steps needs more than {len} prices")]
    DeltaTooLarge { delta: usize, len: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("intraday profile has {got} steps, expected {expected}")]
    ProfileMismatch { expected: usize, got: usize },
    #[error("max lag {max_lag} is too large for a series of length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("no sample passes the threshold at lag {lag}")]
    EmptyCondition { lag: usize },
    #[error("smoothing window {window} is invalid for a curve of {max_lag} lags")]
    WindowTooLarge { window: usize, max_lag: usize },
    #[error("power-law fit needs at least 3 positive points in range, found {found}")]
    InsufficientPoints { found: usize },
    #[error("no samples on the requested side of the distribution")]
    EmptySide,
    #[error("expected a {expected} curve, got {got}")]
    WrongCurveKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("series of length {len} is too short for a kernel of {t_max} lags")]
    SeriesTooShort { len: usize, t_max: usize },
    #[error("reference volatility of length {len} is too short for a kernel of {t_max} lags")]
    RefTooShort { len: usize, t_max: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
