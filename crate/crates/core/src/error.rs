use thiserror::Error;

/// Errors raised by the numerical core and the experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("breakpoints must be strictly increasing and finite")]
    NonMonotoneBreakpoints,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value {0}")]
    NonFiniteValue(f64),
    #[error("grid weights must be nonnegative and finite")]
    NegativeWeight,
    #[error("averaging radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("heat time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("evaluation point {0} is a breakpoint of the input (logarithmic singularity)")]
    SingularPoint(f64),
    #[error("exponent must be at least 1, got {0}")]
    InvalidQ(f64),
    #[error("exponent must be greater than 1, got {0}")]
    InvalidR(f64),
    #[error("brute force limited to 20 values, got {0}")]
    TooLong(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("radii must be positive and strictly decreasing")]
    InvalidRadiusSet,
    #[error("power-law fit needs at least three positive points with distinct abscissae")]
    DegenerateInput,
    #[error("lacunary base must be > 1 and depth k_min <= -1 (a = {a}, k_min = {k_min})")]
    InvalidBase { a: f64, k_min: i32 },
    #[error("truncation depth k_min = {k_min} too shallow for base {a} up to scale j = {j_max}")]
    TruncationTooShallow { a: f64, k_min: i32, j_max: i32 },
    #[error("no candidate base certifies a key constant >= {threshold}")]
    NoAdmissibleBase { threshold: f64 },
    #[error("bad index range j0 = {j0}, j1 = {j1}")]
    BadRange { j0: i32, j1: i32 },
    #[error("key estimate not positive on the requested scale range")]
    KeyEstimateFailed,
    #[error("scale a^(-2 j) = {a}^(-2*{j}) is outside double precision range")]
    FloatRangeExceeded { a: f64, j: i32 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
