use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse {input:?} as a rational: {reason}")]
    Parse { input: String, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("N = {n} exceeds the enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("z = {0} lies on a branch cut; request a boundary value (+ or - side)")]
    OnCut(String),

    #[error("logarithmic singularity at z = 0")]
    Singular,

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("precision too low to resolve the target quantity; need at least {required_bits} bits")]
    Precision { required_bits: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("i/o: {0}")]
    Io(String),
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
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
