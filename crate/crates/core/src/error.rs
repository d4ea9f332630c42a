use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A perturbative denominator fell inside the hard pole guard.
    #[error("pole in {term}: denominator {denominator:.3e} GHz ({label})")]
    Pole {
        term: &'static str,
        label: String,
        denominator: f64,
    },

    #[error("singular capacitance matrix (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("invalid truncation: {0}")]
    Truncation(String),

    #[error("basis index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("state {0} was not assigned")]
    MissingState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
